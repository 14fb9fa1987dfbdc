use std::fmt;

/// Errors produced by the decoding library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid probability {value} for error {index}: must lie in (0, 0.5]")]
    InvalidProbability { index: usize, value: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid mask: {0}")]
    InvalidMask(String),
    #[error("every error node is masked; no branch node available")]
    AllMasked,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            actual,
        })
    }
}

/// What went wrong while reading a QDEM1 or syndrome file.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    MalformedHeader(String),
    BadIndex(String),
    IndexOutOfRange { index: usize, bound: usize },
    UnsortedIndices,
    BadNumber(String),
    ProbabilityOutOfRange(f64),
    BadBit(char),
    LengthMismatch { expected: usize, actual: usize },
    Truncated,
    TrailingData,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MalformedHeader(h) => write!(f, "malformed header {h:?}"),
            ParseErrorKind::BadIndex(s) => write!(f, "bad index {s:?}"),
            ParseErrorKind::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (must be < {bound})")
            }
            ParseErrorKind::UnsortedIndices => write!(f, "indices not strictly increasing"),
            ParseErrorKind::BadNumber(s) => write!(f, "bad number {s:?}"),
            ParseErrorKind::ProbabilityOutOfRange(p) => {
                write!(f, "probability out of range: {p} not in (0, 0.5]")
            }
            ParseErrorKind::BadBit(c) => write!(f, "bad syndrome character {c:?}"),
            ParseErrorKind::LengthMismatch { expected, actual } => {
                write!(f, "expected {expected} bits, got {actual}")
            }
            ParseErrorKind::Truncated => write!(f, "truncated stream"),
            ParseErrorKind::TrailingData => write!(f, "unexpected trailing data"),
        }
    }
}
