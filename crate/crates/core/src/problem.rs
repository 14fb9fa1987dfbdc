//! The decoding problem `(H, A, p)` and its QDEM1 text format.
//!
//! QDEM1 layout (UTF-8, LF newlines):
//!
//! ```text
//! QDEM1 <N> <M> <K>
//! <M lines: rows of H as sorted column indices, blank for an empty row>
//! <K lines: rows of A, same encoding>
//! <N lines: one probability per line>
//! ```

use std::io::{Read, Write};

use crate::error::{check_len, Error, ParseErrorKind, Result};
use crate::gf2::{BitVector, SparseBinaryMatrix};
use crate::tanner::TannerGraph;

const MAGIC: &str = "QDEM1";

/// Prior log-likelihood ratio `ln((1 - p) / p)` in nats.
pub fn llr(p: f64) -> f64 {
    ((1.0 - p) / p).ln()
}

/// Parity-check matrix `h` (M×N), logical matrix `a` (K×N) and per-column
/// error probabilities. Immutable once built.
#[derive(Clone, Debug)]
pub struct DecodingProblem {
    h: SparseBinaryMatrix,
    a: SparseBinaryMatrix,
    probs: Vec<f64>,
    prior_llr: Vec<f64>,
    tanner: TannerGraph,
}

impl DecodingProblem {
    pub fn new(h: SparseBinaryMatrix, a: SparseBinaryMatrix, probs: Vec<f64>) -> Result<Self> {
        check_len("columns of A", h.num_cols(), a.num_cols())?;
        check_len("probability count", h.num_cols(), probs.len())?;
        if let Some((index, &value)) = probs
            .iter()
            .enumerate()
            .find(|(_, &p)| !(p > 0.0 && p <= 0.5))
        {
            return Err(Error::InvalidProbability { index, value });
        }
        let prior_llr = probs.iter().map(|&p| llr(p)).collect();
        let tanner = TannerGraph::new(&h);
        Ok(Self {
            h,
            a,
            probs,
            prior_llr,
            tanner,
        })
    }

    pub fn h(&self) -> &SparseBinaryMatrix {
        &self.h
    }

    pub fn a(&self) -> &SparseBinaryMatrix {
        &self.a
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn prior_llr(&self) -> &[f64] {
        &self.prior_llr
    }

    pub fn tanner(&self) -> &TannerGraph {
        &self.tanner
    }

    /// N, the number of error sources.
    pub fn num_errors(&self) -> usize {
        self.h.num_cols()
    }

    /// M, the number of detectors.
    pub fn num_detectors(&self) -> usize {
        self.h.num_rows()
    }

    /// K, the number of logical observables.
    pub fn num_logicals(&self) -> usize {
        self.a.num_rows()
    }

    pub fn syndrome_of(&self, e: &BitVector) -> Result<BitVector> {
        check_len("error vector length", self.num_errors(), e.len())?;
        self.h.matvec(e)
    }

    pub fn logical_flip(&self, e: &BitVector) -> Result<BitVector> {
        check_len("error vector length", self.num_errors(), e.len())?;
        self.a.matvec(e)
    }

    /// `Σ ê_j ln((1 - p_j) / p_j)`.
    pub fn error_weight(&self, e: &BitVector) -> Result<f64> {
        check_len("error vector length", self.num_errors(), e.len())?;
        Ok(e.iter_ones().fold(0.0, |acc, j| acc + self.prior_llr[j]))
    }

    pub fn load<R: Read>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        parse_qdem(&text)
    }

    /// Writes the canonical QDEM1 encoding.
    pub fn save<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(
            writer,
            "{MAGIC} {} {} {}",
            self.num_errors(),
            self.num_detectors(),
            self.num_logicals()
        )?;
        for row in self.h.rows().iter().chain(self.a.rows()) {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            writeln!(writer, "{}", line.join(" "))?;
        }
        for p in &self.probs {
            writeln!(writer, "{p:.16e}")?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_qdem_string(&self) -> String {
        let mut buf = Vec::new();
        self.save(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("QDEM1 output is ASCII")
    }
}

fn parse_err(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { line, kind }
}

fn parse_qdem(text: &str) -> Result<DecodingProblem> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .filter(|(_, l)| !l.is_empty())
        .ok_or_else(|| parse_err(1, ParseErrorKind::Truncated))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || parse_err(1, ParseErrorKind::MalformedHeader(header.to_string()));
    if fields.len() != 4 || fields[0] != MAGIC {
        return Err(bad_header());
    }
    let dims: Vec<usize> = fields[1..]
        .iter()
        .map(|f| f.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad_header())?;
    let (n, m, k) = (dims[0], dims[1], dims[2]);

    let mut next_line = |expected_total: usize| {
        lines
            .next()
            .ok_or_else(|| parse_err(expected_total, ParseErrorKind::Truncated))
    };

    let mut read_rows = |count: usize, first_line: usize| -> Result<Vec<Vec<usize>>> {
        let mut rows = Vec::with_capacity(count);
        for r in 0..count {
            let (line_no, line) = next_line(first_line + r)?;
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let j: usize = tok
                    .parse()
                    .map_err(|_| parse_err(line_no, ParseErrorKind::BadIndex(tok.to_string())))?;
                if j >= n {
                    return Err(parse_err(
                        line_no,
                        ParseErrorKind::IndexOutOfRange { index: j, bound: n },
                    ));
                }
                if row.last().is_some_and(|&prev| prev >= j) {
                    return Err(parse_err(line_no, ParseErrorKind::UnsortedIndices));
                }
                row.push(j);
            }
            rows.push(row);
        }
        Ok(rows)
    };
    let h_rows = read_rows(m, 2)?;
    let a_rows = read_rows(k, 2 + m)?;

    let mut probs = Vec::with_capacity(n);
    for c in 0..n {
        let (line_no, line) = next_line(2 + m + k + c)?;
        let tok = line.trim();
        if tok.is_empty() {
            return Err(parse_err(line_no, ParseErrorKind::Truncated));
        }
        let p: f64 = tok
            .parse()
            .map_err(|_| parse_err(line_no, ParseErrorKind::BadNumber(tok.to_string())))?;
        if !(p > 0.0 && p <= 0.5) {
            return Err(parse_err(line_no, ParseErrorKind::ProbabilityOutOfRange(p)));
        }
        probs.push(p);
    }
    for (line_no, line) in lines {
        if !line.trim().is_empty() {
            return Err(parse_err(line_no, ParseErrorKind::TrailingData));
        }
    }

    let h = SparseBinaryMatrix::from_rows(m, n, h_rows)?;
    let a = SparseBinaryMatrix::from_rows(k, n, a_rows)?;
    DecodingProblem::new(h, a, probs)
}

/// Reads a syndrome file: one line of `0`/`1` characters.
pub fn read_syndrome<R: Read>(mut reader: R, expected_len: usize) -> Result<BitVector> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let mut lines = text.lines();
    let first = lines.next().unwrap_or("").trim_end_matches('\r');
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(parse_err(2, ParseErrorKind::TrailingData));
    }
    let s: BitVector = first.parse()?;
    if s.len() != expected_len {
        return Err(parse_err(
            1,
            ParseErrorKind::LengthMismatch {
                expected: expected_len,
                actual: s.len(),
            },
        ));
    }
    Ok(s)
}

pub fn write_syndrome<W: Write>(mut writer: W, s: &BitVector) -> Result<()> {
    writeln!(writer, "{s}")?;
    Ok(())
}
