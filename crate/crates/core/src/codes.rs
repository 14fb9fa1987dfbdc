//! CSS code constructors and code-capacity decoding problems.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{kernel_basis, rank, BitVector, SparseBinaryMatrix, XorBasis};
use crate::problem::DecodingProblem;

/// A CSS code given by its X- and Z-type check matrices.
#[derive(Clone, Debug)]
pub struct CssCode {
    pub hx: SparseBinaryMatrix,
    pub hz: SparseBinaryMatrix,
}

impl CssCode {
    pub fn new(hx: SparseBinaryMatrix, hz: SparseBinaryMatrix) -> Result<Self> {
        if hx.num_cols() != hz.num_cols() {
            return Err(Error::InvalidCode(format!(
                "H_X has {} columns but H_Z has {}",
                hx.num_cols(),
                hz.num_cols()
            )));
        }
        let code = Self { hx, hz };
        if !code.is_orthogonal() {
            return Err(Error::InvalidCode("H_X · H_Zᵀ != 0".into()));
        }
        Ok(code)
    }

    /// Number of physical qubits.
    pub fn n(&self) -> usize {
        self.hx.num_cols()
    }

    /// Number of logical qubits, `n - rank(H_X) - rank(H_Z)`.
    pub fn k(&self) -> usize {
        self.n() - rank(&self.hx) - rank(&self.hz)
    }

    pub fn is_orthogonal(&self) -> bool {
        self.hx
            .mul(&self.hz.transpose())
            .map(|p| p.is_zero())
            .unwrap_or(false)
    }
}

/// Repetition code on `n` bits: Z-checks on neighbouring pairs, no X-checks.
pub fn repetition_code(n: usize) -> Result<CssCode> {
    if n < 2 {
        return Err(Error::InvalidCode(format!(
            "repetition code needs n >= 2, got {n}"
        )));
    }
    let hz = SparseBinaryMatrix::from_rows(n - 1, n, (0..n - 1).map(|i| vec![i, i + 1]).collect())?;
    CssCode::new(SparseBinaryMatrix::zeros(0, n), hz)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// `x^e` or `y^e` on the `l × m` torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub axis: Axis,
    pub exponent: usize,
}

impl Monomial {
    pub const fn x(exponent: usize) -> Self {
        Self {
            axis: Axis::X,
            exponent,
        }
    }

    pub const fn y(exponent: usize) -> Self {
        Self {
            axis: Axis::Y,
            exponent,
        }
    }
}

/// Bivariate bicycle code parameters: `A = Σ a_terms`, `B = Σ b_terms`
/// over `F_2[x, y] / (x^l - 1, y^m - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbSpec {
    pub l: usize,
    pub m: usize,
    pub a_terms: [Monomial; 3],
    pub b_terms: [Monomial; 3],
}

impl BbSpec {
    /// [[72,12,6]]: l = m = 6, A = x³ + y + y², B = y³ + x + x².
    pub fn bb72() -> Self {
        Self {
            l: 6,
            m: 6,
            a_terms: [Monomial::x(3), Monomial::y(1), Monomial::y(2)],
            b_terms: [Monomial::y(3), Monomial::x(1), Monomial::x(2)],
        }
    }

    /// [[90,8,10]]: l = 15, m = 3, A = x⁹ + y + y², B = 1 + x² + x⁷.
    pub fn bb90() -> Self {
        Self {
            l: 15,
            m: 3,
            a_terms: [Monomial::x(9), Monomial::y(1), Monomial::y(2)],
            b_terms: [Monomial::x(0), Monomial::x(2), Monomial::x(7)],
        }
    }

    /// [[144,12,12]]: l = 12, m = 6, same polynomials as `bb72`.
    pub fn bb144() -> Self {
        Self {
            l: 12,
            ..Self::bb72()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.l == 0 || self.m == 0 {
            return Err(Error::InvalidCode(
                "BB torus dimensions must be positive".into(),
            ));
        }
        for t in self.a_terms.iter().chain(&self.b_terms) {
            let size = match t.axis {
                Axis::X => self.l,
                Axis::Y => self.m,
            };
            if t.exponent >= size {
                return Err(Error::InvalidCode(format!(
                    "exponent {} not reduced modulo {size}",
                    t.exponent
                )));
            }
        }
        Ok(())
    }

    /// Sum of the cyclic-shift permutation matrices for `terms`.
    fn polynomial_matrix(&self, terms: &[Monomial; 3]) -> SparseBinaryMatrix {
        let size = self.l * self.m;
        let mut entries = Vec::with_capacity(3 * size);
        for a in 0..self.l {
            for b in 0..self.m {
                for t in terms {
                    let (ta, tb) = match t.axis {
                        Axis::X => ((a + t.exponent) % self.l, b),
                        Axis::Y => (a, (b + t.exponent) % self.m),
                    };
                    entries.push((a * self.m + b, ta * self.m + tb));
                }
            }
        }
        SparseBinaryMatrix::from_entries(size, size, entries).expect("indices are in range")
    }
}

/// Bivariate bicycle code with `H_X = [A | B]` and `H_Z = [Bᵀ | Aᵀ]`.
pub fn bb_code(spec: &BbSpec) -> Result<CssCode> {
    spec.validate()?;
    let a = spec.polynomial_matrix(&spec.a_terms);
    let b = spec.polynomial_matrix(&spec.b_terms);
    let hx = a.hstack(&b)?;
    let hz = b.transpose().hstack(&a.transpose())?;
    CssCode::new(hx, hz)
}

/// Hypergraph product of two classical check matrices:
/// `H_X = [H1 ⊗ I | I ⊗ H2ᵀ]`, `H_Z = [I ⊗ H2 | H1ᵀ ⊗ I]`.
pub fn hgp_code(h1: &SparseBinaryMatrix, h2: &SparseBinaryMatrix) -> Result<CssCode> {
    let (m1, n1) = (h1.num_rows(), h1.num_cols());
    let (m2, n2) = (h2.num_rows(), h2.num_cols());
    let hx = h1
        .kron(&SparseBinaryMatrix::identity(n2))
        .hstack(&SparseBinaryMatrix::identity(m1).kron(&h2.transpose()))?;
    let hz = SparseBinaryMatrix::identity(n1)
        .kron(h2)
        .hstack(&h1.transpose().kron(&SparseBinaryMatrix::identity(m2)))?;
    CssCode::new(hx, hz)
}

/// `n × n` circulant whose row `i` has ones at `(i + e) mod n` for each `e`.
pub fn circulant(n: usize, exponents: &[usize]) -> SparseBinaryMatrix {
    let entries = (0..n).flat_map(|i| exponents.iter().map(move |&e| (i, (i + e) % n)));
    SparseBinaryMatrix::from_entries(n, n, entries).expect("indices are in range")
}

/// Check matrix of the [[450,32,8]] cyclic HGP code's classical seed:
/// the 15 × 15 circulant of `1 + x + x⁴`, whose kernel is the [15,4,8]
/// simplex code.
pub fn cyclic_seed_15() -> SparseBinaryMatrix {
    circulant(15, &[0, 1, 4])
}

/// Logical operator bases `(A_X, A_Z)`.
///
/// Rows of `A_Z` lie in `ker(H_X)` and are independent modulo the row space
/// of `H_Z`; `A_X` symmetrically. The basis is not canonical.
pub fn logical_operators(code: &CssCode) -> Result<(SparseBinaryMatrix, SparseBinaryMatrix)> {
    if !code.is_orthogonal() {
        return Err(Error::InvalidCode("H_X · H_Zᵀ != 0".into()));
    }
    let ax = quotient_basis(&code.hz, &code.hx);
    let az = quotient_basis(&code.hx, &code.hz);
    Ok((ax, az))
}

/// Basis of `ker(kernel_of) / rowspace(modulo)`.
fn quotient_basis(
    kernel_of: &SparseBinaryMatrix,
    modulo: &SparseBinaryMatrix,
) -> SparseBinaryMatrix {
    let n = kernel_of.num_cols();
    let mut span = XorBasis::new(n);
    for row in modulo.to_dense_rows() {
        span.insert(&row);
    }
    let rows: Vec<Vec<usize>> = kernel_basis(kernel_of)
        .into_iter()
        .filter(|v| span.insert(v))
        .map(|v| v.iter_ones().collect())
        .collect();
    SparseBinaryMatrix::from_rows(rows.len(), n, rows).expect("supports are sorted")
}

/// Which Pauli component the decoding problem targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorType {
    X,
    Z,
}

impl FromStr for ErrorType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Self::X),
            "Z" | "z" => Ok(Self::Z),
            _ => Err(Error::InvalidConfig(format!("unknown error type {s:?}"))),
        }
    }
}

/// Which stabilizers go into `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stacking {
    /// Only the checks that detect the decoded error type.
    Xz,
    /// All X and Z checks, with separate X, Y and Z columns per qubit.
    Xyz,
}

impl FromStr for Stacking {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "XZ" | "xz" => Ok(Self::Xz),
            "XYZ" | "xyz" => Ok(Self::Xyz),
            _ => Err(Error::InvalidConfig(format!("unknown stacking {s:?}"))),
        }
    }
}

/// Column index of Pauli `pauli` (0 = X, 1 = Y, 2 = Z) on qubit `q` in an
/// XYZ-stacked problem.
pub fn xyz_column(q: usize, pauli: usize) -> usize {
    3 * q + pauli
}

/// Code-capacity depolarizing problem: each qubit suffers X, Y or Z with
/// probability `p_phys / 3` each.
///
/// With [`Stacking::Xz`] there is one column per qubit at probability
/// `2 p_phys / 3`. With [`Stacking::Xyz`] `H = [H_X; H_Z]` and qubit `q`
/// owns columns `3q` (X), `3q + 1` (Y) and `3q + 2` (Z) at `p_phys / 3`.
pub fn code_capacity_problem(
    code: &CssCode,
    ax: &SparseBinaryMatrix,
    az: &SparseBinaryMatrix,
    p_phys: f64,
    error_type: ErrorType,
    stacking: Stacking,
) -> Result<DecodingProblem> {
    if !(p_phys > 0.0 && p_phys <= 0.375) {
        return Err(Error::InvalidConfig(format!(
            "physical error rate {p_phys} outside (0, 0.375]"
        )));
    }
    let n = code.n();
    // checks that fire on the decoded type, logicals that it flips
    let (detecting, logicals) = match error_type {
        ErrorType::X => (&code.hz, az),
        ErrorType::Z => (&code.hx, ax),
    };
    match stacking {
        Stacking::Xz => DecodingProblem::new(
            detecting.clone(),
            logicals.clone(),
            vec![2.0 * p_phys / 3.0; n],
        ),
        Stacking::Xyz => {
            let mx = code.hx.num_rows();
            let mut h_entries = Vec::new();
            // X component hits Z-checks, Z component hits X-checks.
            for q in 0..n {
                for &i in code.hz.col(q) {
                    h_entries.push((mx + i, xyz_column(q, 0)));
                    h_entries.push((mx + i, xyz_column(q, 1)));
                }
                for &i in code.hx.col(q) {
                    h_entries.push((i, xyz_column(q, 2)));
                    h_entries.push((i, xyz_column(q, 1)));
                }
            }
            let h = SparseBinaryMatrix::from_entries(mx + code.hz.num_rows(), 3 * n, h_entries)?;
            let flipping = match error_type {
                ErrorType::X => [0, 1],
                ErrorType::Z => [2, 1],
            };
            let mut a_entries = Vec::new();
            for r in 0..logicals.num_rows() {
                for &q in logicals.row(r) {
                    a_entries.extend(flipping.iter().map(|&pauli| (r, xyz_column(q, pauli))));
                }
            }
            let a = SparseBinaryMatrix::from_entries(logicals.num_rows(), 3 * n, a_entries)?;
            DecodingProblem::new(h, a, vec![p_phys / 3.0; 3 * n])
        }
    }
}

/// Named code presets accepted by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodePreset {
    Repetition(usize),
    Bb72,
    Bb90,
    Bb144,
    Hgp450,
}

impl CodePreset {
    pub fn build(&self) -> Result<CssCode> {
        match self {
            CodePreset::Repetition(n) => repetition_code(*n),
            CodePreset::Bb72 => bb_code(&BbSpec::bb72()),
            CodePreset::Bb90 => bb_code(&BbSpec::bb90()),
            CodePreset::Bb144 => bb_code(&BbSpec::bb144()),
            CodePreset::Hgp450 => {
                let seed = cyclic_seed_15();
                hgp_code(&seed, &seed)
            }
        }
    }
}

impl FromStr for CodePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bb72" => Ok(Self::Bb72),
            "bb90" => Ok(Self::Bb90),
            "bb144" => Ok(Self::Bb144),
            "hgp450" => Ok(Self::Hgp450),
            _ => s
                .strip_prefix("rep")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 2)
                .map(Self::Repetition)
                .ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "unknown code preset {s:?} (expected rep<n>, bb72, bb90, bb144 or hgp450)"
                    ))
                }),
        }
    }
}

impl fmt::Display for CodePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodePreset::Repetition(n) => write!(f, "rep{n}"),
            CodePreset::Bb72 => f.write_str("bb72"),
            CodePreset::Bb90 => f.write_str("bb90"),
            CodePreset::Bb144 => f.write_str("bb144"),
            CodePreset::Hgp450 => f.write_str("hgp450"),
        }
    }
}

/// Checks that every row of `logicals` lies in `ker(checks)`.
pub fn in_kernel(checks: &SparseBinaryMatrix, logicals: &SparseBinaryMatrix) -> bool {
    logicals.rows().iter().all(|row| {
        let v = BitVector::from_support(checks.num_cols(), row.iter().copied());
        checks.matvec(&v).map(|s| s.is_zero()).unwrap_or(false)
    })
}
