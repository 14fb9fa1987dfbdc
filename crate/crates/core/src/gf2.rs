//! Binary linear algebra over GF(2).
//!
//! [`SparseBinaryMatrix`] keeps both row and column adjacency so message
//! passing can walk either side of an edge without transposing. Elimination
//! ([`row_echelon`]) switches to packed dense rows because fill-in destroys
//! sparsity anyway.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, ParseErrorKind, Result};

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Packed binary vector. Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones at `support`.
    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// In-place XOR. Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of `self AND other`.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let tz = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        kind: ParseErrorKind::BadBit(other),
                    })
                }
            }
        }
        Ok(Self::from_bools(&bits))
    }
}

/// Sparse binary matrix with row and column adjacency kept in sync.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    num_rows: usize,
    num_cols: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl SparseBinaryMatrix {
    /// Builds a matrix from per-row column supports. Each support must be
    /// strictly increasing and in range.
    pub fn from_rows(num_rows: usize, num_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        check_len("row count", num_rows, rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            if let Some(&last) = row.last() {
                if last >= num_cols {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i} has column {last} >= {num_cols}"
                    )));
                }
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} support is not strictly increasing"
                )));
            }
        }
        let mut cols = vec![Vec::new(); num_cols];
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                cols[j].push(i);
            }
        }
        Ok(Self {
            num_rows,
            num_cols,
            rows,
            cols,
        })
    }

    /// Builds a matrix from `(row, col)` entries with GF(2) accumulation:
    /// an entry listed twice cancels.
    pub fn from_entries(
        num_rows: usize,
        num_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut rows = vec![Vec::new(); num_rows];
        for (i, j) in entries {
            if i >= num_rows || j >= num_cols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i}, {j}) outside {num_rows}x{num_cols}"
                )));
            }
            rows[i].push(j);
        }
        for row in &mut rows {
            row.sort_unstable();
            let mut reduced: Vec<usize> = Vec::with_capacity(row.len());
            for &j in row.iter() {
                if reduced.last() == Some(&j) {
                    reduced.pop();
                } else {
                    reduced.push(j);
                }
            }
            *row = reduced;
        }
        Self::from_rows(num_rows, num_cols, rows)
    }

    /// Builds a matrix from dense 0/1 rows, mainly for tests.
    pub fn from_dense(num_cols: usize, dense: &[Vec<u8>]) -> Result<Self> {
        let rows = dense
            .iter()
            .map(|r| {
                check_len("dense row", num_cols, r.len())?;
                Ok(r.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(j, _)| j)
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(dense.len(), num_cols, rows)
    }

    pub fn zeros(num_rows: usize, num_cols: usize) -> Self {
        Self {
            num_rows,
            num_cols,
            rows: vec![Vec::new(); num_rows],
            cols: vec![Vec::new(); num_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, n, (0..n).map(|i| vec![i]).collect()).expect("identity is valid")
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    /// Sorted column indices of row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    /// Sorted row indices of column `j`.
    pub fn col(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        Self {
            num_rows: self.num_cols,
            num_cols: self.num_rows,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// `self · v` over GF(2).
    pub fn matvec(&self, v: &BitVector) -> Result<BitVector> {
        check_len("vector length", self.num_cols, v.len())?;
        let mut out = BitVector::zeros(self.num_rows);
        for (i, row) in self.rows.iter().enumerate() {
            let parity = row.iter().fold(false, |acc, &j| acc ^ v.get(j));
            if parity {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &SparseBinaryMatrix) -> Result<SparseBinaryMatrix> {
        check_len("inner dimension", self.num_cols, other.num_rows)?;
        let mut rows = Vec::with_capacity(self.num_rows);
        let mut acc = vec![false; other.num_cols];
        for row in &self.rows {
            acc.iter_mut().for_each(|b| *b = false);
            for &k in row {
                for &j in other.row(k) {
                    acc[j] ^= true;
                }
            }
            rows.push(
                acc.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(j, _)| j)
                    .collect(),
            );
        }
        Self::from_rows(self.num_rows, other.num_cols, rows)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &SparseBinaryMatrix) -> Result<SparseBinaryMatrix> {
        check_len("row count for hstack", self.num_rows, other.num_rows)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                a.iter()
                    .copied()
                    .chain(b.iter().map(|&j| j + self.num_cols))
                    .collect()
            })
            .collect();
        Self::from_rows(self.num_rows, self.num_cols + other.num_cols, rows)
    }

    /// `self` stacked above `other`.
    pub fn vstack(&self, other: &SparseBinaryMatrix) -> Result<SparseBinaryMatrix> {
        check_len("column count for vstack", self.num_cols, other.num_cols)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Self::from_rows(self.num_rows + other.num_rows, self.num_cols, rows)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &SparseBinaryMatrix) -> SparseBinaryMatrix {
        let num_rows = self.num_rows * other.num_rows;
        let num_cols = self.num_cols * other.num_cols;
        let mut rows = Vec::with_capacity(num_rows);
        for a_row in &self.rows {
            for b_row in &other.rows {
                let mut row = Vec::with_capacity(a_row.len() * b_row.len());
                for &ja in a_row {
                    for &jb in b_row {
                        row.push(ja * other.num_cols + jb);
                    }
                }
                rows.push(row);
            }
        }
        Self::from_rows(num_rows, num_cols, rows).expect("kron of valid matrices is valid")
    }

    /// Packed dense copy of every row.
    pub fn to_dense_rows(&self) -> Vec<BitVector> {
        self.rows
            .iter()
            .map(|r| BitVector::from_support(self.num_cols, r.iter().copied()))
            .collect()
    }
}

impl fmt::Debug for SparseBinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "SparseBinaryMatrix {}x{} [",
            self.num_rows, self.num_cols
        )?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Fully reduced row echelon form of a matrix together with the row
/// operations that produced it.
///
/// `transform · original == reduced`; the first `rank` rows of `reduced`
/// carry a single one in their pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    rank: usize,
    pivot_cols: Vec<usize>,
    reduced: Vec<BitVector>,
    transform: Vec<BitVector>,
    num_cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Pivot column of each of the first `rank` rows.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn num_rows(&self) -> usize {
        self.transform.len()
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    /// Replays the recorded row operations on `s`.
    pub fn apply_transform(&self, s: &BitVector) -> Result<BitVector> {
        check_len("syndrome length", self.num_rows(), s.len())?;
        let mut out = BitVector::zeros(self.num_rows());
        for (r, t) in self.transform.iter().enumerate() {
            if t.dot(s) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Column `c` of the reduced matrix restricted to the pivot rows.
    pub fn reduced_column(&self, c: usize) -> BitVector {
        let mut out = BitVector::zeros(self.rank);
        for r in 0..self.rank {
            if self.reduced[r].get(c) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_cols.contains(&c)
    }
}

/// Gauss-Jordan elimination visiting columns in `col_order`.
///
/// Pivots are the first columns in `col_order` that are independent of the
/// ones chosen before them.
pub fn row_echelon(mat: &SparseBinaryMatrix, col_order: &[usize]) -> Result<Echelon> {
    check_len("column order length", mat.num_cols(), col_order.len())?;
    let mut seen = vec![false; mat.num_cols()];
    for &c in col_order {
        if c >= mat.num_cols() || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidConfig(
                "column order is not a permutation".into(),
            ));
        }
    }
    let m = mat.num_rows();
    let mut reduced = mat.to_dense_rows();
    let mut transform: Vec<BitVector> = (0..m).map(|i| BitVector::from_support(m, [i])).collect();
    let mut rank = 0;
    let mut pivot_cols = Vec::new();
    for &c in col_order {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&r| reduced[r].get(c)) else {
            continue;
        };
        reduced.swap(rank, p);
        transform.swap(rank, p);
        let (pivot_row, pivot_t) = (reduced[rank].clone(), transform[rank].clone());
        for r in 0..m {
            if r != rank && reduced[r].get(c) {
                reduced[r].xor_assign(&pivot_row);
                transform[r].xor_assign(&pivot_t);
            }
        }
        pivot_cols.push(c);
        rank += 1;
    }
    Ok(Echelon {
        rank,
        pivot_cols,
        reduced,
        transform,
        num_cols: mat.num_cols(),
    })
}

/// Natural column order `0..n`.
pub fn natural_order(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn rank(mat: &SparseBinaryMatrix) -> usize {
    row_echelon(mat, &natural_order(mat.num_cols()))
        .expect("natural order is a permutation")
        .rank()
}

/// Solution of `H x = s` supported on the pivot columns, or `None` when `s`
/// lies outside the column space.
pub fn solve_with_pivots(ech: &Echelon, s: &BitVector) -> Result<Option<BitVector>> {
    let y = ech.apply_transform(s)?;
    if (ech.rank..ech.num_rows()).any(|r| y.get(r)) {
        return Ok(None);
    }
    Ok(Some(pivot_solution(ech, &y)))
}

/// Pivot assignment read straight off the transformed syndrome, ignoring
/// rows below the rank.
pub(crate) fn pivot_solution(ech: &Echelon, transformed: &BitVector) -> BitVector {
    let mut x = BitVector::zeros(ech.num_cols);
    for (r, &c) in ech.pivot_cols.iter().enumerate() {
        if transformed.get(r) {
            x.set(c, true);
        }
    }
    x
}

/// Basis of the right null space of `mat`.
pub fn kernel_basis(mat: &SparseBinaryMatrix) -> Vec<BitVector> {
    let n = mat.num_cols();
    let ech = row_echelon(mat, &natural_order(n)).expect("natural order is a permutation");
    let mut is_pivot = vec![false; n];
    for &c in &ech.pivot_cols {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVector::zeros(n);
            v.set(f, true);
            for (r, &c) in ech.pivot_cols.iter().enumerate() {
                if ech.reduced[r].get(f) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect()
}

/// Incrementally grown basis of a subspace of GF(2)^n, kept in reduced form
/// so membership tests are a single sweep.
#[derive(Clone, Debug)]
pub struct XorBasis {
    len: usize,
    // (leading bit, reduced vector); leading bits are distinct
    vectors: Vec<(usize, BitVector)>,
}

impl XorBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            vectors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (lead, b) in &self.vectors {
            if v.get(*lead) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.len);
        let r = self.reduce(v);
        let Some(lead) = r.iter_ones().next() else {
            return false;
        };
        for (_, b) in &mut self.vectors {
            if b.get(lead) {
                b.xor_assign(&r);
            }
        }
        self.vectors.push((lead, r));
        true
    }
}
