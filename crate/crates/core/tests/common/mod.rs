//! Independent dense oracles shared by the integration tests.
#![allow(dead_code)]

use beamdec::{BitVector, DecodingProblem, SparseBinaryMatrix};
use rand::Rng;

pub type Dense = Vec<Vec<u8>>;

pub fn to_dense(m: &SparseBinaryMatrix) -> Dense {
    (0..m.num_rows())
        .map(|i| (0..m.num_cols()).map(|j| u8::from(m.get(i, j))).collect())
        .collect()
}

pub fn bits(v: &BitVector) -> Vec<u8> {
    v.to_bools().into_iter().map(u8::from).collect()
}

pub fn dense_matvec(m: &Dense, v: &[u8]) -> Vec<u8> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (a, b)| acc ^ (a & b)))
        .collect()
}

/// Plain row reduction on a byte matrix.
pub fn dense_rank(m: &Dense) -> usize {
    let mut m = m.clone();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] == 1 {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

pub fn dense_transpose(m: &Dense, cols: usize) -> Dense {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn random_dense<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> Dense {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| u8::from(rng.random::<f64>() < density))
                .collect()
        })
        .collect()
}

pub fn random_sparse<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    density: f64,
) -> SparseBinaryMatrix {
    SparseBinaryMatrix::from_dense(cols, &random_dense(rng, rows, cols, density)).unwrap()
}

/// Random problem in which every column has at least one detector.
pub fn random_problem<R: Rng>(rng: &mut R, m: usize, n: usize, k: usize) -> DecodingProblem {
    let mut dense = random_dense(rng, m, n, 0.3);
    for j in 0..n {
        if dense.iter().all(|row| row[j] == 0) {
            dense[rng.random_range(0..m)][j] = 1;
        }
    }
    let h = SparseBinaryMatrix::from_dense(n, &dense).unwrap();
    let a = random_sparse(rng, k, n, 0.3);
    let probs = (0..n).map(|_| rng.random_range(0.01..0.3)).collect();
    DecodingProblem::new(h, a, probs).unwrap()
}

pub fn all_vectors(n: usize) -> impl Iterator<Item = BitVector> {
    assert!(n <= 24);
    (0u32..1 << n)
        .map(move |x| BitVector::from_support(n, (0..n).filter(move |&j| x >> j & 1 == 1)))
}

pub fn weight_of(problem: &DecodingProblem, e: &BitVector) -> f64 {
    e.iter_ones()
        .map(|j| {
            let p = problem.probabilities()[j];
            ((1.0 - p) / p).ln()
        })
        .sum::<f64>()
        + 0.0
}

/// Exhaustive minimum weight over every solution of `H e = s`.
pub fn brute_min_weight(problem: &DecodingProblem, s: &BitVector) -> Option<f64> {
    let h = to_dense(problem.h());
    let target = bits(s);
    all_vectors(problem.num_errors())
        .filter(|e| dense_matvec(&h, &bits(e)) == target)
        .map(|e| weight_of(problem, &e))
        .min_by(f64::total_cmp)
}

pub fn is_solution(problem: &DecodingProblem, e: &BitVector, s: &BitVector) -> bool {
    dense_matvec(&to_dense(problem.h()), &bits(e)) == bits(s)
}

/// Code-capacity X problem of the repetition chain `e_j + e_{j+1}`.
pub fn rep_problem(n: usize, p: f64) -> DecodingProblem {
    let h = SparseBinaryMatrix::from_rows(n - 1, n, (0..n - 1).map(|i| vec![i, i + 1]).collect())
        .unwrap();
    let a = SparseBinaryMatrix::from_rows(1, n, vec![vec![0]]).unwrap();
    DecodingProblem::new(h, a, vec![p; n]).unwrap()
}
