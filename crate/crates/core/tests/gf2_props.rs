mod common;

use beamdec::gf2::{kernel_basis, natural_order, rank, row_echelon, solve_with_pivots, XorBasis};
use beamdec::{BitVector, SparseBinaryMatrix};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (usize, Dense)> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        (
            Just(c),
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r),
        )
    })
}

fn bitvec(n: usize) -> impl Strategy<Value = BitVector> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|b| BitVector::from_bools(&b))
}

#[test]
fn matvec_matches_dense_on_random_8x12() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let d = random_dense(&mut rng, 8, 12, 0.4);
        let m = SparseBinaryMatrix::from_dense(12, &d).unwrap();
        let v: Vec<bool> = (0..12).map(|_| rng.random()).collect();
        let bv = BitVector::from_bools(&v);
        let expect = dense_matvec(&d, &bits(&bv));
        assert_eq!(bits(&m.matvec(&bv).unwrap()), expect);
    }
}

#[test]
fn rank_matches_dense_oracle_on_10x20() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for density in [0.05, 0.2, 0.5] {
        for _ in 0..100 {
            let d = random_dense(&mut rng, 10, 20, density);
            let m = SparseBinaryMatrix::from_dense(20, &d).unwrap();
            assert_eq!(rank(&m), dense_rank(&d));
        }
    }
}

/// Every consistent syndrome of a random 10x20 matrix is solved exactly.
#[test]
fn solve_random_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let m = random_sparse(&mut rng, 10, 20, 0.25);
        let e: Vec<bool> = (0..20).map(|_| rng.random()).collect();
        let s = m.matvec(&BitVector::from_bools(&e)).unwrap();
        let mut order = natural_order(20);
        // any permutation is a valid elimination order
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let ech = row_echelon(&m, &order).unwrap();
        let x = solve_with_pivots(&ech, &s).unwrap().expect("consistent");
        assert_eq!(m.matvec(&x).unwrap(), s);
        // support lies on pivot columns only
        assert!(x.iter_ones().all(|c| ech.is_pivot(c)));
    }
}

#[test]
fn inconsistent_syndrome_is_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut seen = 0;
    for _ in 0..200 {
        let d = random_dense(&mut rng, 8, 5, 0.4);
        let m = SparseBinaryMatrix::from_dense(5, &d).unwrap();
        let s: Vec<bool> = (0..8).map(|_| rng.random()).collect();
        let s = BitVector::from_bools(&s);
        let reachable = all_vectors(5).any(|e| dense_matvec(&d, &bits(&e)) == bits(&s));
        let ech = row_echelon(&m, &natural_order(5)).unwrap();
        let solved = solve_with_pivots(&ech, &s).unwrap();
        assert_eq!(solved.is_some(), reachable);
        seen += usize::from(!reachable);
    }
    assert!(seen > 50);
}

#[test]
fn bad_column_order_is_rejected() {
    let m = SparseBinaryMatrix::identity(3);
    assert!(row_echelon(&m, &[0, 1]).is_err());
    assert!(row_echelon(&m, &[0, 1, 1]).is_err());
    assert!(row_echelon(&m, &[0, 1, 3]).is_err());
}

proptest! {
    #[test]
    fn matvec_is_linear((cols, d) in dense_strategy(12, 40), seed in any::<u64>()) {
        let m = SparseBinaryMatrix::from_dense(cols, &d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = BitVector::from_bools(&(0..cols).map(|_| rng.random()).collect::<Vec<bool>>());
        let v = BitVector::from_bools(&(0..cols).map(|_| rng.random()).collect::<Vec<bool>>());
        let lhs = m.matvec(&u.xor(&v)).unwrap();
        let rhs = m.matvec(&u).unwrap().xor(&m.matvec(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_equals_transpose_rank((cols, d) in dense_strategy(32, 32)) {
        let m = SparseBinaryMatrix::from_dense(cols, &d).unwrap();
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert_eq!(rank(&m), dense_rank(&d));
        prop_assert_eq!(rank(&m.transpose()), dense_rank(&dense_transpose(&d, cols)));
    }

    #[test]
    fn kernel_basis_is_a_basis((cols, d) in dense_strategy(10, 24)) {
        let m = SparseBinaryMatrix::from_dense(cols, &d).unwrap();
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.len(), cols - dense_rank(&d));
        let mut basis = XorBasis::new(cols);
        for v in &ker {
            prop_assert!(m.matvec(v).unwrap().is_zero());
            prop_assert!(basis.insert(v), "kernel vectors must be independent");
        }
    }

    #[test]
    fn transpose_is_involution((cols, d) in dense_strategy(16, 16)) {
        let m = SparseBinaryMatrix::from_dense(cols, &d).unwrap();
        prop_assert_eq!(m.transpose().transpose(), m.clone());
        prop_assert_eq!(to_dense(&m.transpose()), dense_transpose(&d, cols));
    }

    #[test]
    fn product_matches_composition((k, d1) in dense_strategy(8, 10), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = SparseBinaryMatrix::from_dense(k, &d1).unwrap();
        let cols = rng.random_range(1..10);
        let b = random_sparse(&mut rng, k, cols, 0.4);
        let ab = a.mul(&b).unwrap();
        let v = BitVector::from_bools(&(0..cols).map(|_| rng.random()).collect::<Vec<bool>>());
        prop_assert_eq!(ab.matvec(&v).unwrap(), a.matvec(&b.matvec(&v).unwrap()).unwrap());
    }

    #[test]
    fn bitvector_display_round_trip(v in (0usize..200).prop_flat_map(bitvec)) {
        let text = v.to_string();
        prop_assert_eq!(text.len(), v.len());
        prop_assert_eq!(text.parse::<BitVector>().unwrap(), v);
    }

    #[test]
    fn xor_basis_dimension_is_rank((cols, d) in dense_strategy(12, 20)) {
        let mut basis = XorBasis::new(cols);
        for row in &d {
            let v = BitVector::from_bools(&row.iter().map(|&b| b == 1).collect::<Vec<_>>());
            basis.insert(&v);
        }
        prop_assert_eq!(basis.dim(), dense_rank(&d));
        for row in &d {
            let v = BitVector::from_bools(&row.iter().map(|&b| b == 1).collect::<Vec<_>>());
            prop_assert!(basis.contains(&v));
        }
    }
}
