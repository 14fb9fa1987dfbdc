mod common;

use beamdec::bp::{initial_messages, plain_bp, MSG_MAX};
use beamdec::{
    masked_bp, BitVector, BpStatus, DecodingProblem, EdgeMessages, MaskAssignment,
    SparseBinaryMatrix,
};
use common::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn problem(rows: Vec<Vec<usize>>, n: usize, p: Vec<f64>) -> DecodingProblem {
    let h = SparseBinaryMatrix::from_rows(rows.len(), n, rows).unwrap();
    DecodingProblem::new(h, SparseBinaryMatrix::zeros(0, n), p).unwrap()
}

fn random_mask<R: Rng>(rng: &mut R, n: usize, count: usize) -> MaskAssignment {
    MaskAssignment::from_pairs(
        sample(rng, n, count)
            .into_iter()
            .map(|j| (j, rng.random()))
            .collect(),
    )
}

#[test]
fn initial_messages_are_priors() {
    let p = problem(vec![vec![0, 1]], 2, vec![0.1, 0.1]);
    let m = initial_messages(&p);
    assert!(m.as_slice().iter().all(|&x| (x - 9f64.ln()).abs() < 1e-12));
    let near_half = problem(vec![vec![0, 1]], 2, vec![0.5 - 1e-9, 0.5 - 1e-9]);
    assert!(initial_messages(&near_half)
        .as_slice()
        .iter()
        .all(|&x| x > 0.0 && x < 1e-7));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let p = random_problem(&mut rng, 6, 10, 0);
        let msgs = initial_messages(&p);
        let g = p.tanner();
        for e in 0..g.num_edges() {
            assert_eq!(msgs.as_slice()[e], p.prior_llr()[g.edge_col(e)]);
        }
    }
}

#[test]
fn two_node_examples() {
    let p = problem(vec![vec![0, 1]], 2, vec![0.1, 0.1]);
    let out = plain_bp(&p, &BitVector::zeros(1), 5).unwrap();
    assert_eq!(out.status, BpStatus::Converged);
    assert_eq!(out.iters_run, 1);
    assert!(out
        .posterior_llr
        .iter()
        .all(|&l| (l - 2.0 * 9f64.ln()).abs() < 1e-12));

    let s = BitVector::from_bools(&[true]);
    let out = masked_bp(
        &p,
        &initial_messages(&p),
        &MaskAssignment::from_pairs(vec![(1, true)]),
        &s,
        5,
    )
    .unwrap();
    assert!(out.converged());
    assert_eq!(out.decoded().unwrap().to_string(), "01");
    assert!((out.posterior_llr[0] - (9f64.ln() + MSG_MAX)).abs() < 1e-12);

    let all = MaskAssignment::from_pairs(vec![(0, true), (1, false)]);
    let out = masked_bp(&p, &initial_messages(&p), &all, &s, 5).unwrap();
    assert!(out.converged());
    assert_eq!(out.iters_run, 1);
    assert_eq!(out.decoded().unwrap().to_string(), "10");
}

#[test]
fn rejects_malformed_inputs() {
    let p = problem(vec![vec![0, 1]], 2, vec![0.1, 0.2]);
    let msgs = initial_messages(&p);
    let s = BitVector::zeros(1);
    assert!(masked_bp(&p, &msgs, &MaskAssignment::new(), &s, 0).is_err());
    assert!(masked_bp(&p, &msgs, &MaskAssignment::new(), &BitVector::zeros(2), 1).is_err());
    assert!(masked_bp(&p, &EdgeMessages(vec![0.0]), &MaskAssignment::new(), &s, 1).is_err());
    assert!(masked_bp(
        &p,
        &msgs,
        &MaskAssignment::from_pairs(vec![(2, true)]),
        &s,
        1
    )
    .is_err());
    assert!(masked_bp(
        &p,
        &msgs,
        &MaskAssignment::from_pairs(vec![(0, true), (0, false)]),
        &s,
        1
    )
    .is_err());
}

/// Whenever BP claims convergence the returned vector reproduces the
/// syndrome; when a solution compatible with the mask exists the oracle
/// agrees it is feasible.
#[test]
fn convergence_is_sound_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut converged = 0;
    for trial in 0..600 {
        let m = rng.random_range(1..=12);
        let n = rng.random_range(1..=20);
        let p = random_problem(&mut rng, m, n, 0);
        let s = if trial % 2 == 0 {
            let e =
                BitVector::from_bools(&(0..n).map(|_| rng.random_bool(0.15)).collect::<Vec<_>>());
            p.syndrome_of(&e).unwrap()
        } else {
            BitVector::from_bools(&(0..m).map(|_| rng.random()).collect::<Vec<_>>())
        };
        let count = rng.random_range(0..=n.min(4));
        let mask = random_mask(&mut rng, n, count);
        let out = masked_bp(&p, &initial_messages(&p), &mask, &s, 30).unwrap();
        assert!(out.sum_llr.iter().all(|x| x.is_finite()));
        assert!(out
            .final_messages
            .as_slice()
            .iter()
            .all(|x| x.abs() <= MSG_MAX));
        if out.converged() {
            converged += 1;
            let d = out.decoded().unwrap();
            assert!(is_solution(&p, d, &s));
            for &(j, v) in mask.pairs() {
                assert_eq!(d.get(j), v);
            }
        }
        if out.status == BpStatus::Infeasible {
            assert_eq!(out.iters_run, 0);
            let feasible = all_vectors(n).any(|e| {
                mask.pairs().iter().all(|&(j, v)| e.get(j) == v) && is_solution(&p, &e, &s)
            });
            assert!(!feasible);
        }
    }
    assert!(converged > 150, "{converged}");
}

/// Masking node j at value v equals deleting column j and flipping the
/// syndrome by v times that column, message by message.
#[test]
fn mask_equals_reduced_problem() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let m = rng.random_range(2..8);
        let n = rng.random_range(3..12);
        let p = random_problem(&mut rng, m, n, 0);
        let j = rng.random_range(0..n);
        let v: bool = rng.random();
        let s = BitVector::from_bools(&(0..m).map(|_| rng.random()).collect::<Vec<_>>());

        let keep: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let dense = to_dense(p.h());
        let reduced_dense: Dense = dense
            .iter()
            .map(|row| keep.iter().map(|&c| row[c]).collect())
            .collect();
        let reduced = DecodingProblem::new(
            SparseBinaryMatrix::from_dense(n - 1, &reduced_dense).unwrap(),
            SparseBinaryMatrix::zeros(0, n - 1),
            keep.iter().map(|&c| p.probabilities()[c]).collect(),
        )
        .unwrap();
        let mut s_red = s.clone();
        if v {
            for &i in p.h().col(j) {
                s_red.flip(i);
            }
        }

        // random warm start shared by both, skipping the deleted column
        let g = p.tanner();
        let warm: Vec<f64> = (0..g.num_edges())
            .map(|_| rng.random_range(-8.0..8.0))
            .collect();
        let warm_red: Vec<f64> = (0..g.num_edges())
            .filter(|&e| g.edge_col(e) != j)
            .map(|e| warm[e])
            .collect();

        let iters = rng.random_range(1..4);
        let full = masked_bp(
            &p,
            &EdgeMessages(warm),
            &MaskAssignment::from_pairs(vec![(j, v)]),
            &s,
            iters,
        )
        .unwrap();
        let red = masked_bp(
            &reduced,
            &EdgeMessages(warm_red),
            &MaskAssignment::new(),
            &s_red,
            iters,
        )
        .unwrap();
        if full.status == BpStatus::Infeasible {
            continue;
        }
        assert_eq!(full.iters_run, red.iters_run);
        assert_eq!(full.converged(), red.converged());
        let full_msgs: Vec<f64> = (0..g.num_edges())
            .filter(|&e| g.edge_col(e) != j)
            .map(|e| full.final_messages.as_slice()[e])
            .collect();
        assert_eq!(full_msgs, red.final_messages.0);
        for (k, &c) in keep.iter().enumerate() {
            assert_eq!(full.sum_llr[c], red.sum_llr[k]);
            assert_eq!(full.posterior_llr[c], red.posterior_llr[k]);
            assert_eq!(full.hard_decision.get(c), red.hard_decision.get(k));
        }
        assert_eq!(full.hard_decision.get(j), v);
    }
}

#[test]
fn identical_inputs_give_identical_outcomes() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let p = random_problem(&mut rng, 8, 14, 0);
        let s = BitVector::from_bools(&(0..8).map(|_| rng.random()).collect::<Vec<_>>());
        let mask = random_mask(&mut rng, 14, 2);
        let a = masked_bp(&p, &initial_messages(&p), &mask, &s, 25).unwrap();
        let b = masked_bp(&p, &initial_messages(&p), &mask, &s, 25).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.hard_decision, b.hard_decision);
        assert_eq!(a.final_messages, b.final_messages);
        assert_eq!(
            a.sum_llr.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.sum_llr.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        assert_eq!(a.iters_run, b.iters_run);
    }
}

/// On the cycle-free repetition chain min-sum is exact, so BP reaches a
/// valid decision within n iterations for every reachable syndrome. The
/// priors are distinct so no two solutions tie.
#[test]
fn repetition_chain_converges_within_n() {
    for n in 2..=7 {
        let probs: Vec<f64> = (0..n).map(|j| 0.05 + 0.03 * j as f64).collect();
        let p = problem((0..n - 1).map(|i| vec![i, i + 1]).collect(), n, probs);
        for e in all_vectors(n) {
            let s = p.syndrome_of(&e).unwrap();
            let out = plain_bp(&p, &s, n).unwrap();
            assert!(out.converged(), "n={n} s={s}");
            let d = out.decoded().unwrap();
            assert!(is_solution(&p, d, &s));
            let best = brute_min_weight(&p, &s).unwrap();
            assert!(
                (p.error_weight(d).unwrap() - best).abs() < 1e-9,
                "n={n} s={s}"
            );
        }
    }
}

#[test]
fn sum_llr_counts_the_converging_iteration() {
    let p = problem(vec![vec![0, 1], vec![1, 2]], 3, vec![0.1, 0.2, 0.3]);
    let s = BitVector::from_bools(&[true, false]);
    for iters in 1..5 {
        let out = plain_bp(&p, &s, iters).unwrap();
        // re-run step by step and sum the posteriors by hand
        let mut total = [0.0; 3];
        let mut msgs = initial_messages(&p);
        for _ in 0..out.iters_run {
            let step = masked_bp(&p, &msgs, &MaskAssignment::new(), &s, 1).unwrap();
            for (t, x) in total.iter_mut().zip(&step.posterior_llr) {
                *t += x;
            }
            msgs = step.final_messages;
        }
        for (a, b) in total.iter().zip(&out.sum_llr) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
