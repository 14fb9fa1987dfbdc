//! BP followed by ordered-statistics post-processing.

use std::time::Instant;

use crate::beam::DecodeResult;
use crate::bp::{initial_messages, BpEngine, MaskAssignment};
use crate::error::{check_len, Error, Result};
use crate::gf2::{pivot_solution, row_echelon, BitVector};
use crate::problem::DecodingProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OsdMethod {
    /// Non-pivot bits fixed to zero.
    Osd0,
    /// OSD-0 plus every weight-1 non-pivot pattern and every weight-2
    /// pattern inside the first `order` non-pivot positions.
    CombinationSweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OsdConfig {
    pub bp_iters: usize,
    pub order: usize,
    pub method: OsdMethod,
}

impl OsdConfig {
    /// 30 min-sum iterations, order-10 combination sweep.
    pub const BP30_OSD: OsdConfig = OsdConfig {
        bp_iters: 30,
        order: 10,
        method: OsdMethod::CombinationSweep,
    };

    pub fn validate(&self) -> Result<()> {
        if self.bp_iters == 0 {
            return Err(Error::InvalidConfig("bp_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Statistics of the OSD stage; zero when BP converged on its own.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OsdTrace {
    pub ran_osd: bool,
    pub rank: usize,
    pub candidates: usize,
}

/// Number of OSD candidates evaluated for `free` non-pivot columns.
pub fn candidate_count(method: OsdMethod, order: usize, free: usize) -> usize {
    match method {
        OsdMethod::Osd0 => 1,
        OsdMethod::CombinationSweep => {
            let w = order.min(free);
            1 + free + w * w.saturating_sub(1) / 2
        }
    }
}

pub fn bp_osd_decode(
    problem: &DecodingProblem,
    s: &BitVector,
    cfg: &OsdConfig,
) -> Result<DecodeResult> {
    bp_osd_decode_traced(problem, s, cfg).map(|(r, _)| r)
}

pub fn bp_osd_decode_traced(
    problem: &DecodingProblem,
    s: &BitVector,
    cfg: &OsdConfig,
) -> Result<(DecodeResult, OsdTrace)> {
    let start = Instant::now();
    cfg.validate()?;
    check_len("syndrome length", problem.num_detectors(), s.len())?;
    let mut engine = BpEngine::new(problem);
    let bp = engine.run(
        &initial_messages(problem),
        &MaskAssignment::new(),
        s,
        cfg.bp_iters,
    )?;
    if bp.converged() {
        let weight = problem.error_weight(&bp.hard_decision)?;
        return Ok((
            DecodeResult {
                decoded: bp.hard_decision,
                converged: true,
                weight,
                rounds_used: 0,
                paths_expanded: 0,
                solutions_found: 1,
                wall_time: start.elapsed(),
            },
            OsdTrace::default(),
        ));
    }

    let (result, trace) = osd_post_process(problem, s, &bp.posterior_llr, cfg.order, cfg.method)?;
    Ok((
        DecodeResult {
            wall_time: start.elapsed(),
            ..result
        },
        trace,
    ))
}

/// Ordered-statistics decoding of `s` given per-column posterior LLRs.
///
/// Columns are eliminated most error-likely first (ascending posterior,
/// index order on ties); the resulting pivot columns form the information
/// set.
pub fn osd_post_process(
    problem: &DecodingProblem,
    s: &BitVector,
    posterior_llr: &[f64],
    order_w: usize,
    method: OsdMethod,
) -> Result<(DecodeResult, OsdTrace)> {
    let start = Instant::now();
    check_len("syndrome length", problem.num_detectors(), s.len())?;
    let n = problem.num_errors();
    check_len("posterior length", n, posterior_llr.len())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        posterior_llr[a]
            .total_cmp(&posterior_llr[b])
            .then(a.cmp(&b))
    });
    let ech = row_echelon(problem.h(), &order)?;
    let rank = ech.rank();
    let transformed = ech.apply_transform(s)?;
    let consistent = (rank..ech.num_rows()).all(|r| !transformed.get(r));
    let base = pivot_solution(&ech, &transformed);

    let mut is_pivot = vec![false; n];
    for &c in ech.pivot_cols() {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = order.iter().copied().filter(|&c| !is_pivot[c]).collect();

    let llr = problem.prior_llr();
    let mut best = base.clone();
    let mut best_weight = problem.error_weight(&base)?;
    let mut candidates = 1;

    if consistent && method == OsdMethod::CombinationSweep && !free.is_empty() {
        let pivot_bits = BitVector::from_support(rank, (0..rank).filter(|&r| transformed.get(r)));
        let columns: Vec<BitVector> = free.iter().map(|&c| ech.reduced_column(c)).collect();
        let pivots = ech.pivot_cols();
        let weight_of = |bits: &BitVector, extra: f64| -> f64 {
            bits.iter_ones().map(|r| llr[pivots[r]]).sum::<f64>() + extra
        };
        let consider =
            |free_set: &[usize], bits: BitVector, best: &mut BitVector, best_weight: &mut f64| {
                let extra: f64 = free_set.iter().map(|&k| llr[free[k]]).sum();
                let w = weight_of(&bits, extra);
                if w < *best_weight {
                    let mut v = BitVector::zeros(n);
                    for r in bits.iter_ones() {
                        v.set(pivots[r], true);
                    }
                    for &k in free_set {
                        v.set(free[k], true);
                    }
                    *best = v;
                    *best_weight = w;
                }
            };

        for (k, col) in columns.iter().enumerate() {
            consider(&[k], pivot_bits.xor(col), &mut best, &mut best_weight);
            candidates += 1;
        }
        let w = order_w.min(free.len());
        for (a, col_a) in columns[..w].iter().enumerate() {
            let with_a = pivot_bits.xor(col_a);
            for (b, col_b) in columns[..w].iter().enumerate().skip(a + 1) {
                consider(&[a, b], with_a.xor(col_b), &mut best, &mut best_weight);
                candidates += 1;
            }
        }
    }

    Ok((
        DecodeResult {
            decoded: best,
            converged: consistent,
            weight: best_weight,
            rounds_used: 0,
            paths_expanded: 0,
            solutions_found: usize::from(consistent),
            wall_time: start.elapsed(),
        },
        OsdTrace {
            ran_osd: true,
            rank,
            candidates,
        },
    ))
}
