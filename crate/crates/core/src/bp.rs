//! Min-sum belief propagation with node masking and warm starts.
//!
//! Messages live on Tanner-graph edges in the order fixed by
//! [`TannerGraph`](crate::tanner::TannerGraph). A masked error node is
//! removed from message passing entirely; its value-1 assignments are folded
//! into the syndrome before the first iteration.

use crate::error::{check_len, Error, Result};
use crate::gf2::BitVector;
use crate::problem::DecodingProblem;

/// Saturation magnitude for every message, in nats.
pub const MSG_MAX: f64 = 50.0;

/// Error-to-detector messages, one per Tanner edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeMessages(pub Vec<f64>);

impl EdgeMessages {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Every edge carries the prior LLR of its error node.
pub fn initial_messages(problem: &DecodingProblem) -> EdgeMessages {
    let g = problem.tanner();
    let llr = problem.prior_llr();
    EdgeMessages(
        (0..g.num_edges())
            .map(|e| llr[g.edge_col(e)].clamp(-MSG_MAX, MSG_MAX))
            .collect(),
    )
}

/// Ordered `(error node, value)` assignments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MaskAssignment(Vec<(usize, bool)>);

impl MaskAssignment {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_pairs(pairs: Vec<(usize, bool)>) -> Self {
        Self(pairs)
    }

    /// Copy of `self` with `(pos, value)` appended.
    pub fn with(&self, pos: usize, value: bool) -> Self {
        let mut pairs = Vec::with_capacity(self.0.len() + 1);
        pairs.extend_from_slice(&self.0);
        pairs.push((pos, value));
        Self(pairs)
    }

    pub fn pairs(&self) -> &[(usize, bool)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.0.iter().any(|&(j, _)| j == pos)
    }

    /// Per-node masked flags; fails on duplicate or out-of-range positions.
    pub fn flags(&self, n: usize) -> Result<Vec<bool>> {
        let mut flags = vec![false; n];
        self.fill_flags(&mut flags)?;
        Ok(flags)
    }

    fn fill_flags(&self, flags: &mut [bool]) -> Result<()> {
        let n = flags.len();
        flags.iter_mut().for_each(|f| *f = false);
        for &(j, _) in &self.0 {
            if j >= n {
                return Err(Error::InvalidMask(format!("position {j} >= {n}")));
            }
            if std::mem::replace(&mut flags[j], true) {
                return Err(Error::InvalidMask(format!("position {j} masked twice")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BpStatus {
    Converged,
    /// Ran `max_iters` without satisfying the syndrome.
    Failed,
    /// A detector whose neighbours are all masked is violated, so no
    /// completion of the mask can match the syndrome. No iteration was run.
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct BpOutcome {
    pub status: BpStatus,
    /// Hard decision of the last iteration with mask values substituted.
    pub hard_decision: BitVector,
    /// Edge messages after the last iteration (masked edges untouched).
    pub final_messages: EdgeMessages,
    /// Posterior LLRs summed over the executed iterations; zero on masked
    /// nodes.
    pub sum_llr: Vec<f64>,
    /// Posterior LLRs of the last executed iteration; prior on masked nodes.
    pub posterior_llr: Vec<f64>,
    pub iters_run: usize,
}

impl BpOutcome {
    pub fn converged(&self) -> bool {
        self.status == BpStatus::Converged
    }

    /// The decoded vector, present only on convergence.
    pub fn decoded(&self) -> Option<&BitVector> {
        self.converged().then_some(&self.hard_decision)
    }
}

/// Reusable min-sum engine for one problem. Owns its scratch buffers, so
/// one engine serves one thread; the problem itself is shared.
pub struct BpEngine<'a> {
    problem: &'a DecodingProblem,
    scale: f64,
    masked: Vec<bool>,
    syndrome: Vec<bool>,
    check_msgs: Vec<f64>,
    hard: Vec<bool>,
}

impl<'a> BpEngine<'a> {
    pub fn new(problem: &'a DecodingProblem) -> Self {
        Self::with_scale(problem, 1.0)
    }

    /// Engine multiplying every detector-to-error message by `scale`
    /// (normalized min-sum). Plain min-sum is `scale = 1.0`.
    pub fn with_scale(problem: &'a DecodingProblem, scale: f64) -> Self {
        let g = problem.tanner();
        Self {
            problem,
            scale,
            masked: vec![false; problem.num_errors()],
            syndrome: vec![false; problem.num_detectors()],
            check_msgs: vec![0.0; g.num_edges()],
            hard: vec![false; problem.num_errors()],
        }
    }

    pub fn problem(&self) -> &'a DecodingProblem {
        self.problem
    }

    /// Runs masked min-sum BP from `edge_msgs` for at most `max_iters`
    /// iterations, stopping at the first iteration whose hard decision
    /// satisfies the mask-adjusted syndrome.
    pub fn run(
        &mut self,
        edge_msgs: &EdgeMessages,
        mask: &MaskAssignment,
        s: &BitVector,
        max_iters: usize,
    ) -> Result<BpOutcome> {
        let problem = self.problem;
        let g = problem.tanner();
        let n = problem.num_errors();
        let m = problem.num_detectors();
        check_len("syndrome length", m, s.len())?;
        check_len("edge message count", g.num_edges(), edge_msgs.len())?;
        if max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        mask.fill_flags(&mut self.masked)?;

        for i in 0..m {
            self.syndrome[i] = s.get(i);
        }
        for &(j, v) in mask.pairs() {
            if v {
                for &i in problem.h().col(j) {
                    self.syndrome[i] ^= true;
                }
            }
        }

        let prior = problem.prior_llr();
        let mut msgs = edge_msgs.0.clone();
        let mut sum_llr = vec![0.0; n];
        let mut posterior = prior.to_vec();

        let infeasible = (0..m).any(|i| {
            self.syndrome[i] && g.row_edges(i).iter().all(|&e| self.masked[g.edge_col(e)])
        });
        if infeasible {
            return Ok(BpOutcome {
                status: BpStatus::Infeasible,
                hard_decision: self.fill_decision(mask),
                final_messages: EdgeMessages(msgs),
                sum_llr,
                posterior_llr: posterior,
                iters_run: 0,
            });
        }

        for t in 1..=max_iters {
            self.detector_update(&msgs);

            for j in 0..n {
                if self.masked[j] {
                    continue;
                }
                let edges = g.col_edges(j);
                let total = prior[j] + self.check_msgs[edges.clone()].iter().sum::<f64>();
                for e in edges {
                    msgs[e] = (total - self.check_msgs[e]).clamp(-MSG_MAX, MSG_MAX);
                }
                posterior[j] = total;
                sum_llr[j] += total;
                self.hard[j] = total <= 0.0;
            }

            if self.syndrome_satisfied() {
                return Ok(BpOutcome {
                    status: BpStatus::Converged,
                    hard_decision: self.fill_decision(mask),
                    final_messages: EdgeMessages(msgs),
                    sum_llr,
                    posterior_llr: posterior,
                    iters_run: t,
                });
            }
        }

        Ok(BpOutcome {
            status: BpStatus::Failed,
            hard_decision: self.fill_decision(mask),
            final_messages: EdgeMessages(msgs),
            sum_llr,
            posterior_llr: posterior,
            iters_run: max_iters,
        })
    }

    /// Min-sum detector-to-error update over unmasked neighbours. A
    /// detector with a single unmasked neighbour sends a saturated message
    /// whose sign is set by its syndrome bit alone.
    fn detector_update(&mut self, msgs: &[f64]) {
        let g = self.problem.tanner();
        for i in 0..g.num_detectors() {
            let mut negative = false;
            let mut min1 = f64::INFINITY;
            let mut min2 = f64::INFINITY;
            let mut argmin = usize::MAX;
            let mut active = 0usize;
            for &e in g.row_edges(i) {
                if self.masked[g.edge_col(e)] {
                    continue;
                }
                active += 1;
                let v = msgs[e];
                negative ^= v < 0.0;
                let mag = v.abs();
                if mag < min1 {
                    min2 = min1;
                    min1 = mag;
                    argmin = e;
                } else if mag < min2 {
                    min2 = mag;
                }
            }
            if active == 0 {
                continue;
            }
            let base_negative = negative ^ self.syndrome[i];
            for &e in g.row_edges(i) {
                if self.masked[g.edge_col(e)] {
                    continue;
                }
                let mag = if active == 1 {
                    MSG_MAX
                } else if e == argmin {
                    (min2 * self.scale).min(MSG_MAX)
                } else {
                    (min1 * self.scale).min(MSG_MAX)
                };
                let is_negative = if active == 1 {
                    self.syndrome[i]
                } else {
                    base_negative ^ (msgs[e] < 0.0)
                };
                self.check_msgs[e] = if is_negative { -mag } else { mag };
            }
        }
    }

    fn syndrome_satisfied(&self) -> bool {
        let g = self.problem.tanner();
        (0..g.num_detectors()).all(|i| {
            let parity = g.row_edges(i).iter().fold(false, |acc, &e| {
                let j = g.edge_col(e);
                acc ^ (!self.masked[j] && self.hard[j])
            });
            parity == self.syndrome[i]
        })
    }

    fn fill_decision(&self, mask: &MaskAssignment) -> BitVector {
        let n = self.problem.num_errors();
        let mut out = BitVector::zeros(n);
        for j in 0..n {
            if !self.masked[j] && self.hard[j] {
                out.set(j, true);
            }
        }
        for &(j, v) in mask.pairs() {
            out.set(j, v);
        }
        out
    }
}

/// One-shot masked BP with a fresh engine.
pub fn masked_bp(
    problem: &DecodingProblem,
    edge_msgs: &EdgeMessages,
    mask: &MaskAssignment,
    s: &BitVector,
    max_iters: usize,
) -> Result<BpOutcome> {
    BpEngine::new(problem).run(edge_msgs, mask, s, max_iters)
}

/// Plain BP from the priors with no mask.
pub fn plain_bp(problem: &DecodingProblem, s: &BitVector, max_iters: usize) -> Result<BpOutcome> {
    masked_bp(
        problem,
        &initial_messages(problem),
        &MaskAssignment::new(),
        s,
        max_iters,
    )
}
