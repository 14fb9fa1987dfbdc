//! Beam search decoder guided by masked BP.
//!
//! A seed BP run picks the least reliable error node. Every round, each live
//! path is split into two children that fix its branch node to 0 and 1 and
//! run a short warm-started masked BP. Children are scored by their summed
//! posterior reliability and only the best `beam_width` survive. Decoding
//! stops once `num_results` distinct solutions are known or the round budget
//! runs out; the lightest solution wins.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::bp::{initial_messages, BpEngine, BpStatus, EdgeMessages, MaskAssignment};
use crate::error::{check_len, Error, Result};
use crate::gf2::BitVector;
use crate::problem::DecodingProblem;

/// Beam search tunables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BeamConfig {
    pub max_rounds: usize,
    pub beam_width: usize,
    pub initial_iters: usize,
    pub iters_per_round: usize,
    pub num_results: usize,
}

impl BeamConfig {
    pub const fn new(
        max_rounds: usize,
        beam_width: usize,
        initial_iters: usize,
        iters_per_round: usize,
        num_results: usize,
    ) -> Self {
        Self {
            max_rounds,
            beam_width,
            initial_iters,
            iters_per_round,
            num_results,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("max_rounds", self.max_rounds),
            ("beam_width", self.beam_width),
            ("initial_iters", self.initial_iters),
            ("iters_per_round", self.iters_per_round),
            ("num_results", self.num_results),
        ];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(Error::InvalidConfig(format!("{name} must be at least 1"))),
            None => Ok(()),
        }
    }

    /// Total BP iteration budget of a path from the root to the last round.
    pub fn iteration_budget(&self) -> usize {
        self.initial_iters + self.max_rounds * self.iters_per_round
    }

    pub fn preset(name: &str) -> Option<BeamConfig> {
        PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, cfg)| cfg)
    }
}

/// The named configurations: (max_rounds, beam_width, initial_iters,
/// iters_per_round, num_results).
pub const PRESETS: [(&str, BeamConfig); 4] = [
    ("beam8_230iters", BeamConfig::new(10, 8, 30, 20, 1)),
    ("beam32_340iters", BeamConfig::new(10, 32, 40, 30, 1)),
    ("beam64_640iters", BeamConfig::new(20, 64, 40, 30, 1)),
    ("beam64_32res_640iters", BeamConfig::new(20, 64, 40, 30, 32)),
];

/// One branch of the search.
#[derive(Clone, Debug)]
pub struct Path {
    pub edge_msgs: EdgeMessages,
    pub pos_val_pairs: MaskAssignment,
    pub next_pos: usize,
    pub score: f64,
}

/// Output of a decoder call.
#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub decoded: BitVector,
    pub converged: bool,
    pub weight: f64,
    pub rounds_used: usize,
    /// Masked BP runs launched for child paths.
    pub paths_expanded: usize,
    /// Distinct syndrome-matching vectors found.
    pub solutions_found: usize,
    pub wall_time: Duration,
}

/// Per-round instrumentation of a beam search.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RoundTrace {
    pub round: usize,
    pub paths_in: usize,
    pub bp_calls: usize,
    pub paths_out: usize,
    /// Mask length of every surviving path.
    pub mask_lens: Vec<usize>,
    /// Largest set size observed after any insertion this round.
    pub peak_set_size: usize,
}

/// Unmasked node with the smallest `|sum_llr|`, lowest index on ties.
pub fn select_branch_node(sum_llr: &[f64], mask: &MaskAssignment) -> Result<usize> {
    let masked = mask.flags(sum_llr.len())?;
    select_unmasked(sum_llr, &masked)
}

fn select_unmasked(sum_llr: &[f64], masked: &[bool]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, v) in sum_llr.iter().enumerate() {
        if masked[j] {
            continue;
        }
        let r = v.abs();
        if best.is_none_or(|(_, b)| r < b) {
            best = Some((j, r));
        }
    }
    best.map(|(j, _)| j).ok_or(Error::AllMasked)
}

/// `Σ_{unmasked j} |sum_llr[j]| / iters_run`.
pub fn path_score(sum_llr: &[f64], mask: &MaskAssignment, iters_run: usize) -> Result<f64> {
    if iters_run == 0 {
        return Err(Error::InvalidConfig("iters_run must be at least 1".into()));
    }
    let masked = mask.flags(sum_llr.len())?;
    Ok(score_unmasked(sum_llr, &masked, iters_run))
}

fn score_unmasked(sum_llr: &[f64], masked: &[bool], iters_run: usize) -> f64 {
    let total: f64 = sum_llr
        .iter()
        .zip(masked)
        .filter(|(_, &m)| !m)
        .map(|(v, _)| v.abs())
        .sum();
    total / iters_run as f64
}

fn min_score_index(set: &[Path]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in set.iter().enumerate() {
        if best.is_none_or(|(_, s)| p.score < s) {
            best = Some((i, p.score));
        }
    }
    best.map(|(i, _)| i)
}

/// Whether a path scoring `score` would enter `set` under [`bounded_insert`].
pub fn would_insert(set: &[Path], score: f64, beam_width: usize) -> bool {
    set.len() < beam_width || min_score_index(set).is_some_and(|i| score > set[i].score)
}

/// Inserts `candidate` while keeping at most `beam_width` paths: a full set
/// ejects its lowest-scoring member only for a strictly better newcomer.
/// Returns whether the candidate was kept.
pub fn bounded_insert(set: &mut Vec<Path>, candidate: Path, beam_width: usize) -> bool {
    if set.len() < beam_width {
        set.push(candidate);
        return true;
    }
    match min_score_index(set) {
        Some(i) if candidate.score > set[i].score => {
            set[i] = candidate;
            true
        }
        _ => false,
    }
}

/// Distinct solutions in discovery order.
struct Solutions {
    seen: HashSet<BitVector>,
    found: Vec<(BitVector, f64)>,
}

impl Solutions {
    fn new() -> Self {
        Self {
            seen: HashSet::new(),
            found: Vec::new(),
        }
    }

    fn insert(&mut self, problem: &DecodingProblem, v: &BitVector) -> Result<()> {
        if self.seen.insert(v.clone()) {
            let w = problem.error_weight(v)?;
            self.found.push((v.clone(), w));
        }
        Ok(())
    }

    fn len(&self) -> usize {
        self.found.len()
    }

    /// Lightest solution; the earliest one wins ties.
    fn best(&self) -> Option<&(BitVector, f64)> {
        let mut best: Option<&(BitVector, f64)> = None;
        for entry in &self.found {
            if best.is_none_or(|b| entry.1 < b.1) {
                best = Some(entry);
            }
        }
        best
    }
}

/// Beam search decoder bound to one problem.
pub struct BeamDecoder<'a> {
    engine: BpEngine<'a>,
    cfg: BeamConfig,
    initial: EdgeMessages,
}

impl<'a> BeamDecoder<'a> {
    pub fn new(problem: &'a DecodingProblem, cfg: BeamConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            engine: BpEngine::new(problem),
            cfg,
            initial: initial_messages(problem),
        })
    }

    pub fn config(&self) -> &BeamConfig {
        &self.cfg
    }

    pub fn decode(&mut self, s: &BitVector) -> Result<DecodeResult> {
        self.decode_inner(s, None)
    }

    /// Like [`decode`](Self::decode) but also records per-round statistics.
    pub fn decode_traced(&mut self, s: &BitVector) -> Result<(DecodeResult, Vec<RoundTrace>)> {
        let mut trace = Vec::new();
        let result = self.decode_inner(s, Some(&mut trace))?;
        Ok((result, trace))
    }

    fn decode_inner(
        &mut self,
        s: &BitVector,
        mut trace: Option<&mut Vec<RoundTrace>>,
    ) -> Result<DecodeResult> {
        let start = Instant::now();
        let problem = self.engine.problem();
        check_len("syndrome length", problem.num_detectors(), s.len())?;
        let cfg = self.cfg;
        let n = problem.num_errors();

        let seed = self
            .engine
            .run(&self.initial, &MaskAssignment::new(), s, cfg.initial_iters)?;
        let mut results = Solutions::new();
        let mut rounds_used = 0;
        let mut paths_expanded = 0;

        let finish = |results: &Solutions,
                      rounds_used: usize,
                      paths_expanded: usize|
         -> Option<DecodeResult> {
            results.best().map(|(v, w)| DecodeResult {
                decoded: v.clone(),
                converged: true,
                weight: *w,
                rounds_used,
                paths_expanded,
                solutions_found: results.len(),
                wall_time: start.elapsed(),
            })
        };

        if let Some(v) = seed.decoded() {
            results.insert(problem, v)?;
            if results.len() >= cfg.num_results {
                return Ok(finish(&results, 0, 0).expect("one solution present"));
            }
        }

        let mut set = Vec::new();
        if let Ok(next_pos) = select_unmasked(&seed.sum_llr, &vec![false; n]) {
            set.push(Path {
                edge_msgs: seed.final_messages.clone(),
                pos_val_pairs: MaskAssignment::new(),
                next_pos,
                score: 0.0,
            });
        }

        let mut masked = vec![false; n];
        for round in 1..=cfg.max_rounds {
            if set.is_empty() {
                break;
            }
            rounds_used = round;
            // descending score; the stable sort keeps insertion order on ties
            set.sort_by(|a: &Path, b: &Path| b.score.total_cmp(&a.score));
            let mut next_set: Vec<Path> = Vec::with_capacity(cfg.beam_width);
            let mut round_trace = RoundTrace {
                round,
                paths_in: set.len(),
                ..RoundTrace::default()
            };

            for path in &set {
                for value in [false, true] {
                    let mask = path.pos_val_pairs.with(path.next_pos, value);
                    let out = self
                        .engine
                        .run(&path.edge_msgs, &mask, s, cfg.iters_per_round)?;
                    paths_expanded += 1;
                    round_trace.bp_calls += 1;

                    match out.status {
                        BpStatus::Infeasible => continue,
                        BpStatus::Converged => {
                            results.insert(problem, &out.hard_decision)?;
                            if results.len() >= cfg.num_results {
                                if let Some(t) = trace.as_deref_mut() {
                                    round_trace.paths_out = next_set.len();
                                    round_trace.mask_lens =
                                        next_set.iter().map(|p| p.pos_val_pairs.len()).collect();
                                    t.push(round_trace);
                                }
                                return Ok(finish(&results, rounds_used, paths_expanded)
                                    .expect("results reached target"));
                            }
                        }
                        BpStatus::Failed => {}
                    }

                    // converged children stay in the beam as well
                    masked.iter_mut().for_each(|f| *f = false);
                    for &(j, _) in mask.pairs() {
                        masked[j] = true;
                    }
                    let Ok(next_pos) = select_unmasked(&out.sum_llr, &masked) else {
                        continue;
                    };
                    let score = score_unmasked(&out.sum_llr, &masked, out.iters_run);
                    if !would_insert(&next_set, score, cfg.beam_width) {
                        continue;
                    }
                    bounded_insert(
                        &mut next_set,
                        Path {
                            edge_msgs: out.final_messages,
                            pos_val_pairs: mask,
                            next_pos,
                            score,
                        },
                        cfg.beam_width,
                    );
                    round_trace.peak_set_size = round_trace.peak_set_size.max(next_set.len());
                }
            }

            if let Some(t) = trace.as_deref_mut() {
                round_trace.paths_out = next_set.len();
                round_trace.mask_lens = next_set.iter().map(|p| p.pos_val_pairs.len()).collect();
                t.push(round_trace);
            }
            set = next_set;
        }

        if let Some(r) = finish(&results, rounds_used, paths_expanded) {
            return Ok(r);
        }
        let weight = problem.error_weight(&seed.hard_decision)?;
        Ok(DecodeResult {
            decoded: seed.hard_decision,
            converged: false,
            weight,
            rounds_used,
            paths_expanded,
            solutions_found: 0,
            wall_time: start.elapsed(),
        })
    }
}

/// Decodes `s` with a fresh [`BeamDecoder`].
pub fn beam_decode(
    problem: &DecodingProblem,
    s: &BitVector,
    cfg: &BeamConfig,
) -> Result<DecodeResult> {
    BeamDecoder::new(problem, *cfg)?.decode(s)
}
