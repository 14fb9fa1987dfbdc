//! Monte Carlo trials: sampling, failure scoring and latency statistics.

use std::collections::BTreeMap;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::beam::DecodeResult;
use crate::decoder::DecoderSpec;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::problem::DecodingProblem;

/// Quantiles reported by [`run_trials`].
pub const REPORTED_QUANTILES: [f64; 4] = [0.5, 0.9, 0.99, 0.999];

/// SplitMix64 finalizer of `base_seed` and the shot index. Shot `k` always
/// gets the same stream regardless of how shots are sharded.
pub fn shot_seed(base_seed: u64, shot: u64) -> u64 {
    let mut z = base_seed ^ shot.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn shot_rng(base_seed: u64, shot: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(shot_seed(base_seed, shot))
}

/// Independent Bernoulli(p_j) draw per error column.
pub fn sample_error<R: Rng + ?Sized>(problem: &DecodingProblem, rng: &mut R) -> BitVector {
    let mut e = BitVector::zeros(problem.num_errors());
    for (j, &p) in problem.probabilities().iter().enumerate() {
        if rng.random::<f64>() < p {
            e.set(j, true);
        }
    }
    e
}

#[derive(Clone, Debug)]
pub struct TrialPlan<'a> {
    pub problem: &'a DecodingProblem,
    pub decoder: DecoderSpec,
    pub shots: u64,
    pub base_seed: u64,
    pub workers: usize,
    pub keep_shot_log: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShotRecord {
    pub shot: u64,
    pub seed: u64,
    pub failed: bool,
    pub converged: bool,
    pub weight: f64,
    pub rounds: usize,
    pub time_ns: u64,
}

#[derive(Clone, Debug)]
pub struct SimStats {
    pub shots: u64,
    pub logical_failures: u64,
    pub decoder_nonconvergence: u64,
    pub mean_time: Duration,
    /// Nearest-rank latency per quantile, keyed by the quantile label.
    pub percentiles: BTreeMap<String, Duration>,
    pub shot_log: Option<Vec<ShotRecord>>,
}

impl SimStats {
    pub fn logical_error_rate(&self) -> f64 {
        self.logical_failures as f64 / self.shots as f64
    }

    pub fn percentile(&self, q: f64) -> Option<Duration> {
        self.percentiles.get(&quantile_label(q)).copied()
    }
}

fn quantile_label(q: f64) -> String {
    format!("{q}")
}

/// Whether `decoded` leaves a logical flip behind for the true error `e`.
pub fn is_logical_failure(
    problem: &DecodingProblem,
    e: &BitVector,
    decoded: &BitVector,
) -> Result<bool> {
    Ok(!problem.logical_flip(&e.xor(decoded))?.is_zero())
}

fn run_shot<F>(
    problem: &DecodingProblem,
    base_seed: u64,
    shot: u64,
    decode: &F,
) -> Result<ShotRecord>
where
    F: Fn(&DecodingProblem, &BitVector) -> Result<DecodeResult>,
{
    let seed = shot_seed(base_seed, shot);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = sample_error(problem, &mut rng);
    let s = problem.syndrome_of(&e)?;
    let result = decode(problem, &s)?;
    let failed = !result.converged || is_logical_failure(problem, &e, &result.decoded)?;
    Ok(ShotRecord {
        shot,
        seed,
        failed,
        converged: result.converged,
        weight: result.weight,
        rounds: result.rounds_used,
        time_ns: u64::try_from(result.wall_time.as_nanos()).unwrap_or(u64::MAX),
    })
}

/// Runs every shot of `plan`, spreading them over `plan.workers` threads.
/// Counts depend only on `base_seed`, never on the worker count.
pub fn run_trials(plan: &TrialPlan<'_>) -> Result<SimStats> {
    let decoder = plan.decoder;
    run_trials_with(plan, move |problem, s| decoder.decode(problem, s))
}

/// [`run_trials`] with an arbitrary decoding function in place of
/// `plan.decoder`.
pub fn run_trials_with<F>(plan: &TrialPlan<'_>, decode: F) -> Result<SimStats>
where
    F: Fn(&DecodingProblem, &BitVector) -> Result<DecodeResult> + Sync,
{
    if plan.shots == 0 {
        return Err(Error::InvalidConfig("shots must be at least 1".into()));
    }
    if plan.workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    let records: Vec<ShotRecord> = if plan.workers == 1 {
        (0..plan.shots)
            .map(|k| run_shot(plan.problem, plan.base_seed, k, &decode))
            .collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
        pool.install(|| {
            (0..plan.shots)
                .into_par_iter()
                .map(|k| run_shot(plan.problem, plan.base_seed, k, &decode))
                .collect::<Result<_>>()
        })?
    };

    let logical_failures = records.iter().filter(|r| r.failed).count() as u64;
    let decoder_nonconvergence = records.iter().filter(|r| !r.converged).count() as u64;
    let times: Vec<Duration> = records
        .iter()
        .map(|r| Duration::from_nanos(r.time_ns))
        .collect();
    let total: u128 = records.iter().map(|r| u128::from(r.time_ns)).sum();
    let mean_time = Duration::from_nanos((total / records.len() as u128) as u64);
    let mut percentiles = BTreeMap::new();
    for q in REPORTED_QUANTILES {
        percentiles.insert(quantile_label(q), percentile(&times, q)?);
    }
    Ok(SimStats {
        shots: plan.shots,
        logical_failures,
        decoder_nonconvergence,
        mean_time,
        percentiles,
        shot_log: plan.keep_shot_log.then_some(records),
    })
}

/// Nearest-rank percentile: the sorted sample at index `ceil(q n) - 1`.
pub fn percentile(samples: &[Duration], q: f64) -> Result<Duration> {
    if samples.is_empty() {
        return Err(Error::InvalidConfig("percentile of an empty sample".into()));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidConfig(format!("quantile {q} outside (0, 1]")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    // nudge away float noise such as 0.999 * 1000 = 999.0000000000001
    let rank = ((q * n as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(sorted[rank.min(n) - 1])
}

/// Total logical error rate of separately decoded X and Z errors.
pub fn combine_xz(ler_x: f64, ler_z: f64) -> f64 {
    (ler_x + ler_z).min(1.0)
}

/// JSON document written by `simulate`.
#[derive(Clone, Debug, Serialize)]
pub struct SimReport {
    pub software: String,
    pub host: String,
    pub plan: PlanEcho,
    pub stats: StatsJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanEcho {
    pub problem: String,
    pub num_errors: usize,
    pub num_detectors: usize,
    pub num_logicals: usize,
    pub decoder: String,
    pub shots: u64,
    pub base_seed: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsJson {
    pub shots: u64,
    pub logical_failures: u64,
    pub logical_error_rate: f64,
    pub decoder_nonconvergence: u64,
    pub mean_time_ns: u64,
    pub percentiles_ns: BTreeMap<String, u64>,
}

impl SimReport {
    pub fn new(plan: &TrialPlan<'_>, problem_label: &str, stats: &SimStats) -> Self {
        let host = format!(
            "{}-{}, {} hardware threads",
            std::env::consts::OS,
            std::env::consts::ARCH,
            std::thread::available_parallelism().map_or(1, |n| n.get())
        );
        Self {
            software: format!("beamdec {}", env!("CARGO_PKG_VERSION")),
            host,
            plan: PlanEcho {
                problem: problem_label.to_string(),
                num_errors: plan.problem.num_errors(),
                num_detectors: plan.problem.num_detectors(),
                num_logicals: plan.problem.num_logicals(),
                decoder: plan.decoder.to_string(),
                shots: plan.shots,
                base_seed: plan.base_seed,
                workers: plan.workers,
            },
            stats: StatsJson {
                shots: stats.shots,
                logical_failures: stats.logical_failures,
                logical_error_rate: stats.logical_error_rate(),
                decoder_nonconvergence: stats.decoder_nonconvergence,
                mean_time_ns: stats.mean_time.as_nanos() as u64,
                percentiles_ns: stats
                    .percentiles
                    .iter()
                    .map(|(k, v)| (k.clone(), v.as_nanos() as u64))
                    .collect(),
            },
        }
    }
}

/// Header of the per-shot CSV.
pub const SHOT_CSV_HEADER: &str = "shot,seed,failed,converged,weight,rounds,time_ns";

impl ShotRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.shot,
            self.seed,
            u8::from(self.failed),
            u8::from(self.converged),
            self.weight,
            self.rounds,
            self.time_ns
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(v: &[u64]) -> Vec<Duration> {
        v.iter().map(|&x| Duration::from_nanos(x)).collect()
    }

    #[test]
    fn nearest_rank_examples() {
        let thousand: Vec<u64> = (1..=1000).collect();
        assert_eq!(
            percentile(&ns(&thousand), 0.999).unwrap(),
            Duration::from_nanos(999)
        );
        assert_eq!(
            percentile(&ns(&thousand), 1.0).unwrap(),
            Duration::from_nanos(1000)
        );
        assert_eq!(
            percentile(&ns(&[42]), 0.3).unwrap(),
            Duration::from_nanos(42)
        );
        assert_eq!(
            percentile(&ns(&[5, 1, 3]), 0.5).unwrap(),
            Duration::from_nanos(3)
        );
        assert!(percentile(&[], 0.5).is_err());
        assert!(percentile(&ns(&[1]), 0.0).is_err());
    }

    #[test]
    fn combine_examples() {
        assert!((combine_xz(0.01, 0.02) - 0.03).abs() < 1e-15);
        assert_eq!(combine_xz(0.0, 0.25), 0.25);
        assert_eq!(combine_xz(0.7, 0.7), 1.0);
    }

    #[test]
    fn shot_seeds_are_distinct_and_stable() {
        assert_eq!(shot_seed(7, 3), shot_seed(7, 3));
        assert_ne!(shot_seed(7, 3), shot_seed(7, 4));
        assert_ne!(shot_seed(7, 3), shot_seed(8, 3));
    }
}
