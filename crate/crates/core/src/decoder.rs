use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::beam::{BeamConfig, BeamDecoder, DecodeResult, PRESETS};
use crate::bp::plain_bp;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::osd::{bp_osd_decode, OsdConfig};
use crate::problem::DecodingProblem;

/// Iterations used by the plain `bp` decoder.
pub const PLAIN_BP_ITERS: usize = 230;

/// A decoder selectable by name.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecoderSpec {
    Bp { iters: usize },
    Beam { name: &'static str, cfg: BeamConfig },
    BpOsd(OsdConfig),
}

impl DecoderSpec {
    /// Every accepted decoder name.
    pub fn names() -> Vec<&'static str> {
        let mut names = vec!["bp", "bp30+osd"];
        names.extend(PRESETS.iter().map(|(n, _)| *n));
        names
    }

    pub fn decode(&self, problem: &DecodingProblem, s: &BitVector) -> Result<DecodeResult> {
        match self {
            DecoderSpec::Bp { iters } => {
                let start = Instant::now();
                let out = plain_bp(problem, s, *iters)?;
                let weight = problem.error_weight(&out.hard_decision)?;
                let converged = out.converged();
                Ok(DecodeResult {
                    decoded: out.hard_decision,
                    converged,
                    weight,
                    rounds_used: 0,
                    paths_expanded: 0,
                    solutions_found: usize::from(converged),
                    wall_time: start.elapsed(),
                })
            }
            DecoderSpec::Beam { cfg, .. } => BeamDecoder::new(problem, *cfg)?.decode(s),
            DecoderSpec::BpOsd(cfg) => bp_osd_decode(problem, s, cfg),
        }
    }
}

impl FromStr for DecoderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bp" => Ok(DecoderSpec::Bp {
                iters: PLAIN_BP_ITERS,
            }),
            "bp30+osd" => Ok(DecoderSpec::BpOsd(OsdConfig::BP30_OSD)),
            _ => PRESETS
                .iter()
                .find(|(n, _)| *n == s)
                .map(|&(name, cfg)| DecoderSpec::Beam { name, cfg })
                .ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "unknown decoder {s:?}; valid decoders: {}",
                        DecoderSpec::names().join(", ")
                    ))
                }),
        }
    }
}

impl fmt::Display for DecoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderSpec::Bp { iters } if *iters == PLAIN_BP_ITERS => f.write_str("bp"),
            DecoderSpec::Bp { iters } => write!(f, "bp{iters}"),
            DecoderSpec::Beam { name, .. } => f.write_str(name),
            DecoderSpec::BpOsd(cfg) if *cfg == OsdConfig::BP30_OSD => f.write_str("bp30+osd"),
            DecoderSpec::BpOsd(cfg) => write!(f, "bp{}+osd{}", cfg.bp_iters, cfg.order),
        }
    }
}
