//! Decoders for quantum LDPC codes.
//!
//! The centrepiece is a beam search decoder ([`beam`]) that branches on the
//! least reliable error node of a masked min-sum BP run ([`bp`]), prunes
//! paths by an accumulated reliability score and returns the lightest
//! solution found. A BP-OSD decoder ([`osd`]) serves as a baseline,
//! [`codes`] builds code-capacity problems for repetition, bivariate bicycle
//! and hypergraph product codes, and [`sim`] runs seeded Monte Carlo trials
//! with tail-latency statistics.

pub mod beam;
pub mod bp;
pub mod codes;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod osd;
pub mod problem;
pub mod sim;
pub mod tanner;

pub use beam::{beam_decode, BeamConfig, BeamDecoder, DecodeResult};
pub use bp::{masked_bp, BpEngine, BpOutcome, BpStatus, EdgeMessages, MaskAssignment};
pub use codes::{CodePreset, CssCode, ErrorType, Stacking};
pub use decoder::DecoderSpec;
pub use error::{Error, Result};
pub use gf2::{BitVector, SparseBinaryMatrix};
pub use osd::{bp_osd_decode, OsdConfig, OsdMethod};
pub use problem::DecodingProblem;
pub use sim::{run_trials, SimStats, TrialPlan};
