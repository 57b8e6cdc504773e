//! Colour sequences, their interlacing, the one-step statistics, and the exact Markov
//! kernel on colour sequences with its sampler.

mod kernel;
mod seq;

pub use kernel::*;
pub use seq::{interlace_check, step_stats, successors, ColourSequence, ColourStepStats};

use crate::lattice::LatticeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColourError {
    #[error("colour counts: {0}")]
    Counts(String),
    #[error("cannot parse colour sequence {0:?}")]
    Parse(String),
    #[error("{0} does not interlace with {1}")]
    NotInterlacing(String, String),
    #[error("g vanishes at {0}")]
    ZeroG(String),
    #[error("kernel row of {0} sums to {1}, not 1")]
    Certificate(String, String),
    #[error("q = {0} is outside (0,1)")]
    QRange(String),
    #[error("negative kernel entry {0} -> {1}")]
    Negative(String, String),
    #[error("evaluation: {0}")]
    Eval(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
