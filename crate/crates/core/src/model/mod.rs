//! Vertex weights: fundamental L, M and R weights, fused weights, LLT weights,
//! and exact Yang-Baxter verification at random rational points.

mod fused;
mod state;
mod weights;
mod ybe;

pub use fused::{fused_weight, fused_weight_by_fusion, llt_weight};
pub use state::*;
pub use weights::{l_hat, l_weight, m_hat, m_hat_s0, m_weight, r_weight, Params};
pub use ybe::{verify_ybe, YbeFailure, YbeKind, YbeReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("evaluation hits a pole: {0}")]
    Pole(&'static str),
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("unknown Yang-Baxter kind {0:?}")]
    UnknownKind(String),
    #[error("rank {0} outside the supported range 1..=3")]
    Rank(usize),
    #[error("random draws kept hitting poles")]
    RedrawLimit,
}
