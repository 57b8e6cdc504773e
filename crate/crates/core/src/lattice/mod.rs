//! Transfer-matrix evaluation of partition functions over a finite window of columns,
//! and randomized verifiers for the identities they satisfy.

mod comp;
mod engine;
mod functions;
mod verify;

pub use comp::{enumerate_compositions, psi2, psi2_relative, ColComp};
pub use engine::{evaluate, evaluate_by_columns, evaluate_by_rows, Flow, Horiz, LatticeSpec, VertexWeight};
pub use functions::*;
pub use verify::*;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("invalid coloured composition: {0}")]
    Composition(String),
    #[error("lattice shape: {0}")]
    Shape(String),
    #[error("boundary colour counts do not balance")]
    Unbalanced,
    #[error("window: {0}")]
    Window(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
