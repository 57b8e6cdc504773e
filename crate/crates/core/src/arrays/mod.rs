//! Interlacing triangular arrays and the graph colourings they are conjectured to count.

mod enumerate;
mod graph;

pub use enumerate::*;
pub use graph::*;

use thiserror::Error;

use crate::colour::ColourError;

#[derive(Debug, Error)]
pub enum ArraysError {
    #[error("rank {0} outside the supported range 1..=5")]
    Rank(usize),
    #[error("row {row} does not interlace with the row below")]
    NotInterlacing { row: usize },
    #[error("state budget {budget} exceeded at level {level}; completed counts {completed:?}")]
    Budget { budget: usize, level: usize, completed: Vec<String> },
    #[error("graph too large: {0}")]
    GraphSize(String),
    #[error(transparent)]
    Colour(#[from] ColourError),
}
