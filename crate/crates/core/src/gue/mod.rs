//! Floating-point side: GUE corners densities and sampling, and the finite-t experiment
//! comparing the exact discrete chain with its colour and Gaussian limits.

mod density;
mod experiment;
mod sample;

pub use density::*;
pub use experiment::*;
pub use sample::*;

use thiserror::Error;

use crate::colour::ColourError;
use crate::lattice::LatticeError;

#[derive(Debug, Error)]
pub enum GueError {
    #[error("level {0} has repeated entries; the conditional density is undefined")]
    Degenerate(usize),
    #[error("level {level} has length {got}, expected {want}")]
    Shape { level: usize, got: usize, want: usize },
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("q must lie strictly between 0 and 1, got {0}")]
    QRange(String),
    #[error("cannot certify truncation at t = {t}: degree cut-off would exceed {max_degree}")]
    Truncation { t: f64, max_degree: usize },
    #[error("degree {degree} weights sum to {got}, expected {want}")]
    Certificate { degree: usize, got: String, want: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Colour(#[from] ColourError),
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(it: I) -> Self {
        let mut s = Self::default();
        for x in it {
            s.add(x);
        }
        s
    }
}
