use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::GueError;

/// Level k (1-based) holds k reals; consecutive levels should interlace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornersPoint {
    pub levels: Vec<Vec<f64>>,
}

impl CornersPoint {
    pub fn new(levels: Vec<Vec<f64>>) -> Result<Self, GueError> {
        for (k, l) in levels.iter().enumerate() {
            if l.len() != k + 1 {
                return Err(GueError::Shape { level: k + 1, got: l.len(), want: k + 1 });
            }
        }
        Ok(Self { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Strict interlacing y_i < x_i < y_{i+1} between every level x and the one above, y.
    pub fn interlaces(&self) -> bool {
        self.levels.iter().all(|l| l.windows(2).all(|w| w[0] < w[1]))
            && self.levels.windows(2).all(|w| interlaces(&w[0], &w[1]))
    }
}

/// Whether `upper` (length k + 1) strictly interlaces `lower` (length k).
pub fn interlaces(lower: &[f64], upper: &[f64]) -> bool {
    upper.len() == lower.len() + 1 && lower.iter().enumerate().all(|(i, &x)| upper[i] < x && x < upper[i + 1])
}

fn vandermonde(x: &[f64]) -> f64 {
    let mut v = 1.0;
    for j in 0..x.len() {
        for i in 0..j {
            v *= x[j] - x[i];
        }
    }
    v
}

fn gauss(x: &[f64]) -> f64 {
    (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp()
}

/// Joint density of the corners array with respect to Lebesgue measure on all its entries.
pub fn gue_density(p: &CornersPoint) -> f64 {
    let Some(top) = p.levels.last() else { return 1.0 };
    if !p.interlaces() {
        return 0.0;
    }
    (2.0 * PI).powf(-(top.len() as f64) / 2.0) * vandermonde(top) * gauss(top)
}

/// Density of level m + 1 given level m.
pub fn gue_transition_density(xm: &[f64], xm1: &[f64]) -> Result<f64, GueError> {
    if xm1.len() != xm.len() + 1 {
        return Err(GueError::Shape { level: xm.len() + 1, got: xm1.len(), want: xm.len() + 1 });
    }
    let den = vandermonde(xm) * gauss(xm);
    if den == 0.0 || xm.windows(2).any(|w| w[0] == w[1]) {
        return Err(GueError::Degenerate(xm.len()));
    }
    if !(xm1.windows(2).all(|w| w[0] < w[1]) && interlaces(xm, xm1)) {
        return Ok(0.0);
    }
    Ok((2.0 * PI).powf(-0.5) * vandermonde(xm1) * gauss(xm1) / den)
}

/// Closed form of the Gaussian contour integral I(x_1, ..., x_m).
pub fn i_closed_form(xs: &[f64]) -> f64 {
    (2.0 * PI).powf(-(xs.len() as f64) / 2.0) * gauss(xs) * vandermonde(xs)
}
