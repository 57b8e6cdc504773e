use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::CornersPoint;

/// M = (X + X*)/2 with X_ij standard complex Gaussians (unit variance in each part).
pub fn gue_matrix<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<Complex64> {
    let x = DMatrix::from_fn(m, m, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    (&x + x.adjoint()).map(|z| z * 0.5)
}

/// Sorted eigenvalues of every top-left corner, smallest corner first.
pub fn corners_of(mat: &DMatrix<Complex64>) -> CornersPoint {
    let m = mat.nrows();
    let levels = (1..=m)
        .map(|k| {
            let mut ev: Vec<f64> = mat.view((0, 0), (k, k)).clone_owned().symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        })
        .collect();
    CornersPoint { levels }
}

pub fn sample_corners_with<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CornersPoint {
    corners_of(&gue_matrix(m, rng))
}

pub fn sample_corners(m: usize, seed: u64) -> CornersPoint {
    sample_corners_with(m, &mut ChaCha8Rng::seed_from_u64(seed))
}

const CHUNK: usize = 4096;

/// Independent samples; chunk c uses ChaCha stream c of the master seed, so the output does
/// not depend on thread scheduling.
pub fn sample_corners_many(m: usize, count: usize, seed: u64) -> Vec<CornersPoint> {
    (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len).map(move |_| sample_corners_with(m, &mut rng)).collect::<Vec<_>>()
        })
        .collect()
}
