//! Seeded random band-limited fields for tests, verification suites and
//! initial data.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::field::{SpectralScalarField, SpectralVectorField};
use super::grid::Grid;
use super::ops::leray_project;

/// Zero-mean real field with Gaussian coefficients on `0 < |k| ≤ k_max`,
/// amplitude `|k|^{-slope}`, no Nyquist content.
pub fn random_scalar<R: Rng + ?Sized>(
    grid: &Arc<Grid>,
    k_max: f64,
    slope: f64,
    rng: &mut R,
) -> SpectralScalarField {
    random_scalar_in_shell(grid, 0.0, k_max, slope, rng)
}

/// As [`random_scalar`] but restricted to `k_min < |k| ≤ k_max`.
pub fn random_scalar_in_shell<R: Rng + ?Sized>(
    grid: &Arc<Grid>,
    k_min: f64,
    k_max: f64,
    slope: f64,
    rng: &mut R,
) -> SpectralScalarField {
    let mut coef = vec![Complex64::default(); grid.len()];
    for idx in 1..grid.len() {
        let neg = grid.neg_index(idx);
        if neg < idx || grid.is_nyquist(idx) {
            continue;
        }
        let r = grid.kmag(idx);
        if r <= k_min || r > k_max {
            continue;
        }
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let c = Complex64::new(re, im) * r.powf(-slope);
        coef[idx] = c;
        coef[neg] = c.conj();
    }
    SpectralScalarField::from_coefficients(grid, coef).expect("length matches grid")
}

pub fn random_vector<R: Rng + ?Sized>(
    grid: &Arc<Grid>,
    ncomp: usize,
    k_max: f64,
    slope: f64,
    rng: &mut R,
) -> SpectralVectorField {
    let comps = (0..ncomp)
        .map(|_| random_scalar(grid, k_max, slope, rng))
        .collect();
    SpectralVectorField::from_components(comps).expect("components share a grid")
}

/// Random divergence-free field (Leray projection of [`random_vector`]).
pub fn random_solenoidal<R: Rng + ?Sized>(
    grid: &Arc<Grid>,
    k_max: f64,
    slope: f64,
    rng: &mut R,
) -> SpectralVectorField {
    let v = random_vector(grid, grid.dim(), k_max, slope, rng);
    leray_project(&v).expect("component count equals dimension")
}
