//! Pseudo-spectral evaluation of quadratic terms with 3/2-rule zero padding.
//!
//! For fields without Nyquist content every lattice component satisfies
//! `|k_a| ≤ n/2 − 1`, so a product has `|k_a| ≤ n − 2`. On a padded lattice of
//! `m = 3n/2` points the aliases of those modes land at `|k_a| ≥ n/2 + 2`,
//! outside the retained band, and the truncated product is exact.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::fft_nd;
use super::field::{SpectralScalarField, SpectralVectorField};
use super::grid::Grid;
use super::ops::partial;
use crate::error::{Error, Result};

/// Points per axis of the dealiasing lattice for an `n`-point grid.
pub fn padded_size(n: usize) -> usize {
    3 * n / 2
}

/// Synthesize `f` on an `m`-point lattice (`m ≥ n`); Nyquist modes are
/// dropped. Returns real samples.
pub fn to_physical_on(f: &SpectralScalarField, m: usize) -> Vec<f64> {
    let grid = f.grid();
    let map = grid.embed_map(m);
    let mut data = vec![Complex64::default(); m.pow(grid.dim() as u32)];
    for (c, &j) in f.coefficients().iter().zip(map.iter()) {
        if j != usize::MAX {
            data[j] = *c;
        }
    }
    fft_nd(&mut data, m, grid.dim(), true);
    data.into_par_iter().map(|c| c.re).collect()
}

/// Analyse real samples on an `m`-point lattice and keep the modes of `grid`
/// (Nyquist modes excluded). Hermitian symmetry is enforced on the result.
pub fn from_physical_on(grid: &Arc<Grid>, m: usize, samples: &[f64]) -> Result<SpectralScalarField> {
    let total = m.pow(grid.dim() as u32);
    if samples.len() != total {
        return Err(Error::ShapeMismatch {
            expected: total,
            actual: samples.len(),
        });
    }
    let mut data: Vec<Complex64> = samples.par_iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_nd(&mut data, m, grid.dim(), false);
    let inv = 1.0 / total as f64;
    let map = grid.embed_map(m);
    let coef = map
        .iter()
        .map(|&j| {
            if j == usize::MAX {
                Complex64::default()
            } else {
                data[j] * inv
            }
        })
        .collect();
    let mut f = SpectralScalarField::from_coefficients(grid, coef)?;
    f.enforce_hermitian()?;
    Ok(f)
}

/// Copy the coefficients of `f` onto a finer lattice of the same dimension
/// (Nyquist modes of the coarse grid are dropped).
pub fn prolong(f: &SpectralScalarField, target: &Arc<Grid>) -> Result<SpectralScalarField> {
    let grid = f.grid();
    if target.dim() != grid.dim() || target.n() < grid.n() {
        return Err(Error::invalid("prolongation target must be a finer grid of equal dimension"));
    }
    let map = grid.embed_map(target.n());
    let mut out = SpectralScalarField::zeros(target);
    let dst = out.coefficients_mut();
    for (c, &j) in f.coefficients().iter().zip(map.iter()) {
        if j != usize::MAX {
            dst[j] = *c;
        }
    }
    Ok(out)
}

pub fn prolong_vec(v: &SpectralVectorField, target: &Arc<Grid>) -> Result<SpectralVectorField> {
    let comps = v
        .components()
        .iter()
        .map(|c| prolong(c, target))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralVectorField::from_components(comps)?.with_divergence_flag(v.is_divergence_free()))
}

/// A divergence-free velocity synthesized once on the dealiasing lattice, so
/// that several fields can be advected by it.
pub struct PaddedVelocity {
    grid: Arc<Grid>,
    m: usize,
    samples: Vec<Vec<f64>>,
}

impl PaddedVelocity {
    pub fn new(u: &SpectralVectorField) -> Result<Self> {
        if !u.is_divergence_free() {
            return Err(Error::NotDivergenceFree);
        }
        let grid = u.grid().clone();
        if u.ncomp() != grid.dim() {
            return Err(Error::ShapeMismatch {
                expected: grid.dim(),
                actual: u.ncomp(),
            });
        }
        let m = padded_size(grid.n());
        let samples = u.components().iter().map(|c| to_physical_on(c, m)).collect();
        Ok(PaddedVelocity { grid, m, samples })
    }

    /// Largest pointwise speed on the padded lattice.
    pub fn max_speed(&self) -> f64 {
        let len = self.samples[0].len();
        (0..len)
            .map(|p| self.samples.iter().map(|c| c[p] * c[p]).sum::<f64>())
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// `(u·∇) f` for a single scalar.
    pub fn advect_scalar(&self, f: &SpectralScalarField) -> Result<SpectralScalarField> {
        if **f.grid() != *self.grid {
            return Err(Error::GridMismatch);
        }
        let mut acc = vec![0.0; self.samples[0].len()];
        for (a, ua) in self.samples.iter().enumerate() {
            let d = to_physical_on(&partial(f, a), self.m);
            acc.par_iter_mut()
                .zip(ua.par_iter().zip(d.par_iter()))
                .for_each(|(o, (x, y))| *o += x * y);
        }
        from_physical_on(&self.grid, self.m, &acc)
    }

    /// `(u·∇) f` componentwise.
    pub fn advect(&self, f: &SpectralVectorField) -> Result<SpectralVectorField> {
        let comps = f
            .components()
            .iter()
            .map(|c| self.advect_scalar(c))
            .collect::<Result<Vec<_>>>()?;
        SpectralVectorField::from_components(comps)
    }
}

/// Dealiased `(u·∇) f`. `u` must carry the divergence-free flag.
pub fn advect(u: &SpectralVectorField, f: &SpectralVectorField) -> Result<SpectralVectorField> {
    PaddedVelocity::new(u)?.advect(f)
}
