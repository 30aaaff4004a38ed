//! Parseval-based norms.
//!
//! Convention: with `coef` normalized so that the zero mode is the mean,
//! `‖f‖²_{L²} = (2π)^d Σ_k |coef(k)|²`, the true L² norm on the torus. Every
//! spectral norm below carries the same `(2π)^d` factor, and physical-space
//! `L^q` norms use the quadrature weight `(2π/n)^d`, which agrees with the
//! spectral value for `q = 2`. Sums run in storage order on one thread so the
//! result does not depend on the worker count.

use std::sync::Arc;

use num_complex::Complex64;

use super::field::{transform_backward, SpectralScalarField, SpectralVectorField};
use super::grid::Grid;
use super::symbol::{radial_power, RadialSymbol};
use crate::error::{Error, Result};

/// Anything made of coefficient arrays on a common grid.
pub trait FieldData {
    fn grid(&self) -> &Arc<Grid>;
    fn coefficient_arrays(&self) -> Vec<&[Complex64]>;
}

impl FieldData for SpectralScalarField {
    fn grid(&self) -> &Arc<Grid> {
        SpectralScalarField::grid(self)
    }

    fn coefficient_arrays(&self) -> Vec<&[Complex64]> {
        vec![self.coefficients()]
    }
}

impl FieldData for SpectralVectorField {
    fn grid(&self) -> &Arc<Grid> {
        SpectralVectorField::grid(self)
    }

    fn coefficient_arrays(&self) -> Vec<&[Complex64]> {
        self.components().iter().map(|c| c.coefficients()).collect()
    }
}

/// `∫ f·g dx` for real fields.
pub fn inner_product_l2<F: FieldData>(f: &F, g: &F) -> Result<f64> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let (a, b) = (f.coefficient_arrays(), g.coefficient_arrays());
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(&b) {
        for (p, q) in x.iter().zip(y.iter()) {
            sum += p.re * q.re + p.im * q.im;
        }
    }
    Ok(sum * f.grid().volume())
}

/// `(2π)^d Σ_k weight(k) |coef(k)|²`
pub fn weighted_square_sum<F: FieldData>(f: &F, weight: impl Fn(usize) -> f64) -> f64 {
    let grid = f.grid();
    let mut sum = 0.0;
    for arr in f.coefficient_arrays() {
        for (i, c) in arr.iter().enumerate() {
            let w = weight(i);
            if w != 0.0 {
                sum += w * c.norm_sqr();
            }
        }
    }
    sum * grid.volume()
}

/// Homogeneous seminorm `‖Λ^s f‖₂`. The zero mode counts only for `s = 0`.
pub fn sobolev_seminorm<F: FieldData>(f: &F, s: f64) -> f64 {
    let grid = f.grid().clone();
    weighted_square_sum(f, |i| radial_power(grid.kmag2(i), s)).sqrt()
}

/// Inhomogeneous norm `‖f‖_{H^s}` with weight `(1 + |k|²)^s`.
pub fn sobolev_norm<F: FieldData>(f: &F, s: f64) -> f64 {
    let grid = f.grid().clone();
    weighted_square_sum(f, |i| (1.0 + grid.kmag2(i)).powf(s)).sqrt()
}

/// `‖m(Λ) f‖₂` for a radial symbol `m`.
pub fn multiplier_norm<F: FieldData>(f: &F, m: &RadialSymbol) -> f64 {
    let grid = f.grid().clone();
    weighted_square_sum(f, |i| {
        let v = m.eval(grid.kmag(i));
        v * v
    })
    .sqrt()
}

/// `L^q` norm of real physical samples with pointwise Euclidean magnitude
/// across `components`.
pub fn lq_norm_samples(grid: &Grid, components: &[Vec<f64>], q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::invalid(format!("L^q exponent must be ≥ 1, got {q}")));
    }
    let npts = components.first().map_or(0, |c| c.len());
    let mag = |p: usize| components.iter().map(|c| c[p] * c[p]).sum::<f64>().sqrt();
    if q.is_infinite() {
        return Ok((0..npts).map(mag).fold(0.0, f64::max));
    }
    let weight = grid.volume() / npts as f64;
    let sum: f64 = (0..npts).map(|p| mag(p).powf(q)).sum();
    Ok((sum * weight).powf(1.0 / q))
}

/// `L^q` norm computed in physical space on the unpadded grid.
pub fn lq_norm<F: FieldData>(f: &F, q: f64) -> Result<f64> {
    let grid = f.grid().clone();
    let samples: Vec<Vec<f64>> = f
        .coefficient_arrays()
        .into_iter()
        .map(|c| {
            let s = SpectralScalarField::from_coefficients(&grid, c.to_vec()).expect("grid length");
            transform_backward(&s)
        })
        .collect();
    lq_norm_samples(&grid, &samples, q)
}
