//! Diagonal Fourier-multiplier operators: radial symbols, fractional powers of
//! the Laplacian, first-order differential operators and the Leray projector.

use num_complex::Complex64;

use super::field::{SpectralScalarField, SpectralVectorField};
use super::symbol::{radial_power, RadialSymbol};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `coef_out(k) = m(|k|) · coef_in(k)`.
pub fn apply_radial_multiplier(f: &SpectralScalarField, m: &RadialSymbol) -> SpectralScalarField {
    let grid = f.grid().clone();
    f.map_modes(|i, c| c * m.eval(grid.kmag(i)))
}

pub fn apply_radial_multiplier_vec(v: &SpectralVectorField, m: &RadialSymbol) -> SpectralVectorField {
    let mut out = v.map_components(|c| apply_radial_multiplier(c, m));
    out = out.with_divergence_flag(v.is_divergence_free());
    out
}

/// `(-Δ)^ρ f`, symbol `|k|^{2ρ}`. `ρ = 0` is the identity.
pub fn fractional_laplacian(f: &SpectralScalarField, rho: f64) -> Result<SpectralScalarField> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::invalid(format!("fractional power must be finite and ≥ 0, got {rho}")));
    }
    if rho == 0.0 {
        return Ok(f.clone());
    }
    let grid = f.grid().clone();
    Ok(f.map_modes(|i, c| c * radial_power(grid.kmag2(i), rho)))
}

pub fn fractional_laplacian_vec(v: &SpectralVectorField, rho: f64) -> Result<SpectralVectorField> {
    let comps = v
        .components()
        .iter()
        .map(|c| fractional_laplacian(c, rho))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralVectorField::from_components(comps)?.with_divergence_flag(v.is_divergence_free()))
}

/// `∇f`, coefficient `i k coef`.
pub fn gradient(f: &SpectralScalarField) -> SpectralVectorField {
    let grid = f.grid().clone();
    let comps = (0..grid.dim())
        .map(|a| f.map_modes(|i, c| I * c * grid.derivative_wavevector(i)[a]))
        .collect();
    SpectralVectorField::from_components(comps).expect("components share a grid")
}

/// Partial derivative along `axis`.
pub fn partial(f: &SpectralScalarField, axis: usize) -> SpectralScalarField {
    let grid = f.grid().clone();
    f.map_modes(|i, c| I * c * grid.derivative_wavevector(i)[axis])
}

fn require_ncomp(v: &SpectralVectorField, n: usize) -> Result<()> {
    if v.ncomp() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            actual: v.ncomp(),
        });
    }
    Ok(())
}

/// `∇·v`, coefficient `i k·coef`.
pub fn divergence(v: &SpectralVectorField) -> Result<SpectralScalarField> {
    let grid = v.grid().clone();
    require_ncomp(v, grid.dim())?;
    let mut out = SpectralScalarField::zeros(&grid);
    let dst = out.coefficients_mut();
    for (a, comp) in v.components().iter().enumerate() {
        for (i, (o, c)) in dst.iter_mut().zip(comp.coefficients()).enumerate() {
            *o += I * c * grid.derivative_wavevector(i)[a];
        }
    }
    Ok(out)
}

/// Curl with coefficient `i k × coef`.
///
/// * 3D, three components: the usual curl.
/// * 2D, two components (in-plane field): the scalar `∂₁v₂ − ∂₂v₁`.
/// * 2D, one component (out-of-plane scalar `w`): the in-plane field
///   `(∂₂w, −∂₁w)`, i.e. the curl of `(0, 0, w)`.
pub fn curl(v: &SpectralVectorField) -> Result<SpectralVectorField> {
    let grid = v.grid().clone();
    let len = grid.len();
    let mk = |f: &dyn Fn(usize) -> Complex64| -> SpectralScalarField {
        let coef = (0..len).map(f).collect();
        SpectralScalarField::from_coefficients(&grid, coef).expect("length matches grid")
    };
    let comps = match (grid.dim(), v.ncomp()) {
        (3, 3) => {
            let (c1, c2, c3) = (
                v.component(0).coefficients(),
                v.component(1).coefficients(),
                v.component(2).coefficients(),
            );
            let kd = |i| grid.derivative_wavevector(i);
            vec![
                mk(&|i| I * (c3[i] * kd(i)[1] - c2[i] * kd(i)[2])),
                mk(&|i| I * (c1[i] * kd(i)[2] - c3[i] * kd(i)[0])),
                mk(&|i| I * (c2[i] * kd(i)[0] - c1[i] * kd(i)[1])),
            ]
        }
        (2, 2) => {
            let (c1, c2) = (v.component(0).coefficients(), v.component(1).coefficients());
            let kd = |i| grid.derivative_wavevector(i);
            vec![mk(&|i| I * (c2[i] * kd(i)[0] - c1[i] * kd(i)[1]))]
        }
        (2, 1) => {
            let c = v.component(0).coefficients();
            let kd = |i| grid.derivative_wavevector(i);
            vec![mk(&|i| I * c[i] * kd(i)[1]), mk(&|i| -I * c[i] * kd(i)[0])]
        }
        (d, m) => {
            return Err(Error::invalid(format!(
                "curl undefined for {m} components in {d}D"
            )))
        }
    };
    SpectralVectorField::from_components(comps)
}

/// 2D `∇^⊥ f = (−∂₂f, ∂₁f)`.
pub fn perp_gradient(f: &SpectralScalarField) -> Result<SpectralVectorField> {
    if f.grid().dim() != 2 {
        return Err(Error::invalid("perp gradient is only defined in 2D"));
    }
    let d2 = partial(f, 1).scale(-1.0);
    let d1 = partial(f, 0);
    SpectralVectorField::from_components(vec![d2, d1])
}

/// `∇(∇·v)`, coefficient `−k (k·coef)`.
pub fn grad_div(v: &SpectralVectorField) -> Result<SpectralVectorField> {
    Ok(gradient(&divergence(v)?))
}

/// Leray projection: `coef − k (k·coef)/|k|²` for `k ≠ 0`, zero mode kept.
pub fn leray_project(v: &SpectralVectorField) -> Result<SpectralVectorField> {
    let grid = v.grid().clone();
    let dim = grid.dim();
    require_ncomp(v, dim)?;
    let mut out: Vec<Vec<Complex64>> = v
        .components()
        .iter()
        .map(|c| c.coefficients().to_vec())
        .collect();
    for i in 1..grid.len() {
        let k = grid.wavevector(i);
        let k2 = grid.kmag2(i);
        let mut dot = Complex64::default();
        for (a, comp) in out.iter().enumerate() {
            dot += comp[i] * k[a] as f64;
        }
        let s = dot / k2;
        for (a, comp) in out.iter_mut().enumerate() {
            comp[i] -= s * k[a] as f64;
        }
    }
    let comps = out
        .into_iter()
        .map(|c| SpectralScalarField::from_coefficients(&grid, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralVectorField::from_components(comps)?.with_divergence_flag(true))
}
