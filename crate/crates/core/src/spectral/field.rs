use std::sync::Arc;

use num_complex::Complex64;

use super::fft::fft_nd;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Relative tolerance for the divergence-free flag and for Hermitian drift.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-12;
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Fourier coefficients of one scalar function on the torus.
///
/// `coef[idx]` multiplies `e^{i k·x}` where `k = grid.wavevector(idx)`; the
/// forward transform carries `1/n^dim` so that `coef` at `k = 0` is the
/// spatial mean.
#[derive(Clone, Debug)]
pub struct SpectralScalarField {
    grid: Arc<Grid>,
    coef: Vec<Complex64>,
}

impl SpectralScalarField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        SpectralScalarField {
            grid: grid.clone(),
            coef: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_coefficients(grid: &Arc<Grid>, coef: Vec<Complex64>) -> Result<Self> {
        if coef.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: coef.len(),
            });
        }
        Ok(SpectralScalarField {
            grid: grid.clone(),
            coef,
        })
    }

    /// A single real Fourier mode `amplitude · cos(k·x + phase)`.
    pub fn single_mode(grid: &Arc<Grid>, k: [i32; 3], amplitude: f64, phase: f64) -> Result<Self> {
        let mut f = Self::zeros(grid);
        let idx = grid
            .index_of(k)
            .ok_or_else(|| Error::invalid(format!("wavevector {k:?} not on grid")))?;
        let neg = grid.neg_index(idx);
        let c = Complex64::from_polar(amplitude, phase);
        if neg == idx {
            f.coef[idx] = Complex64::new(c.re, 0.0);
        } else {
            f.coef[idx] = 0.5 * c;
            f.coef[neg] = 0.5 * c.conj();
        }
        Ok(f)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coef
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coef
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coef
    }

    pub fn coef_at(&self, k: [i32; 3]) -> Option<Complex64> {
        self.grid.index_of(k).map(|i| self.coef[i])
    }

    pub fn max_abs(&self) -> f64 {
        self.coef.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn map_modes(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        let coef = self.coef.iter().enumerate().map(|(i, &c)| f(i, c)).collect();
        SpectralScalarField {
            grid: self.grid.clone(),
            coef,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_modes(|_, c| c * s)
    }

    /// `self + a · other`
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let coef = self
            .coef
            .iter()
            .zip(&other.coef)
            .map(|(x, y)| x + y * a)
            .collect();
        Ok(SpectralScalarField {
            grid: self.grid.clone(),
            coef,
        })
    }

    /// Largest `|coef(k) − conj(coef(−k))|`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coef.len())
            .map(|i| (self.coef[i] - self.coef[self.grid.neg_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Replace each coefficient by the average of itself and the conjugate
    /// of its partner. Fails if the two differed by more than the tolerance.
    pub fn enforce_hermitian(&mut self) -> Result<()> {
        let scale = self.max_abs();
        let tolerance = HERMITIAN_TOLERANCE * scale;
        let mut drift: f64 = 0.0;
        let old = self.coef.clone();
        for (i, c) in self.coef.iter_mut().enumerate() {
            let partner = old[self.grid.neg_index(i)].conj();
            drift = drift.max((old[i] - partner).norm());
            *c = 0.5 * (old[i] + partner);
        }
        if drift > tolerance && drift > f64::MIN_POSITIVE {
            return Err(Error::HermitianDrift { drift, tolerance });
        }
        Ok(())
    }

    /// True when every Nyquist coefficient vanishes.
    pub fn is_band_limited(&self) -> bool {
        (0..self.coef.len()).all(|i| !self.grid.is_nyquist(i) || self.coef[i] == Complex64::default())
    }

    pub fn zero_nyquist(&mut self) {
        for i in 0..self.coef.len() {
            if self.grid.is_nyquist(i) {
                self.coef[i] = Complex64::default();
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coef.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Forward transform of real physical samples (row-major, `n^dim` points at
/// `x = 2π j / n`).
pub fn transform_forward(grid: &Arc<Grid>, samples: &[f64]) -> Result<SpectralScalarField> {
    if samples.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            expected: grid.len(),
            actual: samples.len(),
        });
    }
    let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_nd(&mut data, grid.n(), grid.dim(), false);
    let inv = 1.0 / grid.len() as f64;
    for c in &mut data {
        *c *= inv;
    }
    Ok(SpectralScalarField {
        grid: grid.clone(),
        coef: data,
    })
}

/// Inverse transform; returns the real part of the synthesized samples.
pub fn transform_backward(f: &SpectralScalarField) -> Vec<f64> {
    let mut data = f.coef.clone();
    fft_nd(&mut data, f.grid.n(), f.grid.dim(), true);
    data.into_iter().map(|c| c.re).collect()
}

/// Vector-valued field: `dim` components for velocity, or any other count
/// (the 2D microrotation is a single out-of-plane component).
#[derive(Clone, Debug)]
pub struct SpectralVectorField {
    grid: Arc<Grid>,
    components: Vec<SpectralScalarField>,
    divergence_free: bool,
}

impl SpectralVectorField {
    pub fn zeros(grid: &Arc<Grid>, ncomp: usize) -> Self {
        SpectralVectorField {
            grid: grid.clone(),
            components: (0..ncomp).map(|_| SpectralScalarField::zeros(grid)).collect(),
            divergence_free: false,
        }
    }

    pub fn from_components(components: Vec<SpectralScalarField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::invalid("vector field needs at least one component"))?;
        let grid = first.grid.clone();
        if components.iter().any(|c| *c.grid != *grid) {
            return Err(Error::GridMismatch);
        }
        Ok(SpectralVectorField {
            grid,
            components,
            divergence_free: false,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &SpectralScalarField {
        &self.components[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut SpectralScalarField {
        self.divergence_free = false;
        &mut self.components[i]
    }

    pub fn components(&self) -> &[SpectralScalarField] {
        &self.components
    }

    pub fn into_components(self) -> Vec<SpectralScalarField> {
        self.components
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    /// `max_k |k · coef(k)|` over the lattice.
    pub fn max_divergence(&self) -> f64 {
        if self.ncomp() != self.grid.dim() {
            return f64::INFINITY;
        }
        (0..self.grid.len())
            .map(|i| {
                let k = self.grid.wavevector(i);
                let mut s = Complex64::default();
                for (a, c) in self.components.iter().enumerate() {
                    s += c.coef[i] * k[a] as f64;
                }
                s.norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// Flag the field divergence-free after checking
    /// `max |k·coef| ≤ 1e-12 · max |coef|`.
    pub fn assume_divergence_free(mut self) -> Result<Self> {
        let scale = self.max_abs();
        if self.max_divergence() > DIVERGENCE_TOLERANCE * scale {
            return Err(Error::NotDivergenceFree);
        }
        self.divergence_free = true;
        Ok(self)
    }

    pub(crate) fn with_divergence_flag(mut self, flag: bool) -> Self {
        self.divergence_free = flag;
        self
    }

    pub fn map_components(&self, f: impl Fn(&SpectralScalarField) -> SpectralScalarField) -> Self {
        SpectralVectorField {
            grid: self.grid.clone(),
            components: self.components.iter().map(f).collect(),
            divergence_free: false,
        }
    }

    /// Scaling preserves solenoidality.
    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.map_components(|c| c.scale(s));
        out.divergence_free = self.divergence_free;
        out
    }

    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        if self.ncomp() != other.ncomp() {
            return Err(Error::ShapeMismatch {
                expected: self.ncomp(),
                actual: other.ncomp(),
            });
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(x, y)| x.axpy(a, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralVectorField {
            grid: self.grid.clone(),
            components,
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    pub fn enforce_hermitian(&mut self) -> Result<()> {
        for c in &mut self.components {
            c.enforce_hermitian()?;
        }
        Ok(())
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.components.iter().map(|c| c.hermitian_defect()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    pub fn zero_nyquist(&mut self) {
        for c in &mut self.components {
            c.zero_nyquist();
        }
    }
}
