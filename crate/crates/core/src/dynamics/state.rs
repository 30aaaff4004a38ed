use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::ModelSpec;
use crate::error::{Error, Result};
use crate::spectral::{
    random::{random_solenoidal, random_vector},
    sobolev_seminorm, transform_forward, Grid, SpectralScalarField, SpectralVectorField,
};

/// Velocity and microrotation at time `t`.
#[derive(Clone, Debug)]
pub struct State {
    pub t: f64,
    pub step: u64,
    pub u: SpectralVectorField,
    pub w: SpectralVectorField,
}

impl State {
    /// Checks shapes against `spec` and that `u` carries the
    /// divergence-free flag.
    pub fn new(t: f64, u: SpectralVectorField, w: SpectralVectorField, spec: &ModelSpec) -> Result<Self> {
        let s = State { t, step: 0, u, w };
        s.validate(spec)?;
        Ok(s)
    }

    pub fn zeros(grid: &Arc<Grid>, spec: &ModelSpec) -> Result<Self> {
        let u = SpectralVectorField::zeros(grid, grid.dim()).assume_divergence_free()?;
        State::new(0.0, u, SpectralVectorField::zeros(grid, spec.micro_components()), spec)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.u.grid()
    }

    pub fn validate(&self, spec: &ModelSpec) -> Result<()> {
        let grid = self.u.grid();
        if grid.dim() != spec.dim() {
            return Err(Error::invalid(format!(
                "model {} is {}-dimensional but the grid is {}-dimensional",
                spec.kind(),
                spec.dim(),
                grid.dim()
            )));
        }
        if self.w.grid() != grid {
            return Err(Error::GridMismatch);
        }
        if self.u.ncomp() != grid.dim() {
            return Err(Error::ShapeMismatch {
                expected: grid.dim(),
                actual: self.u.ncomp(),
            });
        }
        if self.w.ncomp() != spec.micro_components() {
            return Err(Error::ShapeMismatch {
                expected: spec.micro_components(),
                actual: self.w.ncomp(),
            });
        }
        if !self.u.is_divergence_free() {
            return Err(Error::NotDivergenceFree);
        }
        Ok(())
    }

    /// `‖u‖₂² + ‖w‖₂²`
    pub fn energy(&self) -> f64 {
        sobolev_seminorm(&self.u, 0.0).powi(2) + sobolev_seminorm(&self.w, 0.0).powi(2)
    }
}

/// Sharp spectral cutoff `χ_{|k| ≤ N}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GalerkinCutoff {
    pub n_cut: f64,
    pub active: bool,
}

impl GalerkinCutoff {
    pub fn inactive() -> Self {
        GalerkinCutoff {
            n_cut: f64::INFINITY,
            active: false,
        }
    }

    pub fn radius(n_cut: f64) -> Self {
        GalerkinCutoff { n_cut, active: true }
    }

    #[inline]
    pub fn keeps(&self, kmag2: f64) -> bool {
        !self.active || kmag2 <= self.n_cut * self.n_cut
    }
}

impl Default for GalerkinCutoff {
    fn default() -> Self {
        GalerkinCutoff::inactive()
    }
}

pub fn apply_cutoff(f: &SpectralScalarField, cutoff: &GalerkinCutoff) -> SpectralScalarField {
    if !cutoff.active {
        return f.clone();
    }
    let grid = f.grid().clone();
    f.map_modes(|i, c| if cutoff.keeps(grid.kmag2(i)) { c } else { Default::default() })
}

/// Componentwise cutoff; the divergence-free flag is preserved.
pub fn apply_cutoff_vec(v: &SpectralVectorField, cutoff: &GalerkinCutoff) -> SpectralVectorField {
    let flag = v.is_divergence_free();
    v.map_components(|c| apply_cutoff(c, cutoff)).with_divergence_flag(flag)
}

fn sample(grid: &Arc<Grid>, f: impl Fn([f64; 3]) -> f64) -> SpectralScalarField {
    let samples: Vec<f64> = (0..grid.len()).map(|i| f(grid.point(i))).collect();
    let mut s = transform_forward(grid, &samples).expect("sample count matches grid");
    s.zero_nyquist();
    s
}

/// Taylor-Green data.
///
/// 3D: `u = A(sin x cos y cos z, −cos x sin y cos z, 0)`,
/// `w = B(cos y sin z, cos z sin x, cos x sin y)`.
/// 2D: `u = A(sin x cos y, −cos x sin y)`, `w = B sin x sin y`.
pub fn taylor_green(grid: &Arc<Grid>, spec: &ModelSpec, a: f64, b: f64) -> Result<State> {
    let (u, w) = if grid.dim() == 3 {
        let u = vec![
            sample(grid, |p| a * p[0].sin() * p[1].cos() * p[2].cos()),
            sample(grid, |p| -a * p[0].cos() * p[1].sin() * p[2].cos()),
            SpectralScalarField::zeros(grid),
        ];
        let w = vec![
            sample(grid, |p| b * p[1].cos() * p[2].sin()),
            sample(grid, |p| b * p[2].cos() * p[0].sin()),
            sample(grid, |p| b * p[0].cos() * p[1].sin()),
        ];
        (u, w)
    } else {
        let u = vec![
            sample(grid, |p| a * p[0].sin() * p[1].cos()),
            sample(grid, |p| -a * p[0].cos() * p[1].sin()),
        ];
        (u, vec![sample(grid, |p| b * p[0].sin() * p[1].sin())])
    };
    let u = SpectralVectorField::from_components(u)?.assume_divergence_free()?;
    State::new(0.0, u, SpectralVectorField::from_components(w)?, spec)
}

/// Random band-limited data on `0 < |k| ≤ k_max` with spectral slope
/// `slope`, scaled so that the root-mean-square of `u` is `u_rms` and of `w`
/// is `w_rms`.
pub fn random_state(
    grid: &Arc<Grid>,
    spec: &ModelSpec,
    k_max: f64,
    slope: f64,
    u_rms: f64,
    w_rms: f64,
    seed: u64,
) -> Result<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_solenoidal(grid, k_max, slope, &mut rng);
    let w = random_vector(grid, spec.micro_components(), k_max, slope, &mut rng);
    let vol = grid.volume().sqrt();
    let rescale = |v: SpectralVectorField, target: f64| {
        let rms = sobolev_seminorm(&v, 0.0) / vol;
        if rms > 0.0 {
            v.scale(target / rms)
        } else {
            v
        }
    };
    State::new(0.0, rescale(u, u_rms), rescale(w, w_rms), spec)
}
