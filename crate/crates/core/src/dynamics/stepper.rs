use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::checkpoint::write_checkpoint;
use super::linear::{mode_size, ModeSymbols, PropagatorTable};
use super::model::ModelSpec;
use super::rhs::{cut_state, nonlinear_rhs, Tendency};
use super::state::{GalerkinCutoff, State};
use crate::error::{Error, Result};
use crate::spectral::{curl, leray_project, Grid, SpectralScalarField, SpectralVectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Half-step exact linear propagation, Heun step of the remaining terms,
    /// half-step linear propagation.
    Strang,
    /// Crank–Nicolson on dissipation, damping and grad-div; Heun
    /// predictor-corrector on coupling, advection and forcing.
    ImexCn,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strang" => Ok(Scheme::Strang),
            "imex_cn" => Ok(Scheme::ImexCn),
            _ => Err(Error::invalid(format!("unknown scheme `{s}`"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Strang => "strang",
            Scheme::ImexCn => "imex_cn",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepperConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    pub cfl_safety: f64,
    /// Include the advection terms; off only for linear verification runs.
    pub advection: bool,
}

impl StepperConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        StepperConfig {
            scheme: Scheme::Strang,
            dt,
            t_end,
            cfl_safety: 0.5,
            advection: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::invalid(format!("t_end must be ≥ 0, got {}", self.t_end)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::invalid(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        Ok(())
    }

    pub fn canonical(&self) -> String {
        format!(
            "scheme={};dt={:e};t_end={:e};cfl_safety={:e};advection={}",
            self.scheme, self.dt, self.t_end, self.cfl_safety, self.advection
        )
    }
}

/// Additive forcing `t ↦ (f_u, f_w)`; `f_u` is projected before use.
pub type Forcing = Arc<dyn Fn(f64) -> Result<Tendency> + Send + Sync>;

/// Advances states of one grid and model. Propagator tables are cached per
/// step size.
pub struct Stepper {
    grid: Arc<Grid>,
    spec: ModelSpec,
    cutoff: GalerkinCutoff,
    cfg: StepperConfig,
    forcing: Option<Forcing>,
    tables: Vec<(u64, Arc<PropagatorTable>)>,
    implicit: Option<ImplicitDiag>,
}

/// Per-mode diagonal parts for the implicit scheme.
struct ImplicitDiag {
    du: Vec<f64>,
    dw: Vec<f64>,
}

impl Stepper {
    pub fn new(grid: &Arc<Grid>, spec: &ModelSpec, cutoff: GalerkinCutoff, cfg: StepperConfig) -> Result<Self> {
        cfg.validate()?;
        if grid.dim() != spec.dim() {
            return Err(Error::invalid(format!(
                "model {} needs a {}-dimensional grid",
                spec.kind(),
                spec.dim()
            )));
        }
        Ok(Stepper {
            grid: grid.clone(),
            spec: spec.clone(),
            cutoff,
            cfg,
            forcing: None,
            tables: Vec::new(),
            implicit: None,
        })
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn cutoff(&self) -> &GalerkinCutoff {
        &self.cutoff
    }

    pub fn config(&self) -> &StepperConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// One step of the configured size.
    pub fn step(&mut self, state: &State) -> Result<State> {
        self.step_by(state, self.cfg.dt)
    }

    pub fn step_by(&mut self, state: &State, dt: f64) -> Result<State> {
        state.validate(&self.spec)?;
        if state.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let (u, w) = match self.cfg.scheme {
            Scheme::Strang => self.strang(state, dt)?,
            Scheme::ImexCn => self.imex(state, dt)?,
        };
        let mut next = State {
            t: state.t + dt,
            step: state.step + 1,
            u: leray_project(&u)?,
            w,
        };
        cut_state(&mut next, &self.cutoff);
        next.u.zero_nyquist();
        next.w.zero_nyquist();
        if !next.u.is_finite() {
            return Err(Error::NonFinite { t: next.t, field: "u" });
        }
        if !next.w.is_finite() {
            return Err(Error::NonFinite { t: next.t, field: "w" });
        }
        Ok(next)
    }

    fn table(&mut self, dt: f64) -> Result<Arc<PropagatorTable>> {
        let key = dt.to_bits();
        if let Some((_, t)) = self.tables.iter().find(|(k, _)| *k == key) {
            return Ok(t.clone());
        }
        let t = Arc::new(PropagatorTable::build(&self.grid, &self.spec, dt)?);
        if self.tables.len() >= 4 {
            self.tables.remove(0);
        }
        self.tables.push((key, t.clone()));
        Ok(t)
    }

    fn check_cfl(&self, t: f64, dt: f64, max_speed: f64) -> Result<()> {
        let limit = self.cfg.cfl_safety * self.grid.spacing() / max_speed;
        if max_speed > 0.0 && dt > limit {
            return Err(Error::Cfl {
                t,
                dt,
                limit,
                max_speed,
            });
        }
        Ok(())
    }

    /// Advection and forcing at time `t`; checks the CFL bound when asked.
    fn explicit_terms(&self, s: &State, t: f64, dt: f64, check: bool) -> Result<Tendency> {
        let mut out = if self.cfg.advection {
            let (nl, speed) = nonlinear_rhs(s, &self.cutoff)?;
            if check {
                self.check_cfl(s.t, dt, speed)?;
            }
            nl
        } else {
            Tendency {
                du: SpectralVectorField::zeros(&self.grid, self.grid.dim()).with_divergence_flag(true),
                dw: SpectralVectorField::zeros(&self.grid, self.spec.micro_components()),
            }
        };
        if let Some(f) = &self.forcing {
            let f = f(t)?;
            out.du = out.du.axpy(1.0, &leray_project(&f.du)?)?;
            out.dw = out.dw.axpy(1.0, &f.dw)?;
        }
        Ok(out)
    }

    fn strang(&mut self, state: &State, dt: f64) -> Result<(SpectralVectorField, SpectralVectorField)> {
        let half = self.table(0.5 * dt)?;
        let (u, w) = propagate(&half, &state.u, &state.w)?;
        let s0 = State { u, w, ..state.clone() };
        let k1 = self.explicit_terms(&s0, state.t, dt, true)?;
        let s1 = State {
            u: s0.u.axpy(dt, &k1.du)?,
            w: s0.w.axpy(dt, &k1.dw)?,
            ..state.clone()
        };
        let k2 = self.explicit_terms(&s1, state.t + dt, dt, false)?;
        let u = s0.u.axpy(0.5 * dt, &k1.du)?.axpy(0.5 * dt, &k2.du)?;
        let w = s0.w.axpy(0.5 * dt, &k1.dw)?.axpy(0.5 * dt, &k2.dw)?;
        propagate(&half, &u, &w)
    }

    fn implicit_diag(&mut self) -> Result<&ImplicitDiag> {
        if self.implicit.is_none() {
            let sym = ModeSymbols::new(&self.spec)?;
            let damping = self.spec.coefficients().damping;
            let g = &self.grid;
            self.implicit = Some(ImplicitDiag {
                du: (0..g.len()).map(|i| sym.u.eval(g.kmag(i))).collect(),
                dw: (0..g.len()).map(|i| sym.w.eval(g.kmag(i)) + damping).collect(),
            });
        }
        Ok(self.implicit.as_ref().expect("just built"))
    }

    /// Coupling terms plus advection and forcing.
    fn imex_explicit(&self, s: &State, t: f64, dt: f64, check: bool) -> Result<Tendency> {
        let c = self.spec.coefficients();
        let mut e = self.explicit_terms(s, t, dt, check)?;
        e.du = e.du.axpy(c.coupling_u, &leray_project(&curl(&s.w)?)?)?;
        e.dw = e.dw.axpy(c.coupling_w, &curl(&s.u)?)?;
        Ok(e)
    }

    fn imex(&mut self, state: &State, dt: f64) -> Result<(SpectralVectorField, SpectralVectorField)> {
        let h = 0.5 * dt;
        let e0 = self.imex_explicit(state, state.t, dt, true)?;
        let mu = self.spec.coefficients().graddiv;
        let grid = self.grid.clone();
        let diag = self.implicit_diag()?;
        let (eu, ew) = explicit_half(&grid, diag, mu, h, &state.u, &state.w);
        let pred_u = implicit_solve_u(diag, h, &eu.axpy(dt, &e0.du)?);
        let pred_w = implicit_solve_w(&grid, diag, mu, h, &ew.axpy(dt, &e0.dw)?);
        let pred = State {
            u: leray_project(&pred_u)?,
            w: pred_w,
            ..state.clone()
        };
        let e1 = self.imex_explicit(&pred, state.t + dt, dt, false)?;
        let diag = self.implicit_diag()?;
        let bu = eu.axpy(h, &e0.du)?.axpy(h, &e1.du)?;
        let bw = ew.axpy(h, &e0.dw)?.axpy(h, &e1.dw)?;
        Ok((implicit_solve_u(diag, h, &bu), implicit_solve_w(&grid, diag, mu, h, &bw)))
    }
}

/// Apply the per-mode propagator table to `(u, w)`.
fn propagate(
    table: &PropagatorTable,
    u: &SpectralVectorField,
    w: &SpectralVectorField,
) -> Result<(SpectralVectorField, SpectralVectorField)> {
    let grid = u.grid().clone();
    let s = table.size;
    debug_assert_eq!(s, mode_size(grid.dim()));
    let src: Vec<&[Complex64]> = u
        .components()
        .iter()
        .chain(w.components())
        .map(|c| c.coefficients())
        .collect();
    let out: Vec<[Complex64; 6]> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let b = table.block(i);
            let mut o = [Complex64::default(); 6];
            for (r, slot) in o.iter_mut().enumerate().take(s) {
                let row = &b[r * s..(r + 1) * s];
                let mut acc = Complex64::default();
                for (c, m) in row.iter().enumerate() {
                    acc += m * src[c][i];
                }
                *slot = acc;
            }
            o
        })
        .collect();
    let comps: Vec<SpectralScalarField> = (0..s)
        .map(|r| {
            let coef = out.iter().map(|o| o[r]).collect();
            SpectralScalarField::from_coefficients(&grid, coef)
        })
        .collect::<Result<_>>()?;
    let mut comps = comps.into_iter();
    let du = grid.dim();
    let u = SpectralVectorField::from_components(comps.by_ref().take(du).collect())?.with_divergence_flag(true);
    let w = SpectralVectorField::from_components(comps.collect())?;
    Ok((u, w))
}

/// `(I + h A)(u, w)` where `A` is the implicit part.
fn explicit_half(
    grid: &Grid,
    diag: &ImplicitDiag,
    mu: f64,
    h: f64,
    u: &SpectralVectorField,
    w: &SpectralVectorField,
) -> (SpectralVectorField, SpectralVectorField) {
    let flag = u.is_divergence_free();
    let u = u
        .map_components(|c| c.map_modes(|i, z| z * (1.0 - h * diag.du[i])))
        .with_divergence_flag(flag);
    let mut comps: Vec<Vec<Complex64>> = w.components().iter().map(|c| c.coefficients().to_vec()).collect();
    for i in 0..grid.len() {
        let kd = grid.derivative_wavevector(i);
        let dot: Complex64 = if comps.len() == 3 {
            (0..3).map(|a| comps[a][i] * kd[a]).sum()
        } else {
            Complex64::default()
        };
        for (a, c) in comps.iter_mut().enumerate() {
            c[i] = c[i] * (1.0 - h * diag.dw[i]) - dot * (h * mu * kd[a]);
        }
    }
    (u, rebuild(w.grid(), comps))
}

fn implicit_solve_u(diag: &ImplicitDiag, h: f64, b: &SpectralVectorField) -> SpectralVectorField {
    let flag = b.is_divergence_free();
    b.map_components(|c| c.map_modes(|i, z| z / (1.0 + h * diag.du[i])))
        .with_divergence_flag(flag)
}

/// Solve `(a I + hμ kd kdᵀ) x = b` per mode with `a = 1 + h·dw`.
fn implicit_solve_w(grid: &Grid, diag: &ImplicitDiag, mu: f64, h: f64, b: &SpectralVectorField) -> SpectralVectorField {
    let mut comps: Vec<Vec<Complex64>> = b.components().iter().map(|c| c.coefficients().to_vec()).collect();
    for i in 0..grid.len() {
        let a = 1.0 + h * diag.dw[i];
        if comps.len() == 3 && mu != 0.0 {
            let kd = grid.derivative_wavevector(i);
            let kk: f64 = kd.iter().map(|x| x * x).sum();
            let dot: Complex64 = (0..3).map(|j| comps[j][i] * kd[j]).sum();
            let s = dot * (h * mu / (a + h * mu * kk));
            for (j, c) in comps.iter_mut().enumerate() {
                c[i] = (c[i] - s * kd[j]) / a;
            }
        } else {
            for c in comps.iter_mut() {
                c[i] /= a;
            }
        }
    }
    rebuild(b.grid(), comps)
}

fn rebuild(grid: &Arc<Grid>, comps: Vec<Vec<Complex64>>) -> SpectralVectorField {
    let comps = comps
        .into_iter()
        .map(|c| SpectralScalarField::from_coefficients(grid, c).expect("grid length"))
        .collect();
    SpectralVectorField::from_components(comps).expect("shared grid")
}

/// Probe and checkpoint cadence for [`simulate`].
#[derive(Clone, Debug, Default)]
pub struct RunControl {
    /// Record every this many steps (0 means only first and last).
    pub probe_cadence: u64,
    /// Checkpoint every this many steps (0 disables).
    pub checkpoint_cadence: u64,
    pub checkpoint_dir: Option<PathBuf>,
}

impl RunControl {
    pub fn every_step() -> Self {
        RunControl {
            probe_cadence: 1,
            ..Default::default()
        }
    }
}

/// Step from `initial.t` to the configured `t_end`, calling `probe` on the
/// initial state, at the probe cadence and on the final state. The last step
/// is shortened to land on `t_end`.
pub fn simulate(
    initial: State,
    stepper: &mut Stepper,
    control: &RunControl,
    probe: &mut dyn FnMut(&State) -> Result<()>,
) -> Result<State> {
    let t_end = stepper.config().t_end;
    let dt = stepper.config().dt;
    let mut state = initial;
    state.validate(stepper.spec())?;
    probe(&state)?;
    loop {
        let remaining = t_end - state.t;
        if remaining <= 1e-9 * dt {
            break;
        }
        let h = if remaining < dt * (1.0 + 1e-9) { remaining } else { dt };
        let next = stepper.step_by(&state, h)?;
        let done = t_end - next.t <= 1e-9 * dt;
        if done || (control.probe_cadence > 0 && next.step % control.probe_cadence == 0) {
            probe(&next)?;
        }
        if control.checkpoint_cadence > 0 && next.step % control.checkpoint_cadence == 0 {
            if let Some(dir) = &control.checkpoint_dir {
                let path = dir.join(format!("checkpoint_{:08}.mpck", next.step));
                let mut out = BufWriter::new(File::create(path)?);
                write_checkpoint(&mut out, &next, stepper.spec(), stepper.config())?;
            }
        }
        state = next;
    }
    Ok(state)
}
