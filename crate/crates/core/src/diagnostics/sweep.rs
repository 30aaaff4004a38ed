//! Exploratory scans over the dissipation exponents. The table records what
//! each run did; it does not classify cells as regular or singular.

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use super::monitor::{default_sigmas, NormSeries};
use crate::dynamics::{simulate, GalerkinCutoff, ModelKind, ModelSpec, PhysicalParams, RunControl, State, Stepper, StepperConfig};
use crate::error::{Error, Result};

/// Everything shared by the cells of a sweep.
#[derive(Clone, Debug)]
pub struct SweepBase {
    pub kind: ModelKind,
    pub params: PhysicalParams,
    pub initial: State,
    pub cutoff: GalerkinCutoff,
    pub stepper: StepperConfig,
    pub probe_cadence: u64,
    /// Sobolev index of the growth factor.
    pub s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepCell {
    pub alpha: f64,
    pub beta: f64,
    /// `"ok"` or `"aborted"`
    pub status: String,
    pub message: String,
    pub t_reached: f64,
    pub growth: f64,
    pub int_grad_u_inf: f64,
    pub int_w_inf_sq: f64,
}

/// Remove repeated `(α, β)` pairs, keeping first occurrences.
pub fn dedup_cells(cells: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
    for &c in cells {
        if out.iter().any(|o| o.0.to_bits() == c.0.to_bits() && o.1.to_bits() == c.1.to_bits()) {
            warn!("duplicate sweep cell (alpha = {}, beta = {}) skipped", c.0, c.1);
        } else {
            out.push(c);
        }
    }
    out
}

fn run_cell(base: &SweepBase, alpha: f64, beta: f64) -> SweepCell {
    let mut series = NormSeries::new(default_sigmas(alpha, beta, base.s), base.s);
    let mut t_reached = base.initial.t;
    let result = (|| -> Result<()> {
        let spec = ModelSpec::new(
            base.kind,
            PhysicalParams {
                alpha,
                beta,
                ..base.params.clone()
            },
        )?;
        let mut stepper = Stepper::new(base.initial.grid(), &spec, base.cutoff, base.stepper.clone())?;
        let ctl = RunControl {
            probe_cadence: base.probe_cadence,
            ..Default::default()
        };
        simulate(base.initial.clone(), &mut stepper, &ctl, &mut |s| {
            t_reached = s.t;
            series.push(s);
            Ok(())
        })?;
        Ok(())
    })();
    let (status, message) = match result {
        Ok(()) => ("ok", String::new()),
        Err(e) => ("aborted", e.to_string()),
    };
    SweepCell {
        alpha,
        beta,
        status: status.into(),
        message,
        t_reached,
        growth: series.hs_growth(),
        int_grad_u_inf: series.integral_grad_u().last().copied().unwrap_or(0.0),
        int_w_inf_sq: series.integral_w_sq().last().copied().unwrap_or(0.0),
    }
}

/// Run every distinct cell. Failing cells are reported in the table, never
/// as an error; the only error is an empty cell list.
pub fn threshold_sweep(cells: &[(f64, f64)], base: &SweepBase) -> Result<Vec<SweepCell>> {
    let cells = dedup_cells(cells);
    if cells.is_empty() {
        return Err(Error::invalid("sweep needs at least one (alpha, beta) cell"));
    }
    Ok(cells.par_iter().map(|&(a, b)| run_cell(base, a, b)).collect())
}
