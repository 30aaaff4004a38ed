use serde::Serialize;

use crate::dynamics::{ModelSpec, State};
use crate::error::{Error, Result};
use crate::spectral::{curl, divergence, inner_product_l2, sobolev_seminorm, weighted_square_sum};

/// Every term of the L² balance at one time.
///
/// `residual = d/dt(kinetic + micro) + dissipation_u + dissipation_w +
/// damping + graddiv − cross`, available at interior records only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyRecord {
    pub t: f64,
    pub kinetic: f64,
    pub micro: f64,
    pub dissipation_u: f64,
    pub dissipation_w: f64,
    pub damping: f64,
    pub graddiv: f64,
    pub cross: f64,
    /// `∫ (curl w)·u`
    pub cross_wu: f64,
    /// `∫ (curl u)·w`
    pub cross_uw: f64,
    pub residual: Option<f64>,
}

impl EnergyRecord {
    pub fn from_state(state: &State, spec: &ModelSpec) -> Result<Self> {
        state.validate(spec)?;
        let c = spec.coefficients();
        let grid = state.grid().clone();
        let su = c.velocity_symbol()?;
        let sw = c.micro_symbol()?;
        let l2u = sobolev_seminorm(&state.u, 0.0);
        let l2w = sobolev_seminorm(&state.w, 0.0);
        let cross_wu = inner_product_l2(&curl(&state.w)?, &state.u)?;
        let cross_uw = inner_product_l2(&curl(&state.u)?, &state.w)?;
        let graddiv = if c.graddiv != 0.0 && spec.dim() == 3 {
            c.graddiv * sobolev_seminorm(&divergence(&state.w)?, 0.0).powi(2)
        } else {
            0.0
        };
        Ok(EnergyRecord {
            t: state.t,
            kinetic: 0.5 * l2u * l2u,
            micro: 0.5 * l2w * l2w,
            dissipation_u: weighted_square_sum(&state.u, |i| su.eval(grid.kmag(i))),
            dissipation_w: weighted_square_sum(&state.w, |i| sw.eval(grid.kmag(i))),
            damping: c.damping * l2w * l2w,
            graddiv,
            cross: c.coupling_u * cross_wu + c.coupling_w * cross_uw,
            cross_wu,
            cross_uw,
            residual: None,
        })
    }

    pub fn energy(&self) -> f64 {
        self.kinetic + self.micro
    }

    /// Everything on the left of the balance except the time derivative.
    pub fn net_loss(&self) -> f64 {
        self.dissipation_u + self.dissipation_w + self.damping + self.graddiv - self.cross
    }
}

/// Fill residuals at interior records by the three-point derivative on a
/// possibly non-uniform time grid.
pub fn energy_budget(records: &[EnergyRecord]) -> Result<Vec<EnergyRecord>> {
    if records.len() < 3 {
        return Err(Error::InsufficientRecords {
            needed: 3,
            got: records.len(),
        });
    }
    let mut out = records.to_vec();
    for i in 1..records.len() - 1 {
        let (a, b, c) = (&records[i - 1], &records[i], &records[i + 1]);
        let h0 = b.t - a.t;
        let h1 = c.t - b.t;
        if !(h0 > 0.0 && h1 > 0.0) {
            return Err(Error::invalid("records must have strictly increasing times"));
        }
        let de = -h1 / (h0 * (h0 + h1)) * a.energy() + (h1 - h0) / (h0 * h1) * b.energy()
            + h0 / (h1 * (h0 + h1)) * c.energy();
        out[i].residual = Some(de + b.net_loss());
    }
    Ok(out)
}

/// `∫ |residual| dt` over the interior records by the trapezoid rule.
pub fn integrated_residual(records: &[EnergyRecord]) -> f64 {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| r.residual.map(|x| (r.t, x.abs())))
        .collect();
    pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
}
