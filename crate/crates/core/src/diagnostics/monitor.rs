use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::State;
use crate::spectral::{partial, sobolev_norm, sobolev_seminorm, to_physical_on, SpectralVectorField};

/// Norms of one state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormRecord {
    pub t: f64,
    /// `‖Λ^σ u‖₂` in the order of the configured exponents.
    pub lambda_u: Vec<f64>,
    pub lambda_w: Vec<f64>,
    pub grad_u_inf: f64,
    pub w_inf: f64,
    /// `‖(u, w)‖_{H^s}`
    pub hs: f64,
}

/// Default exponents `0, 5/4, α+β−1, ρ, 3/2, s`, where `ρ` is the midpoint
/// of `(9/4 − (α+β), 1 + β)`.
pub fn default_sigmas(alpha: f64, beta: f64, s: f64) -> Vec<f64> {
    let rho = 0.5 * ((2.25 - (alpha + beta)) + (1.0 + beta));
    vec![0.0, 1.25, alpha + beta - 1.0, rho, 1.5, s]
}

/// Max over a refined lattice of the pointwise Euclidean magnitude.
fn sup_norm(fields: &[&crate::spectral::SpectralScalarField], m: usize) -> f64 {
    let samples: Vec<Vec<f64>> = fields.par_iter().map(|f| to_physical_on(f, m)).collect();
    let npts = samples.first().map_or(0, |s| s.len());
    (0..npts)
        .map(|p| samples.iter().map(|s| s[p] * s[p]).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// `‖∇v‖_∞` (Frobenius magnitude) on a 2n lattice.
pub fn grad_sup(v: &SpectralVectorField) -> f64 {
    let dim = v.grid().dim();
    let parts: Vec<_> = v
        .components()
        .iter()
        .flat_map(|c| (0..dim).map(move |a| partial(c, a)))
        .collect();
    let refs: Vec<_> = parts.iter().collect();
    sup_norm(&refs, 2 * v.grid().n())
}

/// `‖v‖_∞` on a 2n lattice.
pub fn field_sup(v: &SpectralVectorField) -> f64 {
    let refs: Vec<_> = v.components().iter().collect();
    sup_norm(&refs, 2 * v.grid().n())
}

pub fn monitor_norms(state: &State, sigmas: &[f64], s: f64) -> NormRecord {
    NormRecord {
        t: state.t,
        lambda_u: sigmas.iter().map(|&x| sobolev_seminorm(&state.u, x)).collect(),
        lambda_w: sigmas.iter().map(|&x| sobolev_seminorm(&state.w, x)).collect(),
        grad_u_inf: grad_sup(&state.u),
        w_inf: field_sup(&state.w),
        hs: (sobolev_norm(&state.u, s).powi(2) + sobolev_norm(&state.w, s).powi(2)).sqrt(),
    }
}

/// Time series of [`NormRecord`]s with running trapezoid integrals of
/// `‖∇u‖_∞` and `‖w‖_∞²`.
#[derive(Clone, Debug, Serialize)]
pub struct NormSeries {
    sigmas: Vec<f64>,
    s: f64,
    records: Vec<NormRecord>,
    int_grad_u: Vec<f64>,
    int_w_sq: Vec<f64>,
}

impl NormSeries {
    pub fn new(sigmas: Vec<f64>, s: f64) -> Self {
        NormSeries {
            sigmas,
            s,
            records: Vec::new(),
            int_grad_u: Vec::new(),
            int_w_sq: Vec::new(),
        }
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn records(&self) -> &[NormRecord] {
        &self.records
    }

    pub fn push(&mut self, state: &State) -> &NormRecord {
        let r = monitor_norms(state, &self.sigmas, self.s);
        self.push_record(r)
    }

    pub fn push_record(&mut self, r: NormRecord) -> &NormRecord {
        let (a, b) = match self.records.last() {
            Some(prev) => {
                let h = r.t - prev.t;
                (
                    self.int_grad_u.last().unwrap() + 0.5 * h * (prev.grad_u_inf + r.grad_u_inf),
                    self.int_w_sq.last().unwrap() + 0.5 * h * (prev.w_inf.powi(2) + r.w_inf.powi(2)),
                )
            }
            None => (0.0, 0.0),
        };
        self.int_grad_u.push(a);
        self.int_w_sq.push(b);
        self.records.push(r);
        self.records.last().unwrap()
    }

    /// `∫₀^t ‖∇u‖_∞` at each record.
    pub fn integral_grad_u(&self) -> &[f64] {
        &self.int_grad_u
    }

    /// `∫₀^t ‖w‖_∞²` at each record.
    pub fn integral_w_sq(&self) -> &[f64] {
        &self.int_w_sq
    }

    /// `sup_t ‖(u, w)‖_{H^s} / ‖(u₀, w₀)‖_{H^s}`; 1 for a zero start.
    pub fn hs_growth(&self) -> f64 {
        let Some(first) = self.records.first() else { return 1.0 };
        let sup = self.records.iter().map(|r| r.hs).fold(0.0, f64::max);
        if first.hs > 0.0 {
            sup / first.hs
        } else if sup == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    }
}

/// Series whose supremum exceeds `threshold ×` their initial value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub threshold: f64,
    pub bounded: bool,
    pub violations: Vec<String>,
}

pub fn check_bounded(series: &NormSeries, threshold: f64) -> BoundednessReport {
    let mut violations = Vec::new();
    let recs = series.records();
    if let Some(first) = recs.first() {
        let mut check = |name: String, get: &dyn Fn(&NormRecord) -> f64| {
            let init = get(first);
            let sup = recs.iter().map(get).fold(0.0, f64::max);
            if !sup.is_finite() || sup > threshold * init {
                violations.push(format!("{name}: sup {sup:.6e} > {threshold} × {init:.6e}"));
            }
        };
        for (i, sigma) in series.sigmas().iter().enumerate() {
            check(format!("lambda_u[{sigma}]"), &|r| r.lambda_u[i]);
            check(format!("lambda_w[{sigma}]"), &|r| r.lambda_w[i]);
        }
        check(format!("hs[{}]", series.s()), &|r| r.hs);
    }
    BoundednessReport {
        threshold,
        bounded: violations.is_empty(),
        violations,
    }
}
