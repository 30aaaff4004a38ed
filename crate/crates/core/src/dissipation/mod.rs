//! Fractional and logarithmically weakened dissipation symbols.

mod quadrature;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{radial_power, RadialSymbol};

pub use quadrature::integrate;

/// A non-decreasing radial weight `g ≥ 1`.
#[derive(Clone)]
pub struct GChoice {
    label: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl GChoice {
    /// Wrap a user function. Admissibility is not checked here; see
    /// [`GChoice::check_admissible`].
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        GChoice {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn constant_one() -> Self {
        GChoice::new("one", |_| 1.0)
    }

    #[inline]
    pub fn eval(&self, tau: f64) -> f64 {
        (self.eval)(tau)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Check `g ≥ 1` and monotonicity on the given increasing sample points.
    pub fn check_admissible(&self, samples: &[f64]) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for &t in samples {
            let v = self.eval(t);
            if !(v >= 1.0) {
                return Err(Error::invalid(format!("g `{}`({t}) = {v} < 1", self.label)));
            }
            if v < prev {
                return Err(Error::invalid(format!("g `{}` decreases at τ = {t}", self.label)));
            }
            prev = v;
        }
        Ok(())
    }
}

impl fmt::Debug for GChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GChoice").field("label", &self.label).finish()
    }
}

fn ln_e_plus(tau: f64) -> f64 {
    (std::f64::consts::E + tau).ln()
}

/// `[ln(e+τ)]^{1/4}`
pub fn g1() -> GChoice {
    GChoice::new("g1", |t| ln_e_plus(t).powf(0.25))
}

/// `[ln(e+τ)]^{1/4} [ln(e+ln(e+τ))]^{1/2}`
pub fn g2() -> GChoice {
    GChoice::new("g2", |t| {
        let l = ln_e_plus(t);
        l.powf(0.25) * ln_e_plus(l).sqrt()
    })
}

/// `[ln(e+τ) ln(e+ln(e+τ))]^{1/4}`
pub fn g3() -> GChoice {
    GChoice::new("g3", |t| {
        let l = ln_e_plus(t);
        (l * ln_e_plus(l)).powf(0.25)
    })
}

/// `ln(e+τ)`, which grows too fast for the log-sqrt condition.
pub fn g_bad() -> GChoice {
    GChoice::new("g_bad", ln_e_plus)
}

pub fn g_registry() -> Vec<GChoice> {
    vec![g1(), g2(), g3(), g_bad()]
}

/// Look up a registry entry, or `one`, by label.
pub fn g_by_label(label: &str) -> Result<GChoice> {
    if label == "one" {
        return Ok(GChoice::constant_one());
    }
    g_registry()
        .into_iter()
        .find(|g| g.label() == label)
        .ok_or_else(|| Error::invalid(format!("unknown g `{label}`")))
}

/// Symbol `r^α / g(r)`, zero at the origin.
pub fn l_operator_symbol(alpha: f64, g: &GChoice) -> Result<RadialSymbol> {
    check_alpha(alpha)?;
    let g = g.clone();
    Ok(RadialSymbol::new(format!("r^{alpha}/{}(r)", g.label), move |r| {
        if r == 0.0 {
            0.0
        } else {
            r.powf(alpha) / g.eval(r)
        }
    }))
}

/// Symbol `r^{2α} / g(r)²`, zero at the origin.
pub fn l_squared_symbol(alpha: f64, g: &GChoice) -> Result<RadialSymbol> {
    check_alpha(alpha)?;
    let g = g.clone();
    Ok(RadialSymbol::new(format!("r^{}/{}(r)^2", 2.0 * alpha, g.label), move |r| {
        if r == 0.0 {
            0.0
        } else {
            let gv = g.eval(r);
            r.powf(2.0 * alpha) / (gv * gv)
        }
    }))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must be positive, got {alpha}")))
    }
}

/// The dissipation acting on one field.
#[derive(Clone, Debug)]
pub enum DissipationSpec {
    /// `(−Δ)^ρ`; `ρ = 0` means no dissipation.
    Fractional(f64),
    /// `𝓛²` with symbol `r^{2α}/g(r)²`.
    Logarithmic { alpha: f64, g: GChoice },
    None,
}

impl DissipationSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DissipationSpec::Fractional(rho) if !(*rho >= 0.0 && rho.is_finite()) => {
                Err(Error::invalid(format!("fractional order must be ≥ 0, got {rho}")))
            }
            DissipationSpec::Logarithmic { alpha, .. } => check_alpha(*alpha),
            _ => Ok(()),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, DissipationSpec::None) || matches!(self, DissipationSpec::Fractional(r) if *r == 0.0)
    }

    /// The multiplier applied in the equation.
    pub fn symbol(&self) -> Result<RadialSymbol> {
        self.validate()?;
        if self.is_none() {
            return Ok(RadialSymbol::constant(0.0));
        }
        match self {
            DissipationSpec::Fractional(rho) => Ok(RadialSymbol::power(2.0 * rho)),
            DissipationSpec::Logarithmic { alpha, g } => l_squared_symbol(*alpha, g),
            DissipationSpec::None => unreachable!(),
        }
    }
}

/// Which integral condition on `g` to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GCondition {
    /// `∫_e^T dτ / (τ √(ln τ) g²(τ))`
    LogSqrt,
    /// `∫_e^T dτ / (τ g⁴(τ))`
    QuarticLog,
}

impl FromStr for GCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log_sqrt" => Ok(GCondition::LogSqrt),
            "quartic_log" => Ok(GCondition::QuarticLog),
            _ => Err(Error::invalid(format!("unknown condition `{s}`"))),
        }
    }
}

impl fmt::Display for GCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GCondition::LogSqrt => "log_sqrt",
            GCondition::QuarticLog => "quartic_log",
        })
    }
}

/// Partial integral from `e` to `T` of the chosen condition, evaluated in the
/// variable `s = ln τ` to relative accuracy `1e-10`.
pub fn g_condition_partial_integral(g: &GChoice, condition: GCondition, t: f64) -> Result<f64> {
    if !(t >= std::f64::consts::E) || !t.is_finite() {
        return Err(Error::invalid(format!("upper limit must be ≥ e, got {t}")));
    }
    let upper = t.ln();
    if upper <= 1.0 {
        return Ok(0.0);
    }
    let f = |s: f64| {
        let gv = g.eval(s.exp());
        match condition {
            GCondition::LogSqrt => 1.0 / (s.sqrt() * gv * gv),
            GCondition::QuarticLog => 1.0 / (gv * gv * gv * gv),
        }
    };
    integrate(&f, 1.0, upper, 1e-10)
}

/// Smallest `r` on the grid `r = 2^{m/8}` above which `r^{2α}/g(r)² ≥ r^{2α−σ}`
/// holds up to `r_limit`, i.e. the measured onset of `g(r)² ≤ r^σ`.
pub fn fractional_threshold(g: &GChoice, sigma: f64, r_limit: f64) -> Option<f64> {
    let mut onset = None;
    let mut m = 0;
    loop {
        let r = 2f64.powf(m as f64 / 8.0);
        if r > r_limit {
            return onset;
        }
        let gv = g.eval(r);
        if gv * gv <= radial_power(r, sigma) {
            onset.get_or_insert(r);
        } else {
            onset = None;
        }
        m += 1;
    }
}
