use std::fmt;
use std::str::FromStr;

use crate::dissipation::{DissipationSpec, GChoice};
use crate::error::{Error, Result};
use crate::spectral::RadialSymbol;

/// Physical coefficients and dissipation orders.
#[derive(Clone, Debug)]
pub struct PhysicalParams {
    pub nu: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub g: Option<GChoice>,
}

impl Default for PhysicalParams {
    /// `ν = κ = 1/2`, `γ = μ = 1`, `α = β = 1`, no `g`.
    fn default() -> Self {
        PhysicalParams {
            nu: 0.5,
            kappa: 0.5,
            gamma: 1.0,
            mu: 1.0,
            alpha: 1.0,
            beta: 1.0,
            g: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Classical3D,
    Fractional3D,
    Fractional2D,
    LogNoAngular,
    LogWithAngular,
    NoGradDiv,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::Classical3D,
        ModelKind::Fractional3D,
        ModelKind::Fractional2D,
        ModelKind::LogNoAngular,
        ModelKind::LogWithAngular,
        ModelKind::NoGradDiv,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Classical3D => "classical3d",
            ModelKind::Fractional3D => "fractional3d",
            ModelKind::Fractional2D => "fractional2d",
            ModelKind::LogNoAngular => "log_no_angular",
            ModelKind::LogWithAngular => "log_with_angular",
            ModelKind::NoGradDiv => "no_grad_div",
        }
    }

    pub fn dim(self) -> usize {
        if self == ModelKind::Fractional2D {
            2
        } else {
            3
        }
    }

    pub fn is_logarithmic(self) -> bool {
        matches!(self, ModelKind::LogNoAngular | ModelKind::LogWithAngular)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::invalid(format!("unknown model `{s}`")))
    }
}

/// Coefficients of every term, after model-specific overrides.
///
/// Velocity: `∂t u = −P(u·∇)u − visc_u·D_u u + coupling_u·P curl w`.
/// Microrotation: `∂t w = −(u·∇)w − damping·w − visc_w·D_w w
/// + coupling_w·curl u + graddiv·∇∇·w`.
#[derive(Clone, Debug)]
pub struct Coefficients {
    pub visc_u: f64,
    pub diss_u: DissipationSpec,
    pub visc_w: f64,
    pub diss_w: DissipationSpec,
    pub damping: f64,
    pub coupling_u: f64,
    pub coupling_w: f64,
    pub graddiv: f64,
}

impl Coefficients {
    /// `visc_u · D_u` as a radial symbol.
    pub fn velocity_symbol(&self) -> Result<RadialSymbol> {
        scaled(self.visc_u, &self.diss_u)
    }

    /// `visc_w · D_w` as a radial symbol (damping not included).
    pub fn micro_symbol(&self) -> Result<RadialSymbol> {
        scaled(self.visc_w, &self.diss_w)
    }
}

fn scaled(c: f64, d: &DissipationSpec) -> Result<RadialSymbol> {
    let s = d.symbol()?;
    Ok(RadialSymbol::new(format!("{c}·{}", s.label()), move |r| c * s.eval(r)))
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    kind: ModelKind,
    params: PhysicalParams,
    coefficients: Coefficients,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, params: PhysicalParams) -> Result<Self> {
        let p = &params;
        for (name, v) in [
            ("nu", p.nu),
            ("kappa", p.kappa),
            ("gamma", p.gamma),
            ("mu", p.mu),
            ("alpha", p.alpha),
            ("beta", p.beta),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be finite and ≥ 0, got {v}")));
            }
        }
        let g = || {
            p.g.clone()
                .ok_or_else(|| Error::invalid(format!("model {kind} requires a g function")))
        };
        let frac = |r: f64| DissipationSpec::Fractional(r);
        let (diss_u, diss_w, graddiv) = match kind {
            ModelKind::Classical3D => (frac(1.0), frac(1.0), p.mu),
            ModelKind::Fractional3D => (frac(p.alpha), frac(p.beta), p.mu),
            ModelKind::Fractional2D => (frac(p.alpha), frac(p.beta), 0.0),
            ModelKind::LogNoAngular => (
                DissipationSpec::Logarithmic { alpha: p.alpha, g: g()? },
                DissipationSpec::None,
                p.mu,
            ),
            ModelKind::LogWithAngular => (
                DissipationSpec::Logarithmic { alpha: p.alpha, g: g()? },
                frac(p.beta),
                p.mu,
            ),
            ModelKind::NoGradDiv => (frac(p.alpha), DissipationSpec::None, 0.0),
        };
        diss_u.validate()?;
        diss_w.validate()?;
        let coefficients = Coefficients {
            visc_u: p.nu + p.kappa,
            diss_u,
            visc_w: p.gamma,
            diss_w,
            damping: 4.0 * p.kappa,
            coupling_u: 2.0 * p.kappa,
            coupling_w: 2.0 * p.kappa,
            graddiv,
        };
        Ok(ModelSpec {
            kind,
            params,
            coefficients,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Number of microrotation components.
    pub fn micro_components(&self) -> usize {
        if self.dim() == 2 {
            1
        } else {
            3
        }
    }

    /// Stable text form used for hashing.
    pub fn canonical(&self) -> String {
        let p = &self.params;
        format!(
            "model={};nu={:e};kappa={:e};gamma={:e};mu={:e};alpha={:e};beta={:e};g={}",
            self.kind,
            p.nu,
            p.kappa,
            p.gamma,
            p.mu,
            p.alpha,
            p.beta,
            p.g.as_ref().map_or("none", |g| g.label())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissipation::g1;

    #[test]
    fn log_models_need_g() {
        let p = PhysicalParams {
            alpha: 1.75,
            ..Default::default()
        };
        assert!(ModelSpec::new(ModelKind::LogNoAngular, p.clone()).is_err());
        let p = PhysicalParams { g: Some(g1()), ..p };
        let m = ModelSpec::new(ModelKind::LogNoAngular, p).unwrap();
        assert_eq!(m.coefficients().damping, 2.0);
        assert_eq!(m.coefficients().coupling_u, 1.0);
        assert!(m.coefficients().diss_w.is_none());
    }

    #[test]
    fn labels_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.label().parse::<ModelKind>().unwrap(), k);
        }
        assert!("navier".parse::<ModelKind>().is_err());
    }

    #[test]
    fn negative_parameter_rejected() {
        let p = PhysicalParams {
            nu: -1.0,
            ..Default::default()
        };
        assert!(ModelSpec::new(ModelKind::Fractional3D, p).is_err());
    }
}
