//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key is checked
//! before any field is allocated.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::dissipation::g_by_label;
use crate::dynamics::{GalerkinCutoff, ModelKind, ModelSpec, PhysicalParams, Scheme, StepperConfig};
use crate::error::{Error, Result};

pub const KNOWN_KEYS: &[&str] = &[
    "model",
    "n",
    "dt",
    "t_end",
    "alpha",
    "beta",
    "nu",
    "kappa",
    "gamma",
    "mu",
    "g",
    "cutoff",
    "seed",
    "probe_cadence",
    "checkpoint_cadence",
    "scheme",
    "init",
    "amplitude",
    "k_max",
    "sobolev_index",
    "cfl_safety",
    "alpha_list",
    "beta_list",
];

/// Initial data families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    TaylorGreen,
    Random,
    Zero,
}

impl FromStr for InitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "taylor_green" => Ok(InitKind::TaylorGreen),
            "random" => Ok(InitKind::Random),
            "zero" => Ok(InitKind::Zero),
            _ => Err(Error::invalid(format!("unknown init `{s}` (taylor_green, random, zero)"))),
        }
    }
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitKind::TaylorGreen => "taylor_green",
            InitKind::Random => "random",
            InitKind::Zero => "zero",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: ModelKind,
    pub params: PhysicalParams,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub cutoff: Option<f64>,
    pub seed: u64,
    pub probe_cadence: u64,
    pub checkpoint_cadence: u64,
    pub scheme: Scheme,
    pub init: InitKind,
    pub amplitude: f64,
    pub k_max: f64,
    pub sobolev_index: f64,
    pub cfl_safety: f64,
    pub alpha_list: Option<Vec<f64>>,
    pub beta_list: Option<Vec<f64>>,
}

fn parse_as<T: FromStr>(key: &str, raw: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    raw.parse()
        .map_err(|e| Error::config(key, format!("cannot parse `{raw}`: {e}")))
}

fn parse_list(key: &str, raw: &str) -> Result<Vec<f64>> {
    let vals = raw
        .split(',')
        .map(|x| parse_as::<f64>(key, x.trim()))
        .collect::<Result<Vec<_>>>()?;
    if vals.is_empty() {
        return Err(Error::config(key, "empty list"));
    }
    Ok(vals)
}

fn require_finite(key: &str, x: f64, min: f64, strict: bool) -> Result<f64> {
    let ok = x.is_finite() && if strict { x > min } else { x >= min };
    if ok {
        Ok(x)
    } else {
        let op = if strict { ">" } else { "≥" };
        Err(Error::config(key, format!("must be finite and {op} {min}, got {x}")))
    }
}

/// Split text into raw `key → value` pairs, rejecting unknown and repeated
/// keys.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split_once('#').map_or(line, |(head, _)| head).trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::config(
                format!("line {}", lineno + 1),
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let (k, v) = (k.trim(), v.trim());
        if !KNOWN_KEYS.contains(&k) {
            return Err(Error::config(k, "unknown key"));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::config(k, "given more than once"));
        }
    }
    Ok(map)
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn from_pairs(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let f64_or = |k: &str, default: f64| -> Result<f64> { get(k).map_or(Ok(default), |v| parse_as(k, v)) };
        let u64_or = |k: &str, default: u64| -> Result<u64> { get(k).map_or(Ok(default), |v| parse_as(k, v)) };

        let model: ModelKind = parse_as("model", get("model").ok_or_else(|| Error::config("model", "missing"))?)?;
        let n: usize = parse_as("n", get("n").ok_or_else(|| Error::config("n", "missing"))?)?;
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::config("n", format!("must be a power of two ≥ 8, got {n}")));
        }
        let dt = require_finite("dt", parse_as("dt", get("dt").ok_or_else(|| Error::config("dt", "missing"))?)?, 0.0, true)?;
        let t_end = require_finite(
            "t_end",
            parse_as("t_end", get("t_end").ok_or_else(|| Error::config("t_end", "missing"))?)?,
            0.0,
            false,
        )?;

        let defaults = PhysicalParams::default();
        let mut params = PhysicalParams {
            nu: require_finite("nu", f64_or("nu", defaults.nu)?, 0.0, false)?,
            kappa: require_finite("kappa", f64_or("kappa", defaults.kappa)?, 0.0, false)?,
            gamma: require_finite("gamma", f64_or("gamma", defaults.gamma)?, 0.0, false)?,
            mu: require_finite("mu", f64_or("mu", defaults.mu)?, 0.0, false)?,
            alpha: require_finite("alpha", f64_or("alpha", defaults.alpha)?, 0.0, false)?,
            beta: require_finite("beta", f64_or("beta", defaults.beta)?, 0.0, false)?,
            g: None,
        };
        match (model.is_logarithmic(), get("g")) {
            (true, None) => {
                return Err(Error::config("g", format!("model {model} requires a g choice (g1, g2, g3, g_bad, one)")))
            }
            (true, Some(label)) => {
                params.g = Some(g_by_label(label).map_err(|e| Error::config("g", e.to_string()))?);
            }
            (false, Some(_)) => return Err(Error::config("g", format!("model {model} does not take a g choice"))),
            (false, None) => {}
        }
        if model.is_logarithmic() && !(params.alpha > 0.0) {
            return Err(Error::config("alpha", "logarithmic models need alpha > 0"));
        }

        let cutoff = match get("cutoff") {
            None | Some("none") => None,
            Some(v) => Some(require_finite("cutoff", parse_as("cutoff", v)?, 0.0, false)?),
        };
        let cfg = RunConfig {
            model,
            params,
            n,
            dt,
            t_end,
            cutoff,
            seed: u64_or("seed", 0)?,
            probe_cadence: u64_or("probe_cadence", 1)?,
            checkpoint_cadence: u64_or("checkpoint_cadence", 0)?,
            scheme: get("scheme").map_or(Ok(Scheme::Strang), |v| parse_as("scheme", v))?,
            init: get("init").map_or(Ok(InitKind::TaylorGreen), |v| parse_as("init", v))?,
            amplitude: require_finite("amplitude", f64_or("amplitude", 0.1)?, 0.0, false)?,
            k_max: require_finite("k_max", f64_or("k_max", (n / 4) as f64)?, 0.0, true)?,
            sobolev_index: require_finite("sobolev_index", f64_or("sobolev_index", 2.6)?, 0.0, false)?,
            cfl_safety: f64_or("cfl_safety", 0.5)?,
            alpha_list: get("alpha_list").map(|v| parse_list("alpha_list", v)).transpose()?,
            beta_list: get("beta_list").map(|v| parse_list("beta_list", v)).transpose()?,
        };
        if !(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0) {
            return Err(Error::config("cfl_safety", format!("must lie in (0, 1], got {}", cfg.cfl_safety)));
        }
        for (key, list) in [("alpha_list", &cfg.alpha_list), ("beta_list", &cfg.beta_list)] {
            if let Some(l) = list {
                for &x in l {
                    require_finite(key, x, 0.0, false)?;
                }
            }
        }
        cfg.model_spec().map_err(|e| Error::config("model", e.to_string()))?;
        Ok(cfg)
    }

    pub fn model_spec(&self) -> Result<ModelSpec> {
        ModelSpec::new(self.model, self.params.clone())
    }

    pub fn stepper_config(&self) -> StepperConfig {
        StepperConfig {
            scheme: self.scheme,
            dt: self.dt,
            t_end: self.t_end,
            cfl_safety: self.cfl_safety,
            advection: true,
        }
    }

    pub fn galerkin_cutoff(&self) -> GalerkinCutoff {
        self.cutoff.map_or(GalerkinCutoff::inactive(), GalerkinCutoff::radius)
    }

    /// `(α, β)` cells of the sweep in row-major order (α outer).
    pub fn sweep_cells(&self) -> Result<Vec<(f64, f64)>> {
        let a = self
            .alpha_list
            .as_ref()
            .ok_or_else(|| Error::config("alpha_list", "missing; a sweep needs alpha_list and beta_list"))?;
        let b = self
            .beta_list
            .as_ref()
            .ok_or_else(|| Error::config("beta_list", "missing; a sweep needs alpha_list and beta_list"))?;
        Ok(a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect())
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        RunConfig::from_pairs(&parse_pairs(text)?)
    }
}
