//! Fixed-seed property suites behind `mpsim verify`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::diagnostics::{
    energy_budget, integrated_residual, kato_ponce_ensemble, kato_ponce_sample, EnergyRecord, KpExponents,
};
use crate::dissipation::{g1, g_bad, g_condition_partial_integral, g_registry, GChoice, GCondition};
use crate::dynamics::{
    linear_matrix, random_state, simulate, taylor_green, GalerkinCutoff, ModelKind, ModelSpec, PhysicalParams,
    RunControl, State, Stepper, StepperConfig,
};
use crate::error::{Error, Result};
use crate::lp::{bernstein_ratio, build_partition, dyadic_block};
use crate::spectral::{
    inner_product_l2, leray_project, lq_norm, make_grid, random::random_scalar, random::random_scalar_in_shell,
    random::random_solenoidal, sobolev_seminorm, transform_backward, transform_forward, Grid, PaddedVelocity,
    SpectralScalarField, SpectralVectorField,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Lp,
    G,
    Energy,
    Commutator,
    Linop,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Core, Suite::Lp, Suite::G, Suite::Energy, Suite::Commutator, Suite::Linop];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Lp => "lp",
            Suite::G => "g",
            Suite::Energy => "energy",
            Suite::Commutator => "commutator",
            Suite::Linop => "linop",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.label() == s)
            .ok_or_else(|| Error::config("--suite", format!("unknown suite `{s}` (core, lp, g, energy, commutator, linop)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &str, passed: bool, detail: String) -> PropertyResult {
    PropertyResult {
        name: name.into(),
        passed,
        detail,
    }
}

/// Run one suite. Errors from the library count as failures of the property
/// that raised them.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<PropertyResult> {
    type Prop = fn(u64) -> Result<PropertyResult>;
    let props: &[(&str, Prop)] = match suite {
        Suite::Core => &[
            ("parseval", core_parseval),
            ("transform_round_trip", core_round_trip),
            ("leray_projection", core_leray),
            ("dealiased_product", core_dealiased_product),
            ("transport_cancellation", core_transport_cancellation),
        ],
        Suite::Lp => &[
            ("reconstruction", lp_reconstruction),
            ("block_orthogonality", lp_orthogonality),
            ("bernstein_bracket", lp_bernstein),
        ],
        Suite::G => &[
            ("registry_admissible", g_admissible),
            ("constant_g_closed_form", g_closed_form),
            ("g1_lnln_slope", g_lnln_slope),
            ("g_bad_tail", g_bad_tail),
        ],
        Suite::Energy => &[
            ("cross_term_symmetry", energy_cross_symmetry),
            ("kappa_zero_no_cross", energy_kappa_zero),
            ("residual_second_order", energy_second_order),
        ],
        Suite::Commutator => &[
            ("two_mode_closed_form", comm_two_mode),
            ("constant_velocity", comm_constant),
            ("resolution_stability", comm_resolution),
        ],
        Suite::Linop => &[("matrix_exponential_oracle", linop_oracle)],
    };
    props
        .iter()
        .map(|(name, f)| match f(seed) {
            Ok(r) => r,
            Err(e) => check(name, false, format!("error: {e}")),
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn core_parseval(seed: u64) -> Result<PropertyResult> {
    let g = make_grid(3, 16)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let f = random_scalar(&g, 7.0, 0.5, &mut rng);
        worst = worst.max(rel(lq_norm(&f, 2.0)?, sobolev_seminorm(&f, 0.0)));
    }
    Ok(check("parseval", worst <= 1e-12, format!("max relative gap {worst:.3e} (≤ 1e-12)")))
}

fn core_round_trip(seed: u64) -> Result<PropertyResult> {
    let g = make_grid(3, 16)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_scalar(&g, 7.0, 0.0, &mut rng);
    let back = transform_forward(&g, &transform_backward(&f))?;
    let err = back.axpy(-1.0, &f)?.max_abs() / f.max_abs();
    Ok(check("transform_round_trip", err <= 1e-14, format!("max relative error {err:.3e} (≤ 1e-14)")))
}

fn core_leray(seed: u64) -> Result<PropertyResult> {
    let g = make_grid(3, 16)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comps = (0..3).map(|_| random_scalar(&g, 7.0, 0.0, &mut rng)).collect();
    let v = SpectralVectorField::from_components(comps)?;
    let p = leray_project(&v)?;
    let pp = leray_project(&p)?;
    let idem = pp.axpy(-1.0, &p)?.max_abs() / p.max_abs();
    let div = p.max_divergence() / p.max_abs();
    Ok(check(
        "leray_projection",
        idem <= 1e-14 && div <= 1e-13,
        format!("idempotence {idem:.3e} (≤ 1e-14), divergence {div:.3e} (≤ 1e-13)"),
    ))
}

fn core_dealiased_product(_seed: u64) -> Result<PropertyResult> {
    // u = a cos(k1·x) with a ⟂ k1, f = cos(k2·x); modes near n/2 alias
    // unless the product is padded.
    let g = make_grid(2, 16)?;
    let (k1, a, k2) = ([7, 1, 0], [1.0, -7.0], [6, 5, 0]);
    let c = SpectralScalarField::single_mode(&g, k1, 1.0, 0.0)?;
    let u = SpectralVectorField::from_components(vec![c.scale(a[0]), c.scale(a[1])])?.assume_divergence_free()?;
    let f = SpectralScalarField::single_mode(&g, k2, 1.0, 0.0)?;
    let got = PaddedVelocity::new(&u)?.advect_scalar(&f)?;
    let adotk = a[0] * k2[0] as f64 + a[1] * k2[1] as f64;
    let mut expect = SpectralScalarField::zeros(&g);
    for k in [[k1[0] + k2[0], k1[1] + k2[1], 0], [k2[0] - k1[0], k2[1] - k1[1], 0]] {
        // −(a·k2)/2 sin(k·x), dropped if k falls outside the grid band
        if k.iter().all(|&x| x.abs() < 8) {
            expect = expect.axpy(1.0, &SpectralScalarField::single_mode(&g, k, -0.5 * adotk, -PI / 2.0)?)?;
        }
    }
    let err = got.axpy(-1.0, &expect)?.max_abs();
    Ok(check("dealiased_product", err <= 1e-13, format!("max coefficient error {err:.3e} (≤ 1e-13)")))
}

fn core_transport_cancellation(seed: u64) -> Result<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for dim in [2, 3] {
        let g = make_grid(dim, 16)?;
        for _ in 0..10 {
            let u = random_solenoidal(&g, 7.0, 0.5, &mut rng);
            let f = random_scalar(&g, 7.0, 0.5, &mut rng);
            let adv = PaddedVelocity::new(&u)?.advect_scalar(&f)?;
            let scale = sobolev_seminorm(&adv, 0.0) * sobolev_seminorm(&f, 0.0);
            worst = worst.max(inner_product_l2(&adv, &f)?.abs() / scale);
        }
    }
    Ok(check(
        "transport_cancellation",
        worst <= 1e-12,
        format!("max |∫(u·∇f) f| relative {worst:.3e} (≤ 1e-12)"),
    ))
}

fn lp_reconstruction(seed: u64) -> Result<PropertyResult> {
    let g = make_grid(3, 32)?;
    let part = build_partition(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let f = random_scalar(&g, 15.0, 0.0, &mut rng);
        let mut sum = SpectralScalarField::zeros(&g);
        for j in -1..=part.j_top() {
            sum = sum.axpy(1.0, &dyadic_block(&f, &part, j))?;
        }
        worst = worst.max(sobolev_seminorm(&sum.axpy(-1.0, &f)?, 0.0) / sobolev_seminorm(&f, 0.0));
    }
    Ok(check("reconstruction", worst <= 1e-10, format!("max ‖ΣΔ_j f − f‖/‖f‖ = {worst:.3e} (≤ 1e-10)")))
}

fn lp_orthogonality(seed: u64) -> Result<PropertyResult> {
    let g = make_grid(3, 32)?;
    let part = build_partition(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_scalar(&g, 15.0, 0.0, &mut rng);
    let mut worst: f64 = 0.0;
    for j in -1..=part.j_top() {
        let bj = dyadic_block(&f, &part, j);
        for l in -1..=part.j_top() {
            if (j - l).abs() >= 2 {
                worst = worst.max(dyadic_block(&bj, &part, l).max_abs());
            }
        }
    }
    Ok(check("block_orthogonality", worst == 0.0, format!("max |Δ_jΔ_l f| for |j−l| ≥ 2 = {worst:e} (exactly 0)")))
}

/// Ratios `‖(−Δ)f‖₂ / (2^{2j}‖f‖₂)` for annulus-localized random fields.
pub fn bernstein_ratios(grid: &Arc<Grid>, js: std::ops::RangeInclusive<i32>, per_j: usize, seed: u64) -> Result<Vec<(i32, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for j in js {
        let s = 2f64.powi(j);
        for _ in 0..per_j {
            let f = random_scalar_in_shell(grid, 0.75 * s, 8.0 / 3.0 * s, 1.0, &mut rng);
            let (lower, _) = bernstein_ratio(&f, j, 1.0, 2.0, 2.0)?;
            out.push((j, lower));
        }
    }
    Ok(out)
}

fn lp_bernstein(seed: u64) -> Result<PropertyResult> {
    let g = make_grid(2, 256)?;
    let r = bernstein_ratios(&g, 0..=5, 4, seed)?;
    let lo = r.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    let hi = r.iter().map(|x| x.1).fold(0.0, f64::max);
    Ok(check(
        "bernstein_bracket",
        hi / lo <= 3.0,
        format!("ratios over j = 0..5 in [{lo:.4}, {hi:.4}], width {:.3} (≤ 3)", hi / lo),
    ))
}

fn log_samples() -> Vec<f64> {
    (0..200).map(|i| 10f64.powf(-3.0 + 0.1 * i as f64)).collect()
}

fn g_admissible(_seed: u64) -> Result<PropertyResult> {
    let samples = log_samples();
    let bad: Vec<String> = g_registry()
        .iter()
        .filter(|g| g.check_admissible(&samples).is_err())
        .map(|g| g.label().to_string())
        .collect();
    Ok(check("registry_admissible", bad.is_empty(), format!("non-admissible entries: {bad:?}")))
}

fn g_closed_form(_seed: u64) -> Result<PropertyResult> {
    let one = GChoice::constant_one();
    let mut worst: f64 = 0.0;
    for t in [1e2, 1e5, 1e9] {
        let l = f64::ln(t);
        worst = worst.max(rel(g_condition_partial_integral(&one, GCondition::QuarticLog, t)?, l - 1.0));
        worst = worst.max(rel(g_condition_partial_integral(&one, GCondition::LogSqrt, t)?, 2.0 * (l.sqrt() - 1.0)));
    }
    Ok(check("constant_g_closed_form", worst <= 1e-9, format!("max relative error {worst:.3e} (≤ 1e-9)")))
}

/// Slopes of the log-sqrt partial integral of `g1` against `ln ln T` between
/// consecutive `T ∈ {1e3, 1e6, 1e9}`.
pub fn g1_lnln_slopes() -> Result<Vec<f64>> {
    let ts = [1e3, 1e6, 1e9];
    let v = ts
        .iter()
        .map(|&t| g_condition_partial_integral(&g1(), GCondition::LogSqrt, t))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..2)
        .map(|i| (v[i + 1] - v[i]) / (ts[i + 1].ln().ln() - ts[i].ln().ln()))
        .collect())
}

fn g_lnln_slope(_seed: u64) -> Result<PropertyResult> {
    let s = g1_lnln_slopes()?;
    let worst = s.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    Ok(check("g1_lnln_slope", worst <= 0.05, format!("slopes {s:.4?}, max deviation {worst:.4} (≤ 0.05)")))
}

fn g_bad_tail(_seed: u64) -> Result<PropertyResult> {
    let lo = g_condition_partial_integral(&g_bad(), GCondition::LogSqrt, 1e6)?;
    let hi = g_condition_partial_integral(&g_bad(), GCondition::LogSqrt, 1e9)?;
    let d = hi - lo;
    Ok(check("g_bad_tail", (0.0..=1e-2).contains(&d), format!("I(1e9) − I(1e6) = {d:.4e} (≤ 1e-2)")))
}

fn energy_cross_symmetry(seed: u64) -> Result<PropertyResult> {
    let mut worst: f64 = 0.0;
    for kind in [ModelKind::Fractional2D, ModelKind::Fractional3D] {
        let g = make_grid(kind.dim(), 16)?;
        let spec = ModelSpec::new(kind, PhysicalParams::default())?;
        for i in 0..5 {
            let s = random_state(&g, &spec, 7.0, 0.5, 1.0, 1.0, seed + i)?;
            let r = EnergyRecord::from_state(&s, &spec)?;
            worst = worst.max(rel(r.cross_wu, r.cross_uw));
        }
    }
    Ok(check("cross_term_symmetry", worst <= 1e-12, format!("max relative gap {worst:.3e} (≤ 1e-12)")))
}

fn energy_kappa_zero(seed: u64) -> Result<PropertyResult> {
    let g = make_grid(3, 16)?;
    let spec = ModelSpec::new(
        ModelKind::Fractional3D,
        PhysicalParams {
            kappa: 0.0,
            ..Default::default()
        },
    )?;
    let s = random_state(&g, &spec, 7.0, 0.5, 1.0, 1.0, seed)?;
    let c = EnergyRecord::from_state(&s, &spec)?.cross;
    Ok(check("kappa_zero_no_cross", c == 0.0, format!("cross = {c:e}")))
}

/// `∫|residual| dt` of a Taylor-Green run with probes at every step.
pub fn ledger_residual(kind: ModelKind, params: PhysicalParams, n: usize, dt: f64, t_end: f64, amp: f64) -> Result<f64> {
    let g = make_grid(kind.dim(), n)?;
    let spec = ModelSpec::new(kind, params)?;
    let s0 = taylor_green(&g, &spec, amp, amp)?;
    let mut st = Stepper::new(&g, &spec, GalerkinCutoff::inactive(), StepperConfig::new(dt, t_end))?;
    let mut recs = Vec::new();
    simulate(s0, &mut st, &RunControl::every_step(), &mut |s| {
        recs.push(EnergyRecord::from_state(s, &spec)?);
        Ok(())
    })?;
    Ok(integrated_residual(&energy_budget(&recs)?))
}

fn energy_second_order(_seed: u64) -> Result<PropertyResult> {
    let p = PhysicalParams {
        alpha: 1.25,
        beta: 0.5,
        ..Default::default()
    };
    let a = ledger_residual(ModelKind::Fractional3D, p.clone(), 16, 0.02, 0.2, 1.0)?;
    let b = ledger_residual(ModelKind::Fractional3D, p, 16, 0.01, 0.2, 1.0)?;
    let ratio = a / b;
    Ok(check(
        "residual_second_order",
        (3.4..=4.6).contains(&ratio),
        format!("residual {a:.3e} → {b:.3e}, ratio {ratio:.3} (in [3.4, 4.6])"),
    ))
}

fn comm_two_mode(_seed: u64) -> Result<PropertyResult> {
    let g = make_grid(2, 32)?;
    let c = SpectralScalarField::single_mode(&g, [1, 2, 0], 1.0, 0.0)?;
    let f = SpectralVectorField::from_components(vec![c.scale(2.0), c.scale(-1.0)])?.assume_divergence_free()?;
    let gg = SpectralVectorField::from_components(vec![SpectralScalarField::single_mode(&g, [3, -1, 0], 1.0, 0.0)?])?;
    let mut worst: f64 = 0.0;
    for s in [0.5, 1.5, 2.5] {
        let r = kato_ponce_sample(&f, &gg, s, KpExponents::default())?;
        let k2 = 10f64.sqrt();
        let a = 17f64.sqrt().powf(s) - k2.powf(s);
        let b = 13f64.sqrt().powf(s) - k2.powf(s);
        let expect = 7.0 / 2.0 * (2.0 * PI * PI).sqrt() * (a * a + b * b).sqrt();
        worst = worst.max(rel(r.lhs, expect));
    }
    Ok(check("two_mode_closed_form", worst <= 1e-12, format!("max relative error {worst:.3e} (≤ 1e-12)")))
}

fn comm_constant(seed: u64) -> Result<PropertyResult> {
    let g = make_grid(2, 32)?;
    let mut c = SpectralScalarField::zeros(&g);
    c.coefficients_mut()[0] = Complex64::new(0.8, 0.0);
    let f = SpectralVectorField::from_components(vec![c.clone(), c.scale(0.5)])?.assume_divergence_free()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gg = SpectralVectorField::from_components(vec![random_scalar(&g, 8.0, 1.0, &mut rng)])?;
    let r = kato_ponce_sample(&f, &gg, 1.5, KpExponents::default())?;
    let scale = sobolev_seminorm(&gg, 2.5);
    Ok(check(
        "constant_velocity",
        r.lhs <= 1e-13 * scale && r.ratio == 0.0,
        format!("lhs {:.3e} (≤ 1e-13 × {scale:.3e}), ratio {}", r.lhs, r.ratio),
    ))
}

/// Max commutator ratios over 200-pair ensembles at n = 32 and n = 64.
pub fn commutator_max_ratios(s: f64, seed: u64) -> Result<(f64, f64)> {
    let max = |n| -> Result<f64> {
        Ok(kato_ponce_ensemble(n, 200, s, seed)?
            .iter()
            .map(|x| x.ratio)
            .fold(0.0, f64::max))
    };
    Ok((max(32)?, max(64)?))
}

fn comm_resolution(seed: u64) -> Result<PropertyResult> {
    let (a, b) = commutator_max_ratios(1.5, seed)?;
    Ok(check(
        "resolution_stability",
        b <= 1.5 * a && a > 0.0,
        format!("max ratio n=32 {a:.4}, n=64 {b:.4} (≤ 1.5×)"),
    ))
}

/// The four parameter sets of the linear-mode comparison.
pub fn linop_specs() -> Result<Vec<ModelSpec>> {
    Ok(vec![
        ModelSpec::new(ModelKind::Classical3D, PhysicalParams::default())?,
        ModelSpec::new(
            ModelKind::Fractional3D,
            PhysicalParams {
                alpha: 1.25,
                beta: 0.5,
                ..Default::default()
            },
        )?,
        ModelSpec::new(
            ModelKind::LogWithAngular,
            PhysicalParams {
                alpha: 1.25,
                beta: 0.5,
                g: Some(g1()),
                ..Default::default()
            },
        )?,
        ModelSpec::new(
            ModelKind::NoGradDiv,
            PhysicalParams {
                alpha: 1.25,
                ..Default::default()
            },
        )?,
    ])
}

/// Data supported on `±k` only, with random complex amplitudes and `u ⟂ k`.
pub fn single_wavevector_state<R: Rng>(grid: &Arc<Grid>, spec: &ModelSpec, k: [i32; 3], rng: &mut R) -> Result<State> {
    let idx = grid.index_of(k).ok_or_else(|| Error::invalid(format!("{k:?} not on grid")))?;
    let neg = grid.neg_index(idx);
    let mut draw = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let mut fill = |ncomp: usize| -> Result<SpectralVectorField> {
        let comps = (0..ncomp)
            .map(|_| {
                let mut c = vec![Complex64::default(); grid.len()];
                let z = draw();
                c[idx] = z;
                c[neg] = z.conj();
                SpectralScalarField::from_coefficients(grid, c)
            })
            .collect::<Result<Vec<_>>>()?;
        SpectralVectorField::from_components(comps)
    };
    let u = leray_project(&fill(grid.dim())?)?;
    let w = fill(spec.micro_components())?;
    State::new(0.0, u, w, spec)
}

/// Largest relative error over the given wavevectors between stepping a
/// single-mode state to `t_end` and applying the dense `exp(tA)`.
pub fn linop_max_error(spec: &ModelSpec, wavevectors: &[[i32; 3]], n: usize, dt: f64, t_end: f64, seed: u64) -> Result<f64> {
    let grid = make_grid(spec.dim(), n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cfg = StepperConfig::new(dt, t_end);
    cfg.advection = false;
    let mut st = Stepper::new(&grid, spec, GalerkinCutoff::inactive(), cfg)?;
    let mut worst: f64 = 0.0;
    for &k in wavevectors {
        let s0 = single_wavevector_state(&grid, spec, k, &mut rng)?;
        let idx = grid.index_of(k).expect("checked by the generator");
        let coefs = |s: &State| -> DVector<Complex64> {
            DVector::from_iterator(
                s.u.ncomp() + s.w.ncomp(),
                s.u.components().iter().chain(s.w.components()).map(|c| c.coefficients()[idx]),
            )
        };
        let v0 = coefs(&s0);
        let end = simulate(s0, &mut st, &RunControl::default(), &mut |_| Ok(()))?;
        let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
        let oracle = (linear_matrix(kf, spec)? * Complex64::new(t_end, 0.0)).exp() * &v0;
        worst = worst.max((coefs(&end) - &oracle).norm() / oracle.norm());
    }
    Ok(worst)
}

/// Ten wavevectors with components in `[−7, 7]`, never zero.
pub fn seeded_wavevectors(seed: u64) -> Vec<[i32; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < 10 {
        let k = [rng.random_range(-7..=7), rng.random_range(-7..=7), rng.random_range(-7..=7)];
        if k != [0, 0, 0] && !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

fn linop_oracle(seed: u64) -> Result<PropertyResult> {
    let ks = seeded_wavevectors(seed);
    let mut worst: f64 = 0.0;
    for spec in linop_specs()? {
        worst = worst.max(linop_max_error(&spec, &ks, 16, 0.1, 1.0, seed)?);
    }
    Ok(check(
        "matrix_exponential_oracle",
        worst <= 1e-8,
        format!("10 wavevectors × 4 models, max relative error {worst:.3e} (≤ 1e-8)"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.label().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn fast_suites_pass() {
        for suite in [Suite::Core, Suite::G, Suite::Linop] {
            for r in run_suite(suite, 7) {
                assert!(r.passed, "{suite}: {r}");
            }
        }
    }
}
