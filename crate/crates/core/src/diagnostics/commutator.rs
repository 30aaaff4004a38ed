//! Empirical constants for commutator and high-low frequency estimates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dissipation::GChoice;
use crate::error::{Error, Result};
use crate::spectral::{
    apply_radial_multiplier_vec, fractional_laplacian, from_physical_on, lq_norm, make_grid, multiplier_norm, partial, prolong_vec,
    random::{random_scalar, random_solenoidal},
    sobolev_seminorm, to_physical_on, RadialSymbol, SpectralScalarField, SpectralVectorField,
};

use super::monitor::grad_sup;

/// Lebesgue exponents `(p1, q1, p2, q2)` of the majorant
/// `‖∇f‖_{p1} ‖Λ^{s−1}∇g‖_{q1} + ‖Λ^s f‖_{p2} ‖∇g‖_{q2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KpExponents {
    pub p1: f64,
    pub q1: f64,
    pub p2: f64,
    pub q2: f64,
}

impl Default for KpExponents {
    fn default() -> Self {
        KpExponents {
            p1: f64::INFINITY,
            q1: 2.0,
            p2: 2.0,
            q2: f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorSample {
    pub s: f64,
    /// `‖Λ^s(f·∇g) − f·∇Λ^s g‖₂`
    pub lhs: f64,
    pub rhs_bound: f64,
    pub ratio: f64,
}

/// Largest tolerated `|k|^s` on the doubled lattice.
const AMPLIFICATION_LIMIT: f64 = 1e150;

/// `f·∇g` on the doubled grid, where the product of two fields free of
/// Nyquist content is exact.
fn transport(f: &[Vec<f64>], g: &SpectralScalarField, m: usize) -> Result<SpectralScalarField> {
    let dim = f.len();
    let grads: Vec<Vec<f64>> = (0..dim).map(|a| to_physical_on(&partial(g, a), m)).collect();
    let prod: Vec<f64> = (0..grads[0].len())
        .map(|p| (0..dim).map(|a| f[a][p] * grads[a][p]).sum())
        .collect();
    from_physical_on(g.grid(), m, &prod)
}

fn gradient_components(v: &[SpectralScalarField]) -> Result<SpectralVectorField> {
    let comps = v
        .iter()
        .flat_map(|c| (0..c.grid().dim()).map(move |a| partial(c, a)))
        .collect();
    SpectralVectorField::from_components(comps)
}

/// Direct evaluation of the commutator `[Λ^s, f·∇]g` for each component of
/// `g` and of the Kato-Ponce majorant. Both fields are moved to a grid with
/// twice the points per axis first.
pub fn kato_ponce_sample(
    f: &SpectralVectorField,
    g: &SpectralVectorField,
    s: f64,
    exponents: KpExponents,
) -> Result<CommutatorSample> {
    let grid = f.grid();
    if g.grid() != grid {
        return Err(Error::GridMismatch);
    }
    if f.ncomp() != grid.dim() {
        return Err(Error::ShapeMismatch {
            expected: grid.dim(),
            actual: f.ncomp(),
        });
    }
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::invalid(format!("commutator order must be finite and ≥ 0, got {s}")));
    }
    let fine = make_grid(grid.dim(), 2 * grid.n())?;
    if fine.max_kmag().powf(s) > AMPLIFICATION_LIMIT {
        return Err(Error::invalid(format!(
            "|k|^{s} overflows on a {}-point grid",
            fine.n()
        )));
    }
    let m = fine.n();
    let f2 = prolong_vec(f, &fine)?;
    let g2 = prolong_vec(g, &fine)?;
    let f_phys: Vec<Vec<f64>> = f2.components().iter().map(|c| to_physical_on(c, m)).collect();

    let mut lhs_sq = 0.0;
    for gc in g2.components() {
        let lam_g = fractional_laplacian(gc, s / 2.0)?;
        let a = fractional_laplacian(&transport(&f_phys, gc, m)?, s / 2.0)?;
        let b = transport(&f_phys, &lam_g, m)?;
        lhs_sq += sobolev_seminorm(&a.axpy(-1.0, &b)?, 0.0).powi(2);
    }
    let lhs = lhs_sq.sqrt();

    let grad_f = gradient_components(f2.components())?;
    let grad_g = gradient_components(g2.components())?;
    let lam_grad_g = apply_radial_multiplier_vec(&grad_g, &RadialSymbol::power(s - 1.0));
    let lam_f = f2.map_components(|c| fractional_laplacian(c, s / 2.0).expect("finite order"));
    let rhs_bound = lq_norm(&grad_f, exponents.p1)? * lq_norm(&lam_grad_g, exponents.q1)?
        + lq_norm(&lam_f, exponents.p2)? * lq_norm(&grad_g, exponents.q2)?;
    let ratio = if rhs_bound > 0.0 { lhs / rhs_bound } else { 0.0 };
    Ok(CommutatorSample {
        s,
        lhs,
        rhs_bound,
        ratio,
    })
}

/// Samples for `count` seeded random pairs on a 2D `n`-grid: `f`
/// divergence-free, `g` scalar, both supported in `|k| ≤ n/4`. Sample `i`
/// uses its own stream seeded with `seed + i`.
pub fn kato_ponce_ensemble(n: usize, count: usize, s: f64, seed: u64) -> Result<Vec<CommutatorSample>> {
    let grid = make_grid(2, n)?;
    let k_max = n as f64 / 4.0;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let f = random_solenoidal(&grid, k_max, 1.0, &mut rng);
            let g = SpectralVectorField::from_components(vec![random_scalar(&grid, k_max, 1.0, &mut rng)])?;
            kato_ponce_sample(&f, &g, s, KpExponents::default())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HighLowSample {
    pub n_split: u32,
    /// `‖∇u‖_∞`
    pub lhs: f64,
    /// `‖u‖₂`, `g²(2^N)√N ‖Λ^{5/2} g^{−2}(Λ) u‖₂`,
    /// `2^{N(ε₂+3/4−k₁)} ‖Λ^{k₁+7/4−ε₂} u‖₂`
    pub rhs_terms: [f64; 3],
    pub ratio: f64,
}

/// Terms of the high-low splitting bound for `‖∇u‖_∞` at split `2^N`.
pub fn highlow_gradient_bound(
    u: &SpectralVectorField,
    n_split: u32,
    g: &GChoice,
    k1: f64,
    eps2: f64,
) -> Result<HighLowSample> {
    if !(k1 > eps2 + 0.75) {
        return Err(Error::invalid(format!(
            "high-low bound needs k1 > eps2 + 3/4, got k1 = {k1}, eps2 = {eps2}"
        )));
    }
    if n_split == 0 {
        return Err(Error::invalid("split index must be ≥ 1"));
    }
    let nf = n_split as f64;
    let lhs = grad_sup(u);
    let t1 = sobolev_seminorm(u, 0.0);
    let gg = g.clone();
    let sym = RadialSymbol::new("r^{5/2}/g(r)^2", move |r| {
        if r == 0.0 {
            0.0
        } else {
            r.powf(2.5) / gg.eval(r).powi(2)
        }
    });
    let t2 = g.eval(2f64.powf(nf)).powi(2) * nf.sqrt() * multiplier_norm(u, &sym);
    let t3 = 2f64.powf(nf * (eps2 + 0.75 - k1)) * sobolev_seminorm(u, k1 + 1.75 - eps2);
    let sum = t1 + t2 + t3;
    Ok(HighLowSample {
        n_split,
        lhs,
        rhs_terms: [t1, t2, t3],
        ratio: if sum > 0.0 { lhs / sum } else { 0.0 },
    })
}
