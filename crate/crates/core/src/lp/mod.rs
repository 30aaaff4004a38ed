//! Littlewood–Paley analysis on the torus: a smooth dyadic partition of
//! unity, the inhomogeneous blocks `Δ_j` and low-pass operators `S_j`, Besov
//! norms, and Bernstein-ratio measurements.
//!
//! All operators act as Fourier multipliers; convolution kernels are never
//! formed.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{
    apply_radial_multiplier, fractional_laplacian, lq_norm, FieldData, Grid, RadialSymbol,
    SpectralScalarField, SpectralVectorField,
};

/// Inner and outer radius of the annulus carrying `ψ`.
pub const ANNULUS_INNER: f64 = 3.0 / 4.0;
pub const ANNULUS_OUTER: f64 = 8.0 / 3.0;
/// Radius of the ball carrying `φ`.
pub const BALL_RADIUS: f64 = 4.0 / 3.0;

fn mollifier(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth radial cutoff: 1 on `[0, 3/4]`, 0 on `[4/3, ∞)`, bridged by the
/// `exp(−1/x)` construction in between.
pub fn bump(r: f64) -> f64 {
    if r <= ANNULUS_INNER {
        return 1.0;
    }
    if r >= BALL_RADIUS {
        return 0.0;
    }
    let a = mollifier(BALL_RADIUS - r);
    let b = mollifier(r - ANNULUS_INNER);
    a / (a + b)
}

/// Annular bump `ψ(r) = φ(r/2) − φ(r)`, supported in `[3/4, 8/3]`.
pub fn annulus(r: f64) -> f64 {
    bump(0.5 * r) - bump(r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovIndex {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v >= 1.0) {
                return Err(Error::invalid(format!("Besov exponent {name} must lie in [1, ∞], got {v}")));
            }
        }
        if !s.is_finite() {
            return Err(Error::invalid("Besov regularity must be finite"));
        }
        Ok(BesovIndex { s, p, q })
    }
}

/// The dyadic partition realized on a particular grid.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Arc<Grid>,
    phi: RadialSymbol,
    psi: RadialSymbol,
    j_max: i32,
    j_top: i32,
}

/// `j_max = ⌊log₂(n/2)⌋ − 1` is the top fully resolved block; `j_top` is the
/// last block that still meets the lattice.
pub fn build_partition(grid: &Arc<Grid>) -> DyadicPartition {
    let half = grid.n() / 2;
    let j_max = half.ilog2() as i32 - 1;
    let max_r = grid.max_kmag();
    let mut j_top = 0;
    while ANNULUS_INNER * 2f64.powi(j_top + 1) < max_r {
        j_top += 1;
    }
    DyadicPartition {
        grid: grid.clone(),
        phi: RadialSymbol::new("phi", bump),
        psi: RadialSymbol::new("psi", annulus),
        j_max,
        j_top,
    }
}

impl DyadicPartition {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn phi(&self) -> &RadialSymbol {
        &self.phi
    }

    pub fn psi(&self) -> &RadialSymbol {
        &self.psi
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn j_top(&self) -> i32 {
        self.j_top
    }

    /// True for blocks whose annulus extends past the resolved band.
    pub fn is_truncated(&self, j: i32) -> bool {
        j > self.j_max
    }

    /// Multiplier of `Δ_j` at radius `r`.
    pub fn block_weight(&self, j: i32, r: f64) -> f64 {
        match j {
            j if j <= -2 => 0.0,
            -1 => self.phi.eval(r),
            j => self.psi.eval(r * 2f64.powi(-j)),
        }
    }

    /// Multiplier of `S_j = Σ_{k ≤ j−1} Δ_k` at radius `r`.
    pub fn low_pass_weight(&self, j: i32, r: f64) -> f64 {
        (-1..j).map(|k| self.block_weight(k, r)).sum()
    }

    pub fn block_symbol(&self, j: i32) -> RadialSymbol {
        let p = self.clone();
        RadialSymbol::new(format!("Delta_{j}"), move |r| p.block_weight(j, r))
    }

    pub fn low_pass_symbol(&self, j: i32) -> RadialSymbol {
        let p = self.clone();
        RadialSymbol::new(format!("S_{j}"), move |r| p.low_pass_weight(j, r))
    }
}

/// `Δ_j f`
pub fn dyadic_block(f: &SpectralScalarField, partition: &DyadicPartition, j: i32) -> SpectralScalarField {
    if j <= -2 {
        return SpectralScalarField::zeros(f.grid());
    }
    apply_radial_multiplier(f, &partition.block_symbol(j))
}

pub fn dyadic_block_vec(v: &SpectralVectorField, partition: &DyadicPartition, j: i32) -> SpectralVectorField {
    v.map_components(|c| dyadic_block(c, partition, j))
}

/// `S_j f`
pub fn low_pass(f: &SpectralScalarField, partition: &DyadicPartition, j: i32) -> SpectralScalarField {
    apply_radial_multiplier(f, &partition.low_pass_symbol(j))
}

/// `‖Δ_j f‖_{L^p}` for `j = −1 ..= j_top`.
pub fn block_norms<F: BlockSplit>(f: &F, partition: &DyadicPartition, p: f64) -> Result<Vec<(i32, f64)>> {
    (-1..=partition.j_top())
        .map(|j| Ok((j, f.block(partition, j).lp(p)?)))
        .collect()
}

/// Fields that can be split into dyadic blocks.
pub trait BlockSplit: FieldData + Sized {
    fn block(&self, partition: &DyadicPartition, j: i32) -> Self;
    fn lp(&self, p: f64) -> Result<f64> {
        lq_norm(self, p)
    }
}

impl BlockSplit for SpectralScalarField {
    fn block(&self, partition: &DyadicPartition, j: i32) -> Self {
        dyadic_block(self, partition, j)
    }
}

impl BlockSplit for SpectralVectorField {
    fn block(&self, partition: &DyadicPartition, j: i32) -> Self {
        dyadic_block_vec(self, partition, j)
    }
}

/// `‖ (2^{js} ‖Δ_j f‖_{L^p})_{j ≥ −1} ‖_{l^q}`
pub fn besov_norm<F: BlockSplit>(f: &F, partition: &DyadicPartition, idx: BesovIndex) -> Result<f64> {
    let terms: Vec<f64> = block_norms(f, partition, idx.p)?
        .into_iter()
        .map(|(j, norm)| 2f64.powf(j as f64 * idx.s) * norm)
        .collect();
    Ok(if idx.q.is_infinite() {
        terms.into_iter().fold(0.0, f64::max)
    } else {
        terms.iter().map(|t| t.powf(idx.q)).sum::<f64>().powf(1.0 / idx.q)
    })
}

/// Bernstein ratios for `f` localized in the annulus `3/4·2^j ≤ |k| ≤ 8/3·2^j`:
///
/// * lower: `‖(−Δ)^α f‖_q / (2^{2αj} ‖f‖_q)`
/// * upper: `‖(−Δ)^α f‖_q / (2^{2αj + jd(1/p − 1/q)} ‖f‖_p)`
pub fn bernstein_ratio(
    f: &SpectralScalarField,
    j: i32,
    alpha: f64,
    p: f64,
    q: f64,
) -> Result<(f64, f64)> {
    if !(p >= 1.0 && q >= p) {
        return Err(Error::invalid(format!("need 1 ≤ p ≤ q, got p = {p}, q = {q}")));
    }
    let grid = f.grid();
    let scale = f.max_abs();
    if scale == 0.0 {
        return Err(Error::invalid("Bernstein ratio of the zero field"));
    }
    let lo = ANNULUS_INNER * 2f64.powi(j);
    let hi = ANNULUS_OUTER * 2f64.powi(j);
    let outside = f
        .coefficients()
        .iter()
        .enumerate()
        .any(|(i, c)| c.norm() > 1e-14 * scale && !(lo..=hi).contains(&grid.kmag(i)));
    if outside {
        return Err(Error::invalid(format!(
            "field is not localized in the annulus [{lo}, {hi}]"
        )));
    }
    let d = grid.dim() as f64;
    let jf = j as f64;
    let lifted = lq_norm(&fractional_laplacian(f, alpha)?, q)?;
    let fq = lq_norm(f, q)?;
    let fp = lq_norm(f, p)?;
    let lower = lifted / (2f64.powf(2.0 * alpha * jf) * fq);
    let upper = lifted / (2f64.powf(2.0 * alpha * jf + jf * d * (1.0 / p - 1.0 / q)) * fp);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use crate::spectral::random::random_scalar;
    use crate::spectral::sobolev_seminorm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn partition_examples() {
        assert_eq!(bump(0.5), 1.0);
        assert_eq!(bump(2.0), 0.0);
        assert_eq!(annulus(0.5), 0.0);
        let r = 7.3;
        let total = bump(r) + (0..=20).map(|j| annulus(r * 2f64.powi(-j))).sum::<f64>();
        assert!((total - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn supports() {
        for i in 0..=4000 {
            let r = i as f64 * 1e-3;
            if r > BALL_RADIUS {
                assert_eq!(bump(r), 0.0);
            }
            if !(ANNULUS_INNER..=ANNULUS_OUTER).contains(&r) {
                assert_eq!(annulus(r), 0.0, "r = {r}");
            }
            assert!((0.0..=1.0).contains(&bump(r)));
            assert!(annulus(r) >= 0.0);
        }
    }

    #[test]
    fn partition_of_unity_on_lattice() {
        let g = make_grid(3, 32).unwrap();
        let p = build_partition(&g);
        assert_eq!(p.j_max(), 3);
        for i in 0..g.len() {
            let r = g.kmag(i);
            let total: f64 = (-1..=p.j_top()).map(|j| p.block_weight(j, r)).sum();
            assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn block_of_unit_mode_uses_psi_at_one() {
        let g = make_grid(2, 16).unwrap();
        let p = build_partition(&g);
        let f = SpectralScalarField::single_mode(&g, [1, 0, 0], 1.0, 0.0).unwrap();
        let b = dyadic_block(&f, &p, 0);
        let idx = g.index_of([1, 0, 0]).unwrap();
        // direct formula: ψ(1) = φ(1/2) − φ(1) = 1 − φ(1)
        let x = mollifier(4.0 / 3.0 - 1.0);
        let y = mollifier(1.0 - 0.75);
        let psi1 = 1.0 - x / (x + y);
        assert!((b.coefficients()[idx].re - 0.5 * psi1).abs() < 1e-15);
        assert_eq!(dyadic_block(&f, &p, -2).max_abs(), 0.0);
    }

    #[test]
    fn low_pass_is_partial_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = make_grid(2, 32).unwrap();
        let p = build_partition(&g);
        let f = random_scalar(&g, 15.0, 0.0, &mut rng);
        for j in -1..=p.j_top() + 1 {
            let s = low_pass(&f, &p, j);
            let mut acc = SpectralScalarField::zeros(&g);
            for k in -1..j {
                acc = acc.axpy(1.0, &dyadic_block(&f, &p, k)).unwrap();
            }
            let diff = s.axpy(-1.0, &acc).unwrap().max_abs();
            assert!(diff <= 1e-14);
        }
    }

    #[test]
    fn besov_zero_field() {
        let g = make_grid(2, 16).unwrap();
        let p = build_partition(&g);
        let z = SpectralScalarField::zeros(&g);
        assert_eq!(besov_norm(&z, &p, BesovIndex::new(1.0, 2.0, 2.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn besov_single_mode() {
        // a single mode at |k| = 2^j sits in blocks j−1 and j; the oracle sums
        // the two weighted contributions by hand
        let g = make_grid(2, 64).unwrap();
        let p = build_partition(&g);
        let a = 0.4;
        let s = 1.5;
        let f = SpectralScalarField::single_mode(&g, [8, 0, 0], a, 0.0).unwrap();
        let l2 = sobolev_seminorm(&f, 0.0);
        let mut sq = 0.0;
        for jj in -1..=p.j_top() {
            let w = p.block_weight(jj, 8.0);
            sq += (2f64.powf(jj as f64 * s) * w * l2).powi(2);
        }
        let psi_lo = annulus(8.0 / 4.0);
        let psi_hi = annulus(1.0);
        let by_hand = ((2f64.powf(2.0 * s) * psi_lo * l2).powi(2) + (2f64.powf(3.0 * s) * psi_hi * l2).powi(2)).sqrt();
        assert!((sq.sqrt() - by_hand).abs() < 1e-12 * by_hand);
        let got = besov_norm(&f, &p, BesovIndex::new(s, 2.0, 2.0).unwrap()).unwrap();
        assert!((got - by_hand).abs() < 1e-12 * by_hand, "{got} vs {by_hand}");
    }

    #[test]
    fn bernstein_single_mode_eigenvalue() {
        let g = make_grid(2, 32).unwrap();
        let f = SpectralScalarField::single_mode(&g, [4, 0, 0], 1.0, 0.2).unwrap();
        let (lower, upper) = bernstein_ratio(&f, 2, 0.75, 2.0, 2.0).unwrap();
        assert!((lower - 1.0).abs() < 1e-12);
        assert!((upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bernstein_rejects_unlocalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = make_grid(2, 32).unwrap();
        let f = random_scalar(&g, 12.0, 0.0, &mut rng);
        assert!(bernstein_ratio(&f, 1, 1.0, 2.0, 2.0).is_err());
        let p = build_partition(&g);
        let b = dyadic_block(&f, &p, 2);
        let (lo, hi) = bernstein_ratio(&b, 2, 1.0, 2.0, 4.0).unwrap();
        assert!(lo.is_finite() && lo > 0.0 && hi.is_finite() && hi > 0.0);
    }
}
