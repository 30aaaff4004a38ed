//! Per-mode linear generator and its exponential.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::model::ModelSpec;
use crate::error::{Error, Result};
use crate::spectral::{Grid, RadialSymbol};

/// State length per mode: 6 in 3D (`u`, `w`), 3 in 2D (`u₁`, `u₂`, `w`).
pub fn mode_size(dim: usize) -> usize {
    if dim == 2 {
        3
    } else {
        6
    }
}

pub(crate) struct ModeSymbols {
    pub(crate) u: RadialSymbol,
    pub(crate) w: RadialSymbol,
}

impl ModeSymbols {
    pub(crate) fn new(spec: &ModelSpec) -> Result<Self> {
        let c = spec.coefficients();
        Ok(ModeSymbols {
            u: c.velocity_symbol()?,
            w: c.micro_symbol()?,
        })
    }
}

/// Generator for lattice wavevector `k` with derivative wavevector `kd`.
pub(crate) fn generator(spec: &ModelSpec, sym: &ModeSymbols, k: [f64; 3], kd: [f64; 3]) -> DMatrix<Complex64> {
    let c = spec.coefficients();
    let dim = spec.dim();
    let k2: f64 = k.iter().map(|x| x * x).sum();
    let r = k2.sqrt();
    let au = sym.u.eval(r);
    let aw = sym.w.eval(r) + c.damping;
    let i = Complex64::i();
    let proj = |a: usize, b: usize| -> f64 {
        let delta = if a == b { 1.0 } else { 0.0 };
        if k2 == 0.0 {
            delta
        } else {
            delta - k[a] * k[b] / k2
        }
    };
    let s = mode_size(dim);
    let mut m = DMatrix::<Complex64>::zeros(s, s);
    if dim == 3 {
        let cross = [
            [0.0, -kd[2], kd[1]],
            [kd[2], 0.0, -kd[0]],
            [-kd[1], kd[0], 0.0],
        ];
        for a in 0..3 {
            m[(a, a)] = Complex64::from(-au);
            m[(3 + a, 3 + a)] = Complex64::from(-aw);
            for b in 0..3 {
                let pc: f64 = (0..3).map(|j| proj(a, j) * cross[j][b]).sum();
                m[(a, 3 + b)] += i * (c.coupling_u * pc);
                m[(3 + a, b)] += i * (c.coupling_w * cross[a][b]);
                m[(3 + a, 3 + b)] -= Complex64::from(c.graddiv * kd[a] * kd[b]);
            }
        }
    } else {
        // curl w = (∂₂w, −∂₁w); curl u = ∂₁u₂ − ∂₂u₁
        let cw = [kd[1], -kd[0]];
        for a in 0..2 {
            m[(a, a)] = Complex64::from(-au);
            let pc: f64 = (0..2).map(|j| proj(a, j) * cw[j]).sum();
            m[(a, 2)] = i * (c.coupling_u * pc);
        }
        m[(2, 0)] = i * (-c.coupling_w * kd[1]);
        m[(2, 1)] = i * (c.coupling_w * kd[0]);
        m[(2, 2)] = Complex64::from(-aw);
    }
    m
}

/// The linear generator acting on `(û(k), ŵ(k))`. `k` must be nonzero;
/// components beyond the spec dimension must be zero.
pub fn linear_matrix(k: [f64; 3], spec: &ModelSpec) -> Result<DMatrix<Complex64>> {
    if k.iter().all(|&x| x == 0.0) {
        return Err(Error::invalid("linear_matrix requires k ≠ 0"));
    }
    if spec.dim() == 2 && k[2] != 0.0 {
        return Err(Error::invalid("2D wavevector must have k₃ = 0"));
    }
    Ok(generator(spec, &ModeSymbols::new(spec)?, k, k))
}

/// `exp(dt · linear_matrix(k))`.
pub fn linear_propagator(k: [f64; 3], spec: &ModelSpec, dt: f64) -> Result<DMatrix<Complex64>> {
    if !(dt >= 0.0) {
        return Err(Error::invalid(format!("dt must be ≥ 0, got {dt}")));
    }
    Ok(expm(&(linear_matrix(k, spec)? * Complex64::from(dt))))
}

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm = one_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * Complex64::from(0.5f64.powi(s));
    let id = DMatrix::<Complex64>::identity(n, n);
    let b = |j: usize| Complex64::from(PADE13[j]);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9)) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Propagators for every mode of a grid, stored row-major per mode.
pub(crate) struct PropagatorTable {
    pub(crate) size: usize,
    pub(crate) data: Vec<Complex64>,
}

impl PropagatorTable {
    pub(crate) fn build(grid: &Grid, spec: &ModelSpec, dt: f64) -> Result<Self> {
        let sym = ModeSymbols::new(spec)?;
        let s = mode_size(grid.dim());
        let dtc = Complex64::from(dt);
        // Modes paired with a lower-index partner take its conjugate; Nyquist
        // modes are computed directly because their partner differs.
        let blocks: Vec<Option<Vec<Complex64>>> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let neg = grid.neg_index(idx);
                if neg < idx && !grid.is_nyquist(idx) {
                    return None;
                }
                let kv = grid.wavevector(idx);
                let k = [kv[0] as f64, kv[1] as f64, kv[2] as f64];
                let kd = grid.derivative_wavevector(idx);
                let e = expm(&(generator(spec, &sym, k, kd) * dtc));
                Some(e.transpose().as_slice().to_vec())
            })
            .collect();
        let mut data = vec![Complex64::default(); s * s * grid.len()];
        for (idx, b) in blocks.iter().enumerate() {
            let block = match b {
                Some(b) => b.clone(),
                None => blocks[grid.neg_index(idx)]
                    .as_ref()
                    .expect("partner computed")
                    .iter()
                    .map(|z| z.conj())
                    .collect(),
            };
            data[idx * s * s..(idx + 1) * s * s].copy_from_slice(&block);
        }
        Ok(PropagatorTable { size: s, data })
    }

    #[inline]
    pub(crate) fn block(&self, idx: usize) -> &[Complex64] {
        let s2 = self.size * self.size;
        &self.data[idx * s2..(idx + 1) * s2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissipation::g1;
    use crate::dynamics::model::{ModelKind, PhysicalParams};

    fn normalized(kind: ModelKind, alpha: f64, beta: f64) -> ModelSpec {
        ModelSpec::new(
            kind,
            PhysicalParams {
                alpha,
                beta,
                g: Some(g1()),
                ..Default::default()
            },
        )
        .unwrap()
    }

    /// Independent oracle: Taylor series on a heavily scaled matrix, then
    /// repeated squaring.
    fn taylor_expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = a.nrows();
        let s = 12;
        let a = a * Complex64::from(0.5f64.powi(s));
        let mut term = DMatrix::<Complex64>::identity(n, n);
        let mut sum = term.clone();
        for j in 1..30 {
            term = &term * &a * Complex64::from(1.0 / j as f64);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    fn rel_err(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn frozen_eigenvalues_unit_mode() {
        // −1, −4 and −2 ± √2 (each twice) from the dense Schur eigensolver.
        let m = linear_matrix([1.0, 0.0, 0.0], &normalized(ModelKind::Fractional3D, 1.0, 1.0)).unwrap();
        let ev = m.clone().schur().eigenvalues().expect("complex Schur");
        let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let r2 = 2f64.sqrt();
        let expect = [-4.0, -2.0 - r2, -2.0 - r2, -1.0, -2.0 + r2, -2.0 + r2];
        for (a, b) in re.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{re:?}");
        }
        assert!(ev.iter().all(|z| z.im.abs() < 1e-12));
    }

    #[test]
    fn decoupled_velocity_is_heat() {
        let spec = ModelSpec::new(
            ModelKind::Fractional3D,
            PhysicalParams {
                kappa: 0.0,
                nu: 0.7,
                alpha: 1.25,
                ..Default::default()
            },
        )
        .unwrap();
        let k = [1.0, 2.0, 2.0];
        let p = linear_propagator(k, &spec, 0.3).unwrap();
        let expect = (-0.7 * 3f64.powf(2.5) * 0.3).exp();
        for a in 0..3 {
            assert!((p[(a, a)].re - expect).abs() < 1e-14);
            for b in 0..6 {
                if a != b {
                    assert!(p[(a, b)].norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn pade_matches_oracles() {
        let specs = [
            normalized(ModelKind::Classical3D, 1.0, 1.0),
            normalized(ModelKind::Fractional3D, 1.25, 0.5),
            normalized(ModelKind::LogWithAngular, 1.75, 0.5),
            normalized(ModelKind::NoGradDiv, 1.25, 0.0),
        ];
        for spec in &specs {
            for k in [[1.0, 0.0, 0.0], [2.0, -1.0, 3.0], [0.0, 5.0, -4.0]] {
                for dt in [1e-3, 0.1, 1.0] {
                    let a = linear_matrix(k, spec).unwrap() * Complex64::from(dt);
                    let p = expm(&a);
                    assert!(rel_err(&p, &taylor_expm(&a)) < 1e-12);
                    assert!(rel_err(&p, &a.clone().exp()) < 1e-12);
                }
            }
        }
        let spec = normalized(ModelKind::Fractional2D, 1.0, 0.5);
        let a = linear_matrix([3.0, -2.0, 0.0], &spec).unwrap() * Complex64::from(0.4);
        assert!(rel_err(&expm(&a), &taylor_expm(&a)) < 1e-12);
    }

    #[test]
    fn semigroup_and_identity() {
        let spec = normalized(ModelKind::Fractional3D, 1.25, 0.5);
        let k = [3.0, 1.0, -2.0];
        let p0 = linear_propagator(k, &spec, 0.0).unwrap();
        assert!(rel_err(&p0, &DMatrix::identity(6, 6)) == 0.0);
        let p1 = linear_propagator(k, &spec, 0.05).unwrap();
        let p2 = linear_propagator(k, &spec, 0.1).unwrap();
        assert!(rel_err(&(&p1 * &p1), &p2) < 1e-11);
    }

    #[test]
    fn dissipative_on_solenoidal_subspace() {
        let mut specs = vec![
            normalized(ModelKind::Classical3D, 1.0, 1.0),
            normalized(ModelKind::Fractional3D, 1.25, 0.5),
            normalized(ModelKind::LogNoAngular, 1.75, 0.0),
            normalized(ModelKind::LogWithAngular, 1.25, 0.5),
            normalized(ModelKind::NoGradDiv, 1.25, 0.0),
        ];
        for g in crate::dissipation::g_registry() {
            specs.push(
                ModelSpec::new(
                    ModelKind::LogWithAngular,
                    PhysicalParams {
                        alpha: 1.5,
                        beta: 0.25,
                        g: Some(g),
                        ..Default::default()
                    },
                )
                .unwrap(),
            );
        }
        for spec in &specs {
            for k in [[1.0, 0.0, 0.0], [1.0, 1.0, 1.0], [4.0, -3.0, 2.0], [0.0, 0.0, 9.0]] {
                let m = linear_matrix(k, spec).unwrap();
                // basis: two unit vectors ⟂ k for u, all of w
                let kn: f64 = k.iter().map(|x| x * x).sum::<f64>().sqrt();
                let kh = [k[0] / kn, k[1] / kn, k[2] / kn];
                let seed = if kh[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                let d: f64 = (0..3).map(|a| seed[a] * kh[a]).sum();
                let mut e1 = [0.0; 3];
                for a in 0..3 {
                    e1[a] = seed[a] - d * kh[a];
                }
                let n1 = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
                e1.iter_mut().for_each(|x| *x /= n1);
                let e2 = [
                    kh[1] * e1[2] - kh[2] * e1[1],
                    kh[2] * e1[0] - kh[0] * e1[2],
                    kh[0] * e1[1] - kh[1] * e1[0],
                ];
                let mut q = DMatrix::<Complex64>::zeros(6, 5);
                for a in 0..3 {
                    q[(a, 0)] = e1[a].into();
                    q[(a, 1)] = e2[a].into();
                    q[(3 + a, 2 + a)] = Complex64::from(1.0);
                }
                let restricted = q.adjoint() * &m * &q;
                let ev = restricted.schur().eigenvalues().unwrap();
                assert!(ev.iter().all(|z| z.re <= 1e-12), "{ev:?}");
            }
        }
    }

    #[test]
    fn zero_wavevector_rejected() {
        let spec = normalized(ModelKind::Fractional3D, 1.0, 1.0);
        assert!(linear_matrix([0.0; 3], &spec).is_err());
    }
}
