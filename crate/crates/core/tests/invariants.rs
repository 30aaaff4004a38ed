use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use micropolar::dissipation::{g_registry, l_operator_symbol};
use micropolar::dynamics::{apply_cutoff, GalerkinCutoff};
use micropolar::lp::{build_partition, dyadic_block};
use micropolar::spectral::random::{random_scalar, random_solenoidal, random_vector};
use micropolar::spectral::{
    inner_product_l2, leray_project, make_grid, sobolev_seminorm, transform_backward, transform_forward,
    PaddedVelocity, SpectralScalarField,
};

fn grid_for(dim: usize) -> std::sync::Arc<micropolar::spectral::Grid> {
    make_grid(dim, if dim == 2 { 32 } else { 16 }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transforms_roundtrip_and_preserve_norm(seed in any::<u64>(), dim in 2usize..=3, slope in -1.0f64..2.0) {
        let g = grid_for(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_scalar(&g, 7.0, slope, &mut rng);
        let samples = transform_backward(&f);
        let back = transform_forward(&g, &samples).unwrap();
        prop_assert!(back.axpy(-1.0, &f).unwrap().max_abs() <= 1e-13 * f.max_abs());
        let physical = samples.iter().map(|x| x * x).sum::<f64>() * g.volume() / samples.len() as f64;
        assert_relative_eq!(sobolev_seminorm(&f, 0.0).powi(2), physical, max_relative = 1e-12);
    }

    #[test]
    fn leray_projection_is_idempotent_and_solenoidal(seed in any::<u64>(), dim in 2usize..=3) {
        let g = grid_for(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_vector(&g, dim, 7.0, 0.5, &mut rng);
        let p = leray_project(&v).unwrap();
        prop_assert!(p.max_divergence() <= 1e-12 * v.max_abs());
        let pp = leray_project(&p).unwrap();
        prop_assert!(pp.axpy(-1.0, &p).unwrap().max_abs() <= 1e-14 * v.max_abs());
        prop_assert!(sobolev_seminorm(&p, 0.0) <= sobolev_seminorm(&v, 0.0) * (1.0 + 1e-14));
    }

    #[test]
    fn dyadic_blocks_sum_to_the_field(seed in any::<u64>(), dim in 2usize..=3) {
        let g = grid_for(dim);
        let part = build_partition(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_scalar(&g, g.n() as f64 / 2.0 - 1.0, 0.0, &mut rng);
        let mut sum = SpectralScalarField::zeros(&g);
        for j in -1..=part.j_top() {
            let b = dyadic_block(&f, &part, j);
            for l in -1..=part.j_top() {
                if (j - l).abs() >= 2 {
                    prop_assert_eq!(dyadic_block(&b, &part, l).max_abs(), 0.0);
                }
            }
            sum = sum.axpy(1.0, &b).unwrap();
        }
        prop_assert!(sum.axpy(-1.0, &f).unwrap().max_abs() <= 1e-14 * f.max_abs());
    }

    #[test]
    fn sobolev_interpolation(seed in any::<u64>(), s1 in 0.0f64..2.0, gap in 0.0f64..3.0, theta in 0.0f64..=1.0) {
        let g = grid_for(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_scalar(&g, 15.0, 1.0, &mut rng);
        let s2 = s1 + gap;
        let s0 = (1.0 - theta) * s1 + theta * s2;
        let rhs = sobolev_seminorm(&f, s1).powf(1.0 - theta) * sobolev_seminorm(&f, s2).powf(theta);
        prop_assert!(sobolev_seminorm(&f, s0) <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn transport_does_not_change_l2_norm(seed in any::<u64>(), dim in 2usize..=3) {
        let g = grid_for(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_solenoidal(&g, 7.0, 0.5, &mut rng);
        let f = random_scalar(&g, 7.0, 0.5, &mut rng);
        let adv = PaddedVelocity::new(&u).unwrap().advect_scalar(&f).unwrap();
        let scale = sobolev_seminorm(&adv, 0.0) * sobolev_seminorm(&f, 0.0);
        prop_assert!(inner_product_l2(&adv, &f).unwrap().abs() <= 1e-12 * scale);
    }

    #[test]
    fn galerkin_cutoff_is_a_projection(seed in any::<u64>(), radius in 1.0f64..10.0) {
        let g = grid_for(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_scalar(&g, 7.0, 0.0, &mut rng);
        let c = GalerkinCutoff::radius(radius);
        let once = apply_cutoff(&f, &c);
        let twice = apply_cutoff(&once, &c);
        prop_assert_eq!(twice.coefficients(), once.coefficients());
        prop_assert!(sobolev_seminorm(&once, 0.0) <= sobolev_seminorm(&f, 0.0));
    }

    #[test]
    fn weakened_symbols_are_monotone(alpha in 1.0f64..2.0, r in 0.5f64..1e4, factor in 1.0f64..10.0) {
        for g in g_registry() {
            let m = l_operator_symbol(alpha, &g).unwrap();
            let (a, b) = (m.eval(r), m.eval(r * factor));
            prop_assert!(a > 0.0 && b >= a * (1.0 - 1e-14), "{} at r = {r}", g.label());
        }
    }
}
