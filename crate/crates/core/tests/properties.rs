use halflow::fractional::{build_table, cjk, lambda_raw_field};
use halflow::sampling::RandomSpectrum;
use halflow::spectral::*;
use halflow::GridField64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cjk_is_symmetric_and_bounded(j in -40i64..40, k in -40i64..40) {
        let c = cjk(j, k);
        prop_assert!((c - cjk(k, j)).abs() < 1e-9);
        prop_assert!((c - cjk(-j, -k)).abs() < 1e-9);
        let bound = std::f64::consts::TAU * ((j.abs() * k.abs()) as f64).sqrt();
        prop_assert!(c.abs() <= bound + 1e-9);
        prop_assert!(c >= -1e-9);
    }

    #[test]
    fn table_agrees_with_single_evaluations(j in -12i64..=12, k in -12i64..=12) {
        let t = build_table(12);
        prop_assert!((t.get(j, k).unwrap() - cjk(j, k)).abs() < 1e-9);
    }

    #[test]
    fn roundtrip_and_energy_nonnegative(seed in 0u64..1000, band in 1usize..30) {
        let g = CircleGrid::new(64).unwrap();
        let f: GridField64 = RandomSpectrum::new(2, band, 1.0).sample(g, seed).unwrap();
        let c = analyze(&f);
        prop_assert!(synthesize(&c, g).unwrap().max_abs_diff(&f).unwrap() < 1e-12 * f.sup_norm().max(1.0));
        prop_assert!(energy_of(&c) >= 0.0);
        prop_assert!(c.conjugate_symmetry_defect() < 1e-14);
    }

    #[test]
    fn lambda_raw_is_nonnegative_and_shift_invariant(seed in 0u64..1000) {
        let g = CircleGrid::new(32).unwrap();
        let f: GridField64 = RandomSpectrum::new(3, 6, 1.0).sample(g, seed).unwrap();
        let lam = lambda_raw_field(&f);
        prop_assert!(lam.component(0).iter().all(|v| *v >= -1e-12));
        let shifted = f.map(|v| v + 0.37);
        prop_assert!(lambda_raw_field(&shifted).max_abs_diff(&lam).unwrap() < 1e-10 * lam.sup_norm().max(1.0));
    }

    #[test]
    fn projection_lands_on_the_sphere(seed in 0u64..1000, amp in 0.0f64..0.9) {
        let g = CircleGrid::new(32).unwrap();
        let u = halflow::sampling::perturbed_sphere::<f64>(g, &[0.0, 0.0, 1.0], amp, 5, 1.0, seed).unwrap();
        prop_assert!(u.max_drift() <= 1e-14);
    }

    #[test]
    fn heat_flow_never_increases_energy(seed in 0u64..1000, t in 0.0f64..3.0) {
        let g = CircleGrid::new(64).unwrap();
        let c = RandomSpectrum::new(1, 20, 0.5).draw::<f64>(g, seed).unwrap();
        prop_assert!(energy_of(&heat_propagate(&c, t).unwrap()) <= energy_of(&c) * (1.0 + 1e-14));
    }
}
