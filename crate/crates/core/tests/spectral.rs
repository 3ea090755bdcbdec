use halflow::sampling::RandomSpectrum;
use halflow::spectral::*;
use halflow::{GridField64, SpectralField32};
use num_complex::Complex;
use std::f64::consts::{PI, TAU};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn transform_roundtrip_is_exact_on_band_limited_fields() {
    let g = CircleGrid::new(256).unwrap();
    let f: GridField64 = RandomSpectrum::new(3, 100, 0.5).sample(g, 1).unwrap();
    let back = synthesize(&analyze(&f), g).unwrap();
    assert!(back.max_abs_diff(&f).unwrap() <= 1e-12 * f.sup_norm());
}

#[test]
fn parseval_holds() {
    let g = CircleGrid::new(128).unwrap();
    let f: GridField64 = RandomSpectrum::new(2, 40, 1.0).sample(g, 2).unwrap();
    let c = analyze(&f);
    let spectral = TAU * c.weighted_sum(|_| 1.0);
    assert!(rel(spectral, f.l2_norm().powi(2)) < 1e-12);
}

#[test]
fn multipliers_match_closed_forms() {
    let g = CircleGrid::new(256).unwrap();
    let f = GridField64::from_fn(g, 1, |x, _| (5.0 * x).sin() + 0.5 * (17.0 * x).cos());
    let s = 0.3;
    let lap = grid_fractional_laplacian(&f, s);
    let exact = GridField64::from_fn(g, 1, |x, _| 5f64.powf(2.0 * s) * (5.0 * x).sin() + 0.5 * 17f64.powf(2.0 * s) * (17.0 * x).cos());
    assert!(lap.max_abs_diff(&exact).unwrap() < 1e-12 * exact.sup_norm());
    let d = grid_derivative(&f);
    let exact_d = GridField64::from_fn(g, 1, |x, _| 5.0 * (5.0 * x).cos() - 8.5 * (17.0 * x).sin());
    assert!(d.max_abs_diff(&exact_d).unwrap() < 1e-12 * exact_d.sup_norm());
}

#[test]
fn heat_semigroup_composes() {
    let g = CircleGrid::new(256).unwrap();
    let c = RandomSpectrum::new(2, 60, 0.5).draw::<f64>(g, 3).unwrap();
    let ab = heat_propagate(&heat_propagate(&c, 0.3).unwrap(), 0.45).unwrap();
    let direct = heat_propagate(&c, 0.75).unwrap();
    assert!(ab.max_abs_diff(&direct) <= 1e-12 * direct.max_abs());
    assert!(heat_propagate(&c, -1e-3).is_err());
    assert_eq!(heat_propagate(&c, 0.0).unwrap(), c);
}

#[test]
fn sobolev_norms_of_a_single_mode() {
    let g = CircleGrid::new(64).unwrap();
    // real field cos(3x): coefficients 1/2 at ±3
    let f = GridField64::from_fn(g, 1, |x, _| (3.0 * x).cos());
    let c = analyze(&f);
    let inhom = sobolev_norm(&c, 0.5, false).powi(2);
    assert!(rel(inhom, PI * 10f64.sqrt()) < 1e-12);
    let hom = sobolev_norm(&c, 0.5, true).powi(2);
    assert!(rel(hom, 3.0 * PI) < 1e-12);
    assert!(rel(energy_of(&c), 1.5 * PI) < 1e-12);
}

#[test]
fn identity_and_degree_maps_have_closed_form_energy() {
    let g = CircleGrid::new(128).unwrap();
    for q in 1..5i64 {
        let u = SphereField::<f64>::degree(g, 2, q).unwrap();
        assert!(rel(half_energy(&u), PI * q as f64) < 1e-12);
    }
}

#[test]
fn complex_transform_of_exponential() {
    let g = CircleGrid::new(32).unwrap();
    let vals: Vec<Complex<f64>> = g.nodes::<f64>().iter().map(|x| Complex::new(0.0, *x).exp()).collect();
    let c = analyze_complex(g, &vals).unwrap();
    assert!((c.coeff(0, 1) - Complex::new(1.0, 0.0)).norm() < 1e-14);
    assert!(c.coeff(0, -1).norm() < 1e-14);
}

#[test]
fn mollifier_convolution_approximates_the_field() {
    let g = CircleGrid::new(512).unwrap();
    let f = GridField64::from_fn(g, 1, |x, _| x.sin());
    let m = BumpMollifier::new();
    let e1 = m.convolve(&f, 0.1).unwrap().max_abs_diff(&f).unwrap();
    let e2 = m.convolve(&f, 0.05).unwrap().max_abs_diff(&f).unwrap();
    assert!(e1 > 0.0 && (e1 / e2 - 4.0).abs() < 0.1, "{e1} {e2}");
}

#[test]
fn single_precision_pipeline_runs() {
    let g = CircleGrid::new(64).unwrap();
    let u = SphereField::<f32>::identity(g, 2).unwrap();
    let c: SpectralField32 = analyze(u.field());
    assert!((half_energy(&u) - std::f32::consts::PI).abs() < 1e-4);
    let back = synthesize(&c, g).unwrap();
    assert!(back.max_abs_diff(u.field()).unwrap() < 1e-5);
    assert!(u.max_drift() < 1e-6);
}
