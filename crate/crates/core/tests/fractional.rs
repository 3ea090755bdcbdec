use halflow::fractional::*;
use halflow::sampling::RandomSpectrum;
use halflow::spectral::*;
use halflow::GridField64;
use std::f64::consts::{PI, TAU};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn fejer_identity_and_cauchy_schwarz_bound() {
    for j in 1..=64i64 {
        assert!(rel(cjk(j, -j), TAU * j as f64) < 1e-6);
    }
    let t = build_table(32);
    let mut violations = 0;
    for j in -32..=32i64 {
        for k in -32..=32i64 {
            let bound = TAU * ((j.abs() * k.abs()) as f64).sqrt();
            if t.get(j, k).unwrap().abs() > bound * (1.0 + 1e-12) + 1e-12 {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn table_csv_roundtrip_has_all_rows() {
    let t = build_table(8);
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().count(), 1 + 17 * 17);
    assert_eq!(CjkTable::read_csv(buf.as_slice()).unwrap(), t);
}

#[test]
fn fracgrad_ratio_is_two_pi() {
    let g = CircleGrid::new(256).unwrap();
    for seed in 0..10 {
        let f: GridField64 = RandomSpectrum::new(2, 32, 1.0).sample(g, seed).unwrap();
        let lhs = gradient_pairing(&f, &f).unwrap().integrals()[0];
        let rhs = sobolev_norm(&analyze(&f), 0.5, true).powi(2);
        assert!(rel(lhs / rhs, TAU) < 1e-10, "seed {seed}: {}", lhs / rhs);
    }
}

#[test]
fn lambda_paths_agree_and_identity_gives_two_pi() {
    let g = CircleGrid::new(128).unwrap();
    let u = halflow::sampling::perturbed_sphere::<f64>(g, &[0.0, 0.0, 1.0], 0.5, 6, 1.0, 9).unwrap();
    let q = lambda_raw(&u);
    let s = lambda_raw_spectral(u.field());
    // the projected map keeps a small Nyquist remainder that only the quadrature sees
    let e = q.max_abs_diff(&s).unwrap();
    assert!(e < 1e-8 * q.sup_norm(), "{e} {}", q.sup_norm());
    let id = SphereField::<f64>::identity(g, 2).unwrap();
    for v in lambda_raw(&id).component(0) {
        assert!((v - TAU).abs() < 1e-12);
    }
}

#[test]
fn divergence_of_gradient_and_duality() {
    let g = CircleGrid::new(64).unwrap();
    let f: GridField64 = RandomSpectrum::new(1, 12, 1.0).sample(g, 4).unwrap();
    let phi: GridField64 = RandomSpectrum::new(1, 12, 1.0).sample(g, 5).unwrap();
    let df = frac_gradient_kernel(&f, 0.5).unwrap();
    let div = frac_divergence(&df, 0.5).unwrap();
    let expect = grid_fractional_laplacian(&f, 0.5).scale(TAU);
    assert!(div.max_abs_diff(&expect).unwrap() < 1e-10 * expect.sup_norm());
    // ∫∫ F d_sφ dxdy/|x−y| = ∫ φ div_s F, with the antisymmetrized F
    let lhs = duality_pairing(&df, &phi, 0.5).unwrap();
    let rhs: f64 = div.component(0).iter().zip(phi.component(0)).map(|(a, b)| a * b).sum::<f64>() * g.spacing::<f64>();
    assert!(rel(lhs, rhs) < 1e-10, "{lhs} {rhs}");
}

#[test]
fn decomposition_identity_for_generic_sphere_data() {
    for (n, seed) in [(256, 0), (256, 1), (512, 2)] {
        let g = CircleGrid::new(n).unwrap();
        let u = halflow::sampling::perturbed_sphere::<f64>(g, &[0.0, 0.6, 0.8], 0.3, 4, 1.0, seed).unwrap();
        let om = omega_potential(&u).unwrap();
        let du = frac_gradient_kernel(u.field(), 0.5).unwrap();
        let lam = lambda_raw(&u);
        let lhs = u.field().mul_scalar_field(lam.component(0)).unwrap();
        let rhs = matrix_pair(&om, &du).unwrap().add(&t_functional(u.field(), u.field(), u.field()).unwrap()).unwrap();
        let scale = lam.sup_norm();
        let e = lhs.max_abs_diff(&rhs).unwrap();
        assert!(e <= 1e-8 * scale, "N = {n}: {e} vs {scale}");
    }
}

#[test]
fn identity_omega_is_divergence_free() {
    let g = CircleGrid::new(256).unwrap();
    let u = SphereField::<f64>::identity(g, 2).unwrap();
    let div = frac_divergence(&omega_potential(&u).unwrap(), 0.5).unwrap();
    assert!(div.sup_norm() < 1e-10);
}

#[test]
fn divergence_correction_removes_generic_divergence() {
    let g = CircleGrid::new(64).unwrap();
    let u = halflow::sampling::perturbed_sphere::<f64>(g, &[0.0, 0.0, 1.0], 0.8, 4, 1.0, 2).unwrap();
    let om = omega_potential(&u).unwrap();
    let before = frac_divergence(&om, 0.5).unwrap();
    let fixed = divfree_correction(&om, &Normalization::default()).unwrap();
    let after = frac_divergence(&fixed.kernel, 0.5).unwrap();
    let centered = before.sub(&GridField64::from_fn(g, 9, |_, c| fixed.removed_mean[c])).unwrap();
    assert!(centered.sup_norm() > 1e-3);
    assert!(after.sup_norm() * 1e3 <= centered.sup_norm(), "{} {}", after.sup_norm(), centered.sup_norm());
}

#[test]
fn product_spectrum_matches_direct_quadrature() {
    let g = CircleGrid::new(256).unwrap();
    let table = build_table(32);
    let u: GridField64 = RandomSpectrum::new(2, 32, 0.5).sample(g, 7).unwrap();
    let v: GridField64 = RandomSpectrum::new(2, 32, 0.5).sample(g, 8).unwrap();
    let spec = product_spectrum(&analyze(&u), &analyze(&v), &table).unwrap();
    let direct = analyze(&gradient_pairing(&u, &v).unwrap());
    let err = spec.with_max_mode(direct.max_mode()).max_abs_diff(&direct);
    assert!(err <= 1e-9 * direct.max_abs(), "{err}");
}

#[test]
fn product_of_unit_modes_is_constant_two_pi() {
    let g = CircleGrid::new(32).unwrap();
    let e = GridField64::from_fn(g, 2, |x, c| if c == 0 { x.cos() } else { x.sin() });
    let p = gradient_pairing(&e, &e).unwrap();
    for v in p.component(0) {
        assert!((v - TAU).abs() < 1e-12);
    }
    assert!(rel(p.integrals()[0], 2.0 * PI * TAU) < 1e-12);
}
