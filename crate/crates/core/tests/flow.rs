use halflow::flow::*;
use halflow::sampling::RandomSpectrum;
use halflow::spectral::*;
use halflow::{GridField64, Normalization};

fn small(amplitude: f64, seed: u64) -> InitialData {
    InitialData::Perturbed { point: None, amplitude, bandwidth: 4, decay: 1.0, seed }
}

#[test]
fn identity_map_is_a_discrete_fixed_point() {
    let cfg = FlowConfig::new(128, 2, 0.01, 2.0, InitialData::Identity);
    let u0 = cfg.initial.build::<f64>(cfg.grid().unwrap(), 2).unwrap();
    let integ = Integrator::from_config(&cfg);
    let mut s = FlowState::from_sphere(u0, cfg.lambda);
    for _ in 0..cfg.steps() {
        let next = integ.step(&s, 0.01).unwrap();
        assert!(next.u.max_abs_diff(&s.u).unwrap() < 1e-10);
        s = next;
    }
}

#[test]
fn perturbed_constant_breaks_stationarity() {
    let mut norm = Normalization::default();
    norm.pairing *= 1.01;
    let g = CircleGrid::new(64).unwrap();
    let u = SphereField::<f64>::identity(g, 2).unwrap();
    let s = FlowState::from_sphere(u, LambdaMethod::Quadrature);
    assert!(sphere_defect(&s, &Normalization::default()) < 1e-10);
    assert!(sphere_defect(&s, &norm) > 1e-3);
}

#[test]
fn unprojected_drift_is_first_order() {
    let drift = |dt: f64| {
        let mut cfg = FlowConfig::new(64, 3, dt, 1.0, small(0.3, 7));
        cfg.projection = false;
        cfg.cadence = usize::MAX;
        cfg.monitors.drift_limit = 1.0;
        run::<f64>(&cfg).unwrap().max_sphere_drift
    };
    let (a, b, c) = (drift(1.0 / 32.0), drift(1.0 / 64.0), drift(1.0 / 128.0));
    for q in [a / b, b / c] {
        assert!((1.6..=2.4).contains(&q), "{a} {b} {c}");
    }
}

#[test]
fn projected_runs_stay_on_the_sphere() {
    let cfg = FlowConfig::new(64, 3, 0.05, 2.0, small(0.5, 3));
    let out = run::<f64>(&cfg).unwrap();
    assert!(out.max_sphere_drift <= 1e-12);
}

#[test]
fn energy_decreases_and_dissipation_defect_shrinks_with_dt() {
    let defect = |dt: f64| {
        let mut cfg = FlowConfig::new(64, 3, dt, 1.0, small(0.3, 1));
        cfg.cadence = usize::MAX;
        let out = run::<f64>(&cfg).unwrap();
        assert_eq!(out.energy_increases, 0);
        assert_eq!(out.outcome, Outcome::Completed);
        out.dissipation_defect().abs()
    };
    let (a, b) = (defect(1.0 / 16.0), defect(1.0 / 32.0));
    assert!(a / b >= 1.6, "{a} {b}");
}

#[test]
fn unprojected_drift_monitor_halts() {
    let mut cfg = FlowConfig::new(32, 3, 0.1, 5.0, small(0.6, 2));
    cfg.projection = false;
    cfg.monitors.drift_limit = 1e-4;
    let out = run::<f64>(&cfg).unwrap();
    match out.outcome {
        Outcome::Halted { event } => assert_eq!(event.label, "sphere_drift"),
        other => panic!("expected a halt, got {other:?}"),
    }
}

#[test]
fn diagnostics_csv_and_snapshots() {
    let mut cfg = FlowConfig::new(32, 2, 0.1, 0.5, InitialData::Identity);
    cfg.snapshot_cadence = Some(2);
    let out = run::<f64>(&cfg).unwrap();
    let mut buf = Vec::new();
    write_diagnostics_csv(&out.diagnostics, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,energy,dissipation,sphere_drift,orth_residual,harmonic_residual,eps_R");
    assert_eq!(text.lines().count(), 1 + out.diagnostics.len());
    assert_eq!(out.trajectory.len(), 3);
    let mut js = Vec::new();
    write_snapshot_json(&out.trajectory.snapshots[1], &mut js).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&js).unwrap();
    assert_eq!(v["grid_size"], 32);
    assert_eq!(v["values"].as_array().unwrap().len(), 2);
}

#[test]
fn twin_divergence_is_first_order() {
    let cfg = FlowConfig::new(32, 3, 0.1, 2.0, small(0.3, 7));
    let dts = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];
    let r = twin_run::<f64>(&cfg, Scheme::Exponential, Scheme::SemiImplicit, &dts).unwrap();
    assert!(r.passes, "{:?}", r.rows);
}

#[test]
fn linearized_growth_bound_and_normal_direction() {
    let g = CircleGrid::new(64).unwrap();
    let u = SphereField::<f64>::degree(g, 3, 2).unwrap();
    let lin = Linearization::new(u.field(), &Normalization::default());
    assert!((lin.sup_lambda() - 2.0).abs() < 1e-12);
    let c = lin.growth_constant();
    let dt = 1.0 / 128.0;
    for seed in 0..5 {
        let h0: GridField64 = RandomSpectrum::new(3, 8, 1.0).sample(g, seed).unwrap();
        for (n, h) in lin.evolve(&h0, dt, 128).unwrap().iter().enumerate() {
            assert!(h.sup_norm() <= (c * n as f64 * dt).exp() * h0.sup_norm() * (1.0 + 1e-12));
        }
    }
    // h = u grows at rate 2 sup λ, faster than sup λ + 1
    let hs = lin.evolve(u.field(), dt, 128).unwrap();
    let rate = hs[128].sup_norm().ln();
    assert!(rate > lin.sup_lambda() + 1.0 + 0.5, "{rate}");
    assert!(rate <= c + 1e-9);
}

#[test]
fn local_energy_and_eps() {
    let g = CircleGrid::new(128).unwrap();
    let id = SphereField::<f64>::identity(g, 2).unwrap();
    let e = local_energy(id.field(), 0.3, std::f64::consts::FRAC_PI_2).unwrap();
    assert!((e - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    let c = SphereField::<f64>::constant(g, &[0.0, 1.0]).unwrap();
    assert_eq!(local_energy_sup(c.field(), 0.5).unwrap(), 0.0);
    assert!(local_energy(id.field(), 0.0, 0.0).is_err());
}

#[test]
fn single_precision_flow_runs() {
    let cfg = FlowConfig::new(32, 3, 0.05, 1.0, small(0.3, 4));
    let out = run::<f32>(&cfg).unwrap();
    assert_eq!(out.outcome, Outcome::Completed);
    assert!(out.energies.last().unwrap() < &out.initial_energy);
}

#[test]
fn config_roundtrips_through_json() {
    let mut cfg = FlowConfig::new(64, 3, 0.01, 1.0, small(0.2, 9));
    cfg.scheme = Scheme::SemiImplicit;
    let text = serde_json::to_string(&cfg).unwrap();
    let back: FlowConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cfg);
    let bad = text.replace("\"dt\"", "\"delta_t\"");
    assert!(serde_json::from_str::<FlowConfig>(&bad).is_err());
}
