use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn halflow(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_halflow"));
    cmd.args(args).env_remove("HALFLOW_OUT");
    if let Some(root) = env_out {
        cmd.env("HALFLOW_OUT", root);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn cjk_table_has_all_rows_and_fejer_values() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"kind": "cjk-table", "cjk": {"max_frequency": 64}}"#);
    let out = tmp.path().join("out");
    let o = halflow(&["--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(out.join("cjk_table.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 129 * 129);
    let mut fejer = 0;
    for r in &rows {
        let (j, k, v): (i64, i64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap());
        if k == -j && j != 0 {
            fejer += 1;
            assert!((v - std::f64::consts::TAU * j.abs() as f64).abs() < 1e-9 * v, "{j}: {v}");
        }
    }
    assert_eq!(fejer, 128);
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["kind"], "cjk-table");
    assert_eq!(manifest["config_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn identity_flow_has_constant_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "f.json",
        r#"{"kind": "flow", "flow": {"grid_size": 64, "components": 2, "dt": 0.01, "horizon": 0.5,
            "initial": {"family": "identity"}, "cadence": 5, "snapshot_cadence": 25}}"#,
    );
    let o = halflow(&["--config", &cfg], Some(tmp.path()));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = tmp.path().join("flow");
    let text = fs::read_to_string(dir.join("diagnostics.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,energy,dissipation,sphere_drift,orth_residual,harmonic_residual,eps_R");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert!(rows.len() > 5);
    for col in 1..7 {
        for r in &rows {
            assert!((r[col] - rows[0][col]).abs() <= 1e-10 * rows[0][col].abs().max(1.0), "column {col}");
        }
    }
    assert!(dir.join("snapshots/snapshot_00002.json").exists());
}

#[test]
fn malformed_config_exits_one_with_position() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.json", "{\n  \"kind\": \"flow\",\n  \"grid\": 3\n}");
    let o = halflow(&["--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()], None);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");
    assert!(!tmp.path().join("o").exists());

    let cfg = write_config(
        tmp.path(),
        "noseed.json",
        r#"{"kind": "flow", "flow": {"grid_size": 32, "components": 3, "dt": 0.1, "horizon": 1,
            "initial": {"family": "perturbed", "amplitude": 0.2, "bandwidth": 4, "seed": 1}}}"#,
    );
    let o = halflow(&["--config", &cfg], Some(tmp.path()));
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("field `seed`"));

    let cfg = write_config(tmp.path(), "kind.json", r#"{"kind": "ineq:nothing", "seed": 1}"#);
    assert_eq!(code(&halflow(&["--config", &cfg], Some(tmp.path()))), 1);
}

#[test]
fn halted_and_failed_runs_have_distinct_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let halt = write_config(
        tmp.path(),
        "halt.json",
        r#"{"kind": "flow", "seed": 2, "flow": {"grid_size": 32, "components": 3, "dt": 0.1, "horizon": 5,
            "projection": false, "monitors": {"drift_limit": 1e-4},
            "initial": {"family": "perturbed", "amplitude": 0.6, "bandwidth": 4, "seed": 0}}}"#,
    );
    assert_eq!(code(&halflow(&["--config", &halt], Some(tmp.path()))), 2);
    let blow = write_config(
        tmp.path(),
        "blow.json",
        r#"{"kind": "flow", "name": "blow", "seed": 1, "flow": {"grid_size": 256, "components": 3, "dt": 0.5, "horizon": 20,
            "scheme": "explicit-reference", "projection": false,
            "monitors": {"drift_limit": 1e300, "halt_on_energy_increase": false},
            "initial": {"family": "perturbed", "amplitude": 0.9, "bandwidth": 32, "seed": 0}}}"#,
    );
    assert_eq!(code(&halflow(&["--config", &blow], Some(tmp.path()))), 3);
    let result: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("blow/result.json")).unwrap()).unwrap();
    assert_eq!(result["outcome"]["status"], "failed");
}

#[test]
fn report_of_empty_directory_is_all_skipped() {
    let tmp = tempfile::tempdir().unwrap();
    let o = halflow(&["--report", tmp.path().to_str().unwrap()], None);
    assert_ne!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.matches("SKIPPED").count(), halflow_cli::CHECKS.len());
}

#[test]
fn single_check_with_overrides_and_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "l.json",
        r#"{"kind": "ineq:ladyzhenskaya", "seed": 3, "family": {"count": 20, "bandwidth": 16, "grid_size": 64}}"#,
    );
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    for (dir, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        let o = halflow(&["--config", &cfg, "--out", dir.to_str().unwrap(), "--seed", seed, "--threads", "2"], None);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    }
    let report = |d: &Path| fs::read(d.join("checks/ladyzhenskaya.json")).unwrap();
    assert_eq!(report(&a), report(&b));
    assert_ne!(report(&a), report(&c));
    let parsed: Value = serde_json::from_slice(&report(&a)).unwrap();
    assert_eq!(parsed["seed"], 5);
    assert_eq!(parsed["details"]["samples"].as_array().unwrap().len(), 20);
    let summary = fs::read_to_string(a.join("summary.csv")).unwrap();
    assert!(summary.starts_with("check,anchor,criterion,measured,tolerance,verdict\n"));
    let digest = |d: &Path| {
        let m: Value = serde_json::from_str(&fs::read_to_string(d.join("manifest.json")).unwrap()).unwrap();
        m["config_digest"].as_str().unwrap().to_string()
    };
    assert_eq!(digest(&a), digest(&b));
    assert_ne!(digest(&a), digest(&c));
}

#[test]
fn fast_suite_passes_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "v.json", r#"{"kind": "verify-all", "seed": 11}"#);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let oa = halflow(&["--config", &cfg, "--out", a.to_str().unwrap(), "--level", "fast"], None);
    assert_eq!(code(&oa), 0, "{}", String::from_utf8_lossy(&oa.stdout));
    let ob = halflow(&["--config", &cfg, "--out", b.to_str().unwrap(), "--threads", "1"], None);
    assert_eq!(code(&ob), 0);
    for spec in halflow_cli::CHECKS {
        let rel = format!("checks/{}.json", spec.name);
        assert_eq!(fs::read(a.join(&rel)).unwrap(), fs::read(b.join(&rel)).unwrap(), "{rel}");
    }
    assert_eq!(fs::read(a.join("summary.csv")).unwrap(), fs::read(b.join("summary.csv")).unwrap());

    let report = halflow(&["--report", a.to_str().unwrap()], None);
    assert_eq!(code(&report), 0);
    let text = String::from_utf8_lossy(&report.stdout);
    assert!(text.lines().filter(|l| l.trim_end().ends_with("PASS")).count() >= 15);
    assert!(text.contains("fractional Wente estimate") && text.contains("Ladyzhenskaya interpolation"));
}

#[test]
fn perturbed_constant_fails_the_stationarity_check() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "m.json",
        r#"{"kind": "ineq:identity_stationarity", "seed": 1, "normalization": {"pairing": 6.346017128, "div_grad": 6.283185307179586}}"#,
    );
    let o = halflow(&["--config", &cfg, "--out", tmp.path().join("m").to_str().unwrap()], None);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn twin_and_longtime_experiments() {
    let tmp = tempfile::tempdir().unwrap();
    let twin = write_config(
        tmp.path(),
        "t.json",
        r#"{"kind": "twin", "seed": 4, "flow": {"grid_size": 32, "components": 3, "dt": 0.03125, "horizon": 1,
            "initial": {"family": "perturbed", "amplitude": 0.3, "bandwidth": 4, "seed": 0}},
            "twin": {"dts": [0.03125, 0.015625, 0.0078125]}}"#,
    );
    assert_eq!(code(&halflow(&["--config", &twin], Some(tmp.path()))), 0);
    let csv_text = fs::read_to_string(tmp.path().join("twin/twin.csv")).unwrap();
    assert_eq!(csv_text.lines().count(), 4);

    let long = write_config(
        tmp.path(),
        "lt.json",
        r#"{"kind": "longtime", "seed": 4, "flow": {"grid_size": 64, "components": 3, "dt": 0.05, "horizon": 20,
            "initial": {"family": "perturbed", "amplitude": 0.3, "bandwidth": 4, "seed": 0}}}"#,
    );
    let o = halflow(&["--config", &long], Some(tmp.path()));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(tmp.path().join("longtime/longtime.csv").exists());
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        halflow_cli::ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 5);
}
