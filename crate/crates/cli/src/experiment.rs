use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use halflow::flow::{long_time_harness, run, twin_run, write_diagnostics_csv, write_snapshot_json, Outcome, Verdict};
use halflow::fractional::build_table;
use halflow::Error;
use serde::Serialize;
use serde_json::json;

use crate::artifacts::{digest, ArtifactDir, Manifest, MANIFEST};
use crate::config::{ExperimentConfig, Kind};
use crate::report::{render_table, write_summary_csv};
use crate::suite::{find_check, run_checks, CheckReport, CheckSpec, CheckVerdict, SuiteOptions, TimedReport, CHECKS};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitStatus {
    Pass = 0,
    Malformed = 1,
    CheckFailed = 2,
    IntegrationFailed = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn of_error(e: &Error) -> Self {
        match e {
            Error::Domain(_) => ExitStatus::CheckFailed,
            Error::Integration { .. } => ExitStatus::IntegrationFailed,
            _ => ExitStatus::Malformed,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub level: Option<crate::suite::Level>,
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub status: ExitStatus,
    pub dir: PathBuf,
    /// Human-readable summary for stdout.
    pub summary: String,
    /// Per-check wall times for suite runs.
    pub timings: Vec<(String, f64)>,
}

/// Output directory: --out, then the config's `out`, then $HALFLOW_OUT/<name>, then ./halflow-out/<name>.
pub fn output_dir(cfg: &ExperimentConfig, over: &Overrides) -> PathBuf {
    if let Some(d) = over.out.as_ref().or(cfg.out.as_ref()) {
        return d.clone();
    }
    let root = std::env::var_os("HALFLOW_OUT").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("halflow-out"));
    root.join(cfg.run_name())
}

/// Applies overrides and seeds; the result is what the digest covers.
pub fn resolve(mut cfg: ExperimentConfig, over: &Overrides) -> ExperimentConfig {
    if over.seed.is_some() {
        cfg.seed = over.seed;
    }
    if over.level.is_some() {
        cfg.level = over.level;
    }
    if let (Some(seed), Some(flow)) = (cfg.seed, cfg.flow.as_mut()) {
        flow.initial = flow.initial.clone().with_seed(seed);
    }
    cfg.out = None;
    cfg
}

pub fn run_experiment(cfg: ExperimentConfig, over: &Overrides) -> io::Result<ExperimentOutcome> {
    let dir = output_dir(&cfg, over);
    let cfg = resolve(cfg, over);
    let start = Instant::now();
    let mut out = ArtifactDir::create(&dir)?;
    let (status, summary, timings) = match dispatch(&cfg, &mut out) {
        Ok(r) => r,
        Err(DispatchError::Io(e)) => return Err(e),
        Err(DispatchError::Flow(e)) => (ExitStatus::of_error(&e), format!("{}: {e}", cfg.kind), Vec::new()),
    };
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        kind: cfg.kind.to_string(),
        config_digest: digest(&cfg),
        seed: cfg.seed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        exit_status: status.code(),
        artifacts: out.written().to_vec(),
    };
    out.write_json(MANIFEST, &manifest)?;
    Ok(ExperimentOutcome { status, dir, summary, timings })
}

enum DispatchError {
    Io(io::Error),
    Flow(Error),
}

impl From<io::Error> for DispatchError {
    fn from(e: io::Error) -> Self {
        DispatchError::Io(e)
    }
}

impl From<Error> for DispatchError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => DispatchError::Io(io),
            other => DispatchError::Flow(other),
        }
    }
}

type Dispatched = (ExitStatus, String, Vec<(String, f64)>);

fn to_io(e: Error) -> io::Error {
    match e {
        Error::Io(e) => e,
        other => io::Error::other(other.to_string()),
    }
}

fn dispatch(cfg: &ExperimentConfig, out: &mut ArtifactDir) -> Result<Dispatched, DispatchError> {
    match &cfg.kind {
        Kind::Flow => flow(cfg, out),
        Kind::Twin => twin(cfg, out),
        Kind::LongTime => longtime(cfg, out),
        Kind::CjkTable => cjk_table(cfg, out),
        Kind::VerifyAll => {
            let all: Vec<&CheckSpec> = CHECKS.iter().collect();
            suite(cfg, out, &all)
        }
        Kind::Inequality(name) => {
            let spec = find_check(name).ok_or_else(|| Error::Config(format!("unknown check {name}")))?;
            suite(cfg, out, &[spec])
        }
    }
}

fn flow(cfg: &ExperimentConfig, out: &mut ArtifactDir) -> Result<Dispatched, DispatchError> {
    let fc = cfg.flow.as_ref().expect("validated");
    let r = run::<f64>(fc)?;
    out.write_with("diagnostics.csv", |w| write_diagnostics_csv(&r.diagnostics, w).map_err(to_io))?;
    for (i, snap) in r.trajectory.snapshots.iter().enumerate() {
        out.write_with(&format!("snapshots/snapshot_{i:05}.json"), |w| write_snapshot_json(snap, w).map_err(to_io))?;
    }
    let final_energy = r.energies.last().copied().unwrap_or(r.initial_energy);
    out.write_json(
        "result.json",
        &json!({
            "outcome": r.outcome,
            "steps_taken": r.steps_taken,
            "initial_energy": r.initial_energy,
            "final_energy": final_energy,
            "energy_increases": r.energy_increases,
            "max_sphere_drift": r.max_sphere_drift,
            "dissipation_defect": r.dissipation_defect(),
            "events": r.events,
        }),
    )?;
    let status = match r.outcome {
        Outcome::Completed => ExitStatus::Pass,
        Outcome::Halted { .. } => ExitStatus::CheckFailed,
        Outcome::Failed { .. } => ExitStatus::IntegrationFailed,
    };
    let summary = format!(
        "flow: {:?} after {} steps, energy {:.6e} -> {:.6e}, {} energy increases",
        r.outcome, r.steps_taken, r.initial_energy, final_energy, r.energy_increases
    );
    Ok((status, summary, Vec::new()))
}

fn twin(cfg: &ExperimentConfig, out: &mut ArtifactDir) -> Result<Dispatched, DispatchError> {
    let fc = cfg.flow.as_ref().expect("validated");
    let tp = cfg.twin.as_ref().expect("validated");
    let r = twin_run::<f64>(fc, tp.scheme_a, tp.scheme_b, &tp.dts)?;
    out.write_json("twin.json", &r)?;
    out.write_with("twin.csv", |w| {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["dt", "divergence", "ratio"])?;
        for row in &r.rows {
            wtr.write_record([row.dt.to_string(), row.divergence.to_string(), row.ratio.map_or(String::new(), |q| q.to_string())])?;
        }
        wtr.flush()
    })?;
    let status = if r.failure.is_some() {
        ExitStatus::IntegrationFailed
    } else if r.passes {
        ExitStatus::Pass
    } else {
        ExitStatus::CheckFailed
    };
    let ratios: Vec<String> = r.rows.iter().filter_map(|row| row.ratio).map(|q| format!("{q:.3}")).collect();
    Ok((status, format!("twin: divergence ratios [{}], first order: {}", ratios.join(", "), r.passes), Vec::new()))
}

fn longtime(cfg: &ExperimentConfig, out: &mut ArtifactDir) -> Result<Dispatched, DispatchError> {
    let fc = cfg.flow.as_ref().expect("validated");
    let spec = cfg.longtime.clone().unwrap_or_default();
    let r = long_time_harness::<f64>(fc, &spec)?;
    out.write_json("longtime.json", &r)?;
    out.write_with("longtime.csv", |w| {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["t", "energy", "deviation", "harmonic_residual", "dissipation_tail"])?;
        for s in &r.samples {
            wtr.write_record([
                s.t.to_string(),
                s.energy.to_string(),
                s.deviation.to_string(),
                s.harmonic_residual.to_string(),
                s.dissipation_tail.map_or(String::new(), |d| d.to_string()),
            ])?;
        }
        wtr.flush()
    })?;
    let status = if r.verdict == Verdict::Pass { ExitStatus::Pass } else { ExitStatus::CheckFailed };
    Ok((status, format!("longtime: {:?}, {}", r.verdict, r.note), Vec::new()))
}

fn cjk_table(cfg: &ExperimentConfig, out: &mut ArtifactDir) -> Result<Dispatched, DispatchError> {
    let jj = cfg.cjk.as_ref().expect("validated").max_frequency;
    let table = build_table(jj);
    out.write_with("cjk_table.csv", |w| table.write_csv(w).map_err(to_io))?;
    let worst = (1..=jj as i64)
        .map(|j| {
            let v = table.get(j, -j).unwrap_or(f64::NAN);
            (v - std::f64::consts::TAU * j as f64).abs() / (std::f64::consts::TAU * j as f64)
        })
        .fold(0.0, f64::max);
    let rows = (2 * jj + 1) * (2 * jj + 1);
    let status = if worst <= 1e-12 { ExitStatus::Pass } else { ExitStatus::CheckFailed };
    Ok((status, format!("cjk-table: {rows} rows, worst Fejér row deviation {worst:.3e}"), Vec::new()))
}

fn suite(cfg: &ExperimentConfig, out: &mut ArtifactDir, checks: &[&CheckSpec]) -> Result<Dispatched, DispatchError> {
    let mut opts = SuiteOptions::new(cfg.level.unwrap_or_default(), cfg.seed.expect("validated"));
    if let Some(n) = cfg.normalization {
        opts.normalization = n;
    }
    if let Some(f) = &cfg.family {
        opts.overrides = f.clone();
    }
    let timed: Vec<TimedReport> = run_checks(checks, &opts);
    let reports: Vec<CheckReport> = timed.iter().map(|t| t.report.clone()).collect();
    for r in &reports {
        out.write_json(&format!("checks/{}.json", r.check), r)?;
    }
    out.write_with("summary.csv", |w| write_summary_csv(&reports, w))?;
    let names: Vec<&str> = checks.iter().map(|c| c.name).collect();
    let (table, _) = render_table(&names, &reports.iter().map(Some).collect::<Vec<_>>());
    out.write_bytes("report.txt", table.as_bytes())?;
    let status = suite_status(&reports);
    let timings = timed.iter().map(|t| (t.report.check.clone(), t.seconds)).collect();
    Ok((status, table, timings))
}

fn suite_status(reports: &[CheckReport]) -> ExitStatus {
    reports
        .iter()
        .map(|r| match r.verdict {
            CheckVerdict::Pass => ExitStatus::Pass,
            CheckVerdict::Fail | CheckVerdict::Refused => ExitStatus::CheckFailed,
            CheckVerdict::Error => ExitStatus::IntegrationFailed,
        })
        .max()
        .unwrap_or(ExitStatus::Pass)
}

/// Loads, runs and reports; malformed configs come back as `Malformed` with the diagnostic.
pub fn run_config_file(path: &Path, over: &Overrides) -> ExperimentOutcome {
    let cfg = match ExperimentConfig::load(path) {
        Ok(c) => c,
        Err(e) => {
            return ExperimentOutcome { status: ExitStatus::Malformed, dir: PathBuf::new(), summary: e.to_string(), timings: Vec::new() }
        }
    };
    match run_experiment(cfg, over) {
        Ok(o) => o,
        Err(e) => ExperimentOutcome {
            status: ExitStatus::Malformed,
            dir: PathBuf::new(),
            summary: format!("cannot write artifacts: {e}"),
            timings: Vec::new(),
        },
    }
}
