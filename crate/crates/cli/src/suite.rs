use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use halflow::flow::{
    long_time_harness, run, sphere_defect, twin_run, FlowConfig, FlowState, InitialData, Integrator, LongTimeSpec, Outcome,
    Scheme, Trajectory,
};
use halflow::fractional::{
    build_table, cjk, divfree_correction, frac_divergence, frac_gradient_kernel, gradient_pairing, lambda_raw, matrix_pair,
    omega_potential, product_spectrum, t_functional,
};
use halflow::sampling::{perturbed_sphere, RandomSpectrum};
use halflow::spectral::{analyze, grid_fractional_laplacian, heat_propagate, synthesize, CircleGrid, SphereField};
use halflow::{Error, GridField64, Normalization, Result};
use halflow_lab::{
    fracgrad, holder, ladyzhenskaya, mollify, norm_equiv, product, stereographic, struwe, wente, RatioReport, SampleFamily,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    /// N ≤ 512, about a minute in total.
    #[default]
    Fast,
    /// N ≤ 4096, the acceptance parameters.
    Full,
}

impl Level {
    fn pick<T>(self, fast: T, full: T) -> T {
        match self {
            Level::Fast => fast,
            Level::Full => full,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Refused,
    /// The computation itself failed (integration blow-up, invalid input).
    Error,
}

impl CheckVerdict {
    pub fn label(self) -> &'static str {
        match self {
            CheckVerdict::Pass => "PASS",
            CheckVerdict::Fail => "FAIL",
            CheckVerdict::Refused => "REFUSED",
            CheckVerdict::Error => "ERROR",
        }
    }
}

/// Overrides for the sample families of inequality checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyOverrides {
    pub count: Option<usize>,
    pub bandwidth: Option<usize>,
    pub grid_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub level: Level,
    pub seed: u64,
    pub normalization: Normalization,
    pub overrides: FamilyOverrides,
}

impl SuiteOptions {
    pub fn new(level: Level, seed: u64) -> Self {
        Self { level, seed, normalization: Normalization::default(), overrides: FamilyOverrides::default() }
    }

    fn count(&self, fast: usize, full: usize) -> usize {
        self.overrides.count.unwrap_or(self.level.pick(fast, full))
    }

    fn band(&self, fast: usize, full: usize) -> usize {
        self.overrides.bandwidth.unwrap_or(self.level.pick(fast, full))
    }

    fn grid(&self, fast: usize, full: usize) -> Result<CircleGrid> {
        CircleGrid::new(self.overrides.grid_size.unwrap_or(self.level.pick(fast, full)))
    }

    /// Independent seed per check.
    fn seed_for(&self, salt: u64) -> u64 {
        self.seed.wrapping_mul(0x2545_F491_4F6C_DD1D).wrapping_add(salt)
    }
}

/// One check's artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub anchor: String,
    pub criterion: Option<u8>,
    pub level: Level,
    pub seed: u64,
    #[serde(deserialize_with = "null_as_nan")]
    pub measured: f64,
    /// NaN when the check has no single scalar tolerance; written as null.
    #[serde(deserialize_with = "null_as_nan")]
    pub tolerance: f64,
    pub verdict: CheckVerdict,
    pub notes: Vec<String>,
    pub details: Value,
}

fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == CheckVerdict::Pass
    }
}

pub struct CheckSpec {
    pub name: &'static str,
    pub anchor: &'static str,
    pub criterion: Option<u8>,
    run: fn(&SuiteOptions) -> Result<Measured>,
}

impl CheckSpec {
    /// Runs the check; computation errors become an `Error` verdict.
    pub fn run(&self, opts: &SuiteOptions) -> CheckReport {
        let m = (self.run)(opts).unwrap_or_else(|e| Measured::error(e));
        CheckReport {
            check: self.name.to_string(),
            anchor: self.anchor.to_string(),
            criterion: self.criterion,
            level: opts.level,
            seed: opts.seed,
            measured: m.measured,
            tolerance: m.tolerance,
            verdict: m.verdict,
            notes: m.notes,
            details: m.details,
        }
    }
}

struct Measured {
    measured: f64,
    tolerance: f64,
    verdict: CheckVerdict,
    notes: Vec<String>,
    details: Value,
}

impl Measured {
    fn new(measured: f64, tolerance: f64, details: Value) -> Self {
        Self { measured, tolerance, verdict: CheckVerdict::Pass, notes: Vec::new(), details }
    }

    fn error(e: Error) -> Self {
        Self { measured: f64::NAN, tolerance: f64::NAN, verdict: CheckVerdict::Error, notes: vec![e.to_string()], details: Value::Null }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            if self.verdict == CheckVerdict::Pass {
                self.verdict = CheckVerdict::Fail;
            }
            self.notes.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn from_ratio(r: &RatioReport) -> Self {
        let verdict = match r.verdict {
            halflow_lab::Verdict::Pass => CheckVerdict::Pass,
            halflow_lab::Verdict::Fail => CheckVerdict::Fail,
            halflow_lab::Verdict::Refused => CheckVerdict::Refused,
        };
        Self {
            measured: r.measured,
            tolerance: r.tolerance,
            verdict,
            notes: r.notes.clone(),
            details: serde_json::to_value(r).unwrap_or(Value::Null),
        }
    }

    /// Combines sub-reports; the first one supplies the headline numbers.
    fn merge(parts: Vec<(&str, Measured)>) -> Self {
        let mut out = Measured::new(parts[0].1.measured, parts[0].1.tolerance, Value::Null);
        let mut details = serde_json::Map::new();
        for (name, m) in parts {
            if m.verdict != CheckVerdict::Pass && out.verdict != CheckVerdict::Error {
                out.verdict = if m.verdict == CheckVerdict::Error { CheckVerdict::Error } else { CheckVerdict::Fail };
            }
            out.notes.extend(m.notes.into_iter().map(|n| format!("{name}: {n}")));
            details.insert(name.to_string(), m.details);
        }
        out.details = Value::Object(details);
        out
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn integration_ok(o: &Outcome) -> Result<()> {
    match o {
        Outcome::Failed { t, reason } => Err(Error::Integration { t: *t, reason: reason.clone() }),
        _ => Ok(()),
    }
}

fn small_data(amplitude: f64, seed: u64) -> InitialData {
    InitialData::Perturbed { point: None, amplitude, bandwidth: 4, decay: 1.0, seed }
}

/// Every check of the suite, in report order.
pub const CHECKS: &[CheckSpec] = &[
    CheckSpec { name: "spectral_exactness", anchor: "Fourier multiplier calculus", criterion: Some(1), run: spectral_exactness },
    CheckSpec { name: "normalization_ledger", anchor: "Fejér kernel identity", criterion: Some(2), run: normalization_ledger },
    CheckSpec { name: "identity_stationarity", anchor: "sphere-preservation identity", criterion: Some(3), run: identity_stationarity },
    CheckSpec { name: "sphere_drift_order", anchor: "constraint preservation", criterion: Some(4), run: sphere_drift_order },
    CheckSpec { name: "energy_decay", anchor: "energy monotonicity", criterion: Some(5), run: energy_decay },
    CheckSpec { name: "twin_uniqueness", anchor: "uniqueness of energy solutions", criterion: Some(6), run: twin_uniqueness },
    CheckSpec { name: "long_time_convergence", anchor: "convergence to a constant map", criterion: Some(7), run: long_time_convergence },
    CheckSpec { name: "decomposition_identity", anchor: "antisymmetric potential decomposition", criterion: Some(8), run: decomposition_identity },
    CheckSpec { name: "product_spectrum_oracle", anchor: "fractional Leibniz spectrum", criterion: Some(9), run: product_spectrum_oracle },
    CheckSpec { name: "wente", anchor: "fractional Wente estimate", criterion: Some(10), run: wente_check },
    CheckSpec { name: "ladyzhenskaya", anchor: "Ladyzhenskaya interpolation", criterion: Some(11), run: ladyzhenskaya_check },
    CheckSpec { name: "product_regularity", anchor: "product regularity estimate", criterion: Some(11), run: product_check },
    CheckSpec { name: "norm_equivalence", anchor: "Triebel-Lizorkin norm equivalence", criterion: Some(11), run: norm_check },
    CheckSpec { name: "holder_probe", anchor: "Hölder bound for the fractional Laplacian", criterion: Some(11), run: holder_check },
    CheckSpec { name: "stereographic", anchor: "stereographic invariance", criterion: Some(12), run: stereographic_check },
    CheckSpec { name: "mollify_project", anchor: "Schoen-Uhlenbeck approximation", criterion: Some(13), run: mollify_check },
    CheckSpec { name: "struwe_l4", anchor: "local L4 space-time estimate", criterion: None, run: struwe_l4_check },
    CheckSpec { name: "local_energy", anchor: "local energy inequality", criterion: None, run: local_energy_check },
];

pub fn find_check(name: &str) -> Option<&'static CheckSpec> {
    CHECKS.iter().find(|c| c.name == name)
}

/// A report with the wall time of its check; the time never enters artifacts.
#[derive(Clone, Debug)]
pub struct TimedReport {
    pub report: CheckReport,
    pub seconds: f64,
}

/// Runs the given checks concurrently; results come back in the given order.
pub fn run_checks(checks: &[&CheckSpec], opts: &SuiteOptions) -> Vec<TimedReport> {
    checks
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let report = c.run(opts);
            TimedReport { report, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

/// Runs every registered check.
pub fn run_suite(opts: &SuiteOptions) -> Vec<TimedReport> {
    let all: Vec<&CheckSpec> = CHECKS.iter().collect();
    run_checks(&all, opts)
}

/// Roundtrip, multiplier and heat-semigroup errors on a band-limited field at N = 256.
fn spectral_exactness(opts: &SuiteOptions) -> Result<Measured> {
    let g = CircleGrid::new(256)?;
    let band = 100;
    let c = RandomSpectrum::new(3, band, 0.5).draw::<f64>(g, opts.seed_for(1))?;
    let f = synthesize(&c, g)?;
    let scale = f.sup_norm();
    let roundtrip = synthesize(&analyze(&f), g)?.max_abs_diff(&f)? / scale;

    // closed-form multiplier by direct trigonometric summation
    let s = 0.3;
    let exact = GridField64::from_fn(g, 3, |x, comp| {
        (-(band as i64)..=band as i64)
            .map(|k| (k.abs() as f64).powf(2.0 * s) * (c.coeff(comp, k) * num_complex::Complex::from_polar(1.0, k as f64 * x)).re)
            .sum()
    });
    let lap = grid_fractional_laplacian(&f, s);
    let multiplier = lap.max_abs_diff(&exact)? / exact.sup_norm();

    let (t1, t2) = (0.013, 0.029);
    let composed = synthesize(&heat_propagate(&heat_propagate(&c, t1)?, t2)?, g)?;
    let direct = synthesize(&heat_propagate(&c, t1 + t2)?, g)?;
    let heat = composed.max_abs_diff(&direct)? / direct.sup_norm();

    let worst = roundtrip.max(multiplier).max(heat);
    let mut m = Measured::new(worst, 1e-12, json!({"grid": 256, "bandwidth": band, "roundtrip": roundtrip, "multiplier": multiplier, "heat": heat}));
    m.require(worst <= 1e-12, "relative error above 1e-12");
    Ok(m)
}

/// Fejér identity by exact trapezoid quadrature, the Cauchy–Schwarz bound on the table,
/// and the fractional-gradient constant over a seeded family.
fn normalization_ledger(opts: &SuiteOptions) -> Result<Measured> {
    let nodes = 512;
    let mut fejer_worst = 0.0f64;
    for j in 1..=64i64 {
        let h = TAU / nodes as f64;
        let integral: f64 = (0..nodes)
            .map(|i| {
                if i == 0 {
                    (j * j) as f64
                } else {
                    let x = i as f64 * h;
                    ((j as f64 * x / 2.0).sin() / (x / 2.0).sin()).powi(2)
                }
            })
            .sum::<f64>()
            * h;
        fejer_worst = fejer_worst.max(rel(cjk(j, -j), integral)).max(rel(cjk(j, -j), TAU * j as f64));
    }
    let table = build_table(64);
    let mut violations = 0usize;
    for j in -64..=64i64 {
        for k in -64..=64i64 {
            let bound = TAU * ((j.abs() * k.abs()) as f64).sqrt();
            if table.get(j, k).map_or(true, |v| v.abs() > bound * (1.0 + 1e-12) + 1e-12) {
                violations += 1;
            }
        }
    }
    let family = SampleFamily::gaussian(opts.seed_for(2), opts.count(30, 100), opts.band(64, 128), 2, 0.5);
    let frac = fracgrad::fracgrad_constant(&family, opts.grid(512, 1024)?)?;
    let mut m = Measured::new(
        frac.max_ratio,
        fracgrad::FRACGRAD_TOLERANCE,
        json!({"fejer_worst_relative": fejer_worst, "cauchy_schwarz_violations": violations, "fracgrad": frac}),
    );
    m.note(format!("Fejér identity worst relative error {fejer_worst:.3e} for |j| <= 64"));
    m.note(format!("Cauchy-Schwarz bound violations: {violations}"));
    m.notes.extend(frac.notes.iter().cloned());
    m.require(fejer_worst <= 1e-6, "Fejér identity off by more than 1e-6");
    m.require(violations == 0, "Cauchy-Schwarz bound violated");
    m.require(frac.passed(), "fracgrad ratio differs from 2π");
    Ok(m)
}

/// Identity map under the projected exponential scheme: per-step change and the
/// normal residual of the flow vector, both with the configured constants.
fn identity_stationarity(opts: &SuiteOptions) -> Result<Measured> {
    let (n, steps) = opts.level.pick((256, 200), (512, 1000));
    let dt = 0.01;
    let mut cfg = FlowConfig::new(n, 2, dt, dt * steps as f64, InitialData::Identity);
    cfg.normalization = opts.normalization;
    let u0 = cfg.initial.build::<f64>(cfg.grid()?, 2)?;
    let integ = Integrator::from_config(&cfg);
    let mut s = FlowState::from_sphere(u0, cfg.lambda);
    let normal = sphere_defect(&s, &cfg.normalization);
    let mut worst_step = 0.0f64;
    for _ in 0..steps {
        let next = integ.step(&s, dt)?;
        worst_step = worst_step.max(next.u.max_abs_diff(&s.u)?);
        s = next;
    }
    let worst = worst_step.max(normal);
    let mut m = Measured::new(
        worst,
        1e-10,
        json!({"grid": n, "dt": dt, "steps": steps, "max_step_change": worst_step, "normal_residual": normal, "normalization": cfg.normalization}),
    );
    m.require(worst_step <= 1e-10, "identity map moves by more than 1e-10 per step");
    m.require(normal <= 1e-10, "flow vector has a normal component at the identity map");
    Ok(m)
}

fn drift_at(n: usize, dt: f64, seed: u64) -> Result<f64> {
    let mut cfg = FlowConfig::new(n, 3, dt, 1.0, small_data(0.3, seed));
    cfg.projection = false;
    cfg.cadence = usize::MAX;
    cfg.monitors.drift_limit = 1.0;
    let out = run::<f64>(&cfg)?;
    integration_ok(&out.outcome)?;
    Ok(out.max_sphere_drift)
}

/// Unprojected drift over T = 1 at dt, dt/2, dt/4.
fn sphere_drift_order(opts: &SuiteOptions) -> Result<Measured> {
    let (n, dt0) = opts.level.pick((64, 1.0 / 32.0), (128, 1.0 / 64.0));
    let seed = opts.seed_for(4);
    let dts = [dt0, dt0 / 2.0, dt0 / 4.0];
    let drifts: Vec<f64> = dts.iter().map(|&dt| drift_at(n, dt, seed)).collect::<Result<_>>()?;
    let ratios: Vec<f64> = drifts.windows(2).map(|w| w[0] / w[1]).collect();
    let worst = ratios.iter().map(|r| (r - 2.0).abs()).fold(0.0, f64::max);
    let mut m = Measured::new(worst, 0.4, json!({"grid": n, "dts": dts, "drifts": drifts, "ratios": ratios}));
    m.note(format!("drift ratios per halving {ratios:?}"));
    m.require(ratios.iter().all(|r| (1.6..=2.4).contains(r)), "drift not first order in dt");
    Ok(m)
}

/// Zero energy-increasing steps and a dissipation defect that shrinks at least linearly.
fn energy_decay(opts: &SuiteOptions) -> Result<Measured> {
    let n = opts.level.pick(64, 128);
    let seeds: Vec<u64> = (0..opts.level.pick(2, 4)).map(|i| opts.seed_for(50 + i)).collect();
    let dts = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let mut increases = 0usize;
    let mut worst_ratio = f64::INFINITY;
    let mut rows = Vec::new();
    for &seed in &seeds {
        let mut defects = Vec::new();
        for &dt in &dts {
            let mut cfg = FlowConfig::new(n, 3, dt, 1.0, small_data(0.3, seed));
            cfg.cadence = usize::MAX;
            cfg.monitors.halt_on_energy_increase = false;
            let out = run::<f64>(&cfg)?;
            integration_ok(&out.outcome)?;
            increases += out.energy_increases;
            defects.push(out.dissipation_defect().abs());
        }
        let ratios: Vec<f64> = defects.windows(2).map(|w| w[0] / w[1]).collect();
        worst_ratio = ratios.iter().copied().fold(worst_ratio, f64::min);
        rows.push(json!({"seed": seed, "defects": defects, "ratios": ratios}));
    }
    let mut m = Measured::new(increases as f64, 0.0, json!({"grid": n, "dts": dts, "runs": rows, "min_defect_ratio": worst_ratio}));
    m.note(format!("energy increases beyond 1e-8: {increases}; smallest defect ratio per halving {worst_ratio:.3}"));
    m.require(increases == 0, "energy increased on some step");
    m.require(worst_ratio >= 1.6, "dissipation defect not first order in dt");
    Ok(m)
}

/// Exponential against semi-implicit runs from the same data; divergence first order in dt.
fn twin_uniqueness(opts: &SuiteOptions) -> Result<Measured> {
    let (n, horizon, first) = opts.level.pick((32, 2.0, 5), (64, 5.0, 6));
    let dts: Vec<f64> = (first..=first + 4).map(|k| 0.5f64.powi(k)).collect();
    let cfg = FlowConfig::new(n, 3, dts[0], horizon, small_data(0.3, opts.seed_for(6)));
    let r = twin_run::<f64>(&cfg, Scheme::Exponential, Scheme::SemiImplicit, &dts)?;
    if let Some(f) = &r.failure {
        return Err(Error::Integration { t: f64::NAN, reason: f.clone() });
    }
    let ratios: Vec<f64> = r.rows.iter().filter_map(|row| row.ratio).collect();
    let worst = ratios.iter().map(|q| (q - 2.0).abs()).fold(0.0, f64::max);
    let mut m = Measured::new(worst, 0.4, serde_json::to_value(&r)?);
    m.note(format!("divergence ratios per halving {ratios:?}"));
    m.require(r.passes, "twin divergence not first order in dt");
    Ok(m)
}

fn long_time_convergence(opts: &SuiteOptions) -> Result<Measured> {
    let (n, horizon) = opts.level.pick((128, 20.0), (512, 50.0));
    let cfg = FlowConfig::new(n, 3, 0.05, horizon, small_data(0.3, opts.seed_for(7)));
    let spec = LongTimeSpec::default();
    let r = long_time_harness::<f64>(&cfg, &spec)?;
    let last = r.samples.last();
    let measured = last.map_or(f64::NAN, |s| s.energy);
    let mut m = Measured::new(measured, spec.energy_threshold, serde_json::to_value(&r)?);
    if let Some(s) = last {
        m.note(format!(
            "t = {}: energy {:.3e}, harmonic residual {:.3e}, deviation {:.3e}",
            s.t, s.energy, s.harmonic_residual, s.deviation
        ));
    }
    m.note(r.note.clone());
    m.require(r.verdict == halflow::flow::Verdict::Pass, format!("long-time verdict {:?}", r.verdict));
    Ok(m)
}

/// u λ_raw = Ω·d_{1/2}u + T(u) on generic sphere data, div Ω at the identity map, and the
/// divergence correction.
fn decomposition_identity(opts: &SuiteOptions) -> Result<Measured> {
    let n = 256;
    let g = CircleGrid::new(n)?;
    let mut worst = 0.0f64;
    for i in 0..opts.level.pick(1, 3) {
        let u = perturbed_sphere::<f64>(g, &[0.0, 0.6, 0.8], 0.3, 4, 1.0, opts.seed_for(80 + i))?;
        let om = omega_potential(&u)?;
        let du = frac_gradient_kernel(u.field(), 0.5)?;
        let lam = lambda_raw(&u);
        let lhs = u.field().mul_scalar_field(lam.component(0))?;
        let rhs = matrix_pair(&om, &du)?.add(&t_functional(u.field(), u.field(), u.field())?)?;
        worst = worst.max(lhs.max_abs_diff(&rhs)? / lam.sup_norm());
    }
    let id = SphereField::<f64>::identity(g, 2)?;
    let id_div = frac_divergence(&omega_potential(&id)?, 0.5)?.sup_norm();

    let gc = CircleGrid::new(64)?;
    let u = perturbed_sphere::<f64>(gc, &[0.0, 0.0, 1.0], 0.8, 4, 1.0, opts.seed_for(89))?;
    let om = omega_potential(&u)?;
    let before = frac_divergence(&om, 0.5)?;
    let fixed = divfree_correction(&om, &opts.normalization)?;
    let after = frac_divergence(&fixed.kernel, 0.5)?.sup_norm();
    let centered = before.sub(&GridField64::from_fn(gc, before.components(), |_, c| fixed.removed_mean[c]))?.sup_norm();
    let reduction = centered / after.max(f64::MIN_POSITIVE);

    let mut m = Measured::new(
        worst,
        1e-8,
        json!({"grid": n, "relative_error": worst, "identity_divergence": id_div, "divergence_before": centered, "divergence_after": after, "reduction": reduction}),
    );
    m.note(format!("decomposition error {worst:.3e} of sup λ_raw; identity div {id_div:.3e}; correction reduces divergence {reduction:.3e}x"));
    m.require(worst <= 1e-8, "decomposition identity error above 1e-8");
    m.require(id_div <= 1e-3, "identity potential not divergence free");
    m.require(reduction >= 1e3, "divergence correction gains less than 1e3");
    Ok(m)
}

/// Product spectrum of d_{1/2}u·d_{1/2}v against the direct pair quadrature.
fn product_spectrum_oracle(opts: &SuiteOptions) -> Result<Measured> {
    let (n, band) = opts.level.pick((512, 64), (1024, 128));
    let g = CircleGrid::new(n)?;
    let table = build_table(band);
    let mut worst = 0.0f64;
    for i in 0..2 {
        let u: GridField64 = RandomSpectrum::new(2, band, 0.5).sample(g, opts.seed_for(90 + 2 * i))?;
        let v: GridField64 = RandomSpectrum::new(2, band, 0.5).sample(g, opts.seed_for(91 + 2 * i))?;
        let spec = synthesize(&product_spectrum(&analyze(&u), &analyze(&v), &table)?, g)?;
        let direct = gradient_pairing(&u, &v)?;
        worst = worst.max(spec.sub(&direct)?.l2_norm() / direct.l2_norm());
    }
    let mut m = Measured::new(worst, 1e-4, json!({"grid": n, "bandwidth": band, "relative_l2_error": worst}));
    m.require(worst <= 1e-4, "product spectrum differs from quadrature");
    Ok(m)
}

fn wente_check(opts: &SuiteOptions) -> Result<Measured> {
    let family = SampleFamily::gaussian(opts.seed_for(10), opts.count(20, 50), opts.band(32, 64), 1, 0.5);
    let r = wente::wente_report(&wente::identity_source, &family, opts.grid(256, 512)?)?;
    Ok(Measured::from_ratio(&r))
}

fn ladyzhenskaya_check(opts: &SuiteOptions) -> Result<Measured> {
    let family = SampleFamily::gaussian(opts.seed_for(11), opts.count(200, 1000), opts.band(64, 128), 2, 0.5);
    let r = ladyzhenskaya::ladyzhenskaya_report(&family, opts.grid(256, 512)?)?;
    Ok(Measured::from_ratio(&r))
}

fn product_check(opts: &SuiteOptions) -> Result<Measured> {
    let (count, band) = (opts.count(50, 200), opts.band(8, 16));
    let u = SampleFamily::gaussian(opts.seed_for(12), count, band, 2, 1.0);
    let v = SampleFamily::gaussian(opts.seed_for(13), count, band, 2, 1.0);
    let r = product::product_regularity_report(&u, &v, 0.5, 0.125, opts.grid(256, 512)?)?;
    Ok(Measured::from_ratio(&r))
}

fn norm_check(opts: &SuiteOptions) -> Result<Measured> {
    let e = norm_equiv::Exponents::DEFAULT;
    let modes = norm_equiv::single_mode_ratios(CircleGrid::new(256)?, &[2, 4, 8, 16], e)?;
    let (lo, hi) = modes.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
    let mut single = Measured::new(hi / lo - 1.0, 0.05, json!({"modes": [2, 4, 8, 16], "ratios": modes}));
    single.require(hi / lo - 1.0 <= 0.05, "single-mode ratios depend on the frequency");
    let family = SampleFamily::gaussian(opts.seed_for(14), opts.count(40, 100), opts.band(16, 16), 1, 1.0);
    let r = norm_equiv::norm_equivalence_report(&family, opts.grid(128, 128)?, e)?;
    Ok(Measured::merge(vec![("family", Measured::from_ratio(&r)), ("single_modes", single)]))
}

fn holder_check(opts: &SuiteOptions) -> Result<Measured> {
    let pairs: &[(f64, f64)] = match opts.level {
        Level::Fast => &[(0.8, 0.3), (0.4, 0.3), (0.9, 0.05)],
        Level::Full => &[(0.8, 0.3), (0.4, 0.3), (0.9, 0.05), (0.7, 0.1), (0.3, 0.3), (0.5, 0.2), (0.35, 0.2)],
    };
    let resolutions: &[usize] = opts.level.pick(&[64, 128, 256, 512], &[512, 1024, 2048, 4096]);
    let (r, _) = holder::holder_laplacian_probe(pairs, resolutions)?;
    Ok(Measured::from_ratio(&r))
}

fn stereo_maps(seed: u64) -> Result<Vec<(&'static str, GridField64)>> {
    let g = CircleGrid::new(64)?;
    Ok(vec![
        ("identity", SphereField::<f64>::identity(g, 2)?.into_field()),
        ("degree2", SphereField::<f64>::degree(g, 2, 2)?.into_field()),
        ("latitude", InitialData::Latitude { polar_angle: 0.7, q: 1 }.build::<f64>(g, 3)?.into_field()),
        ("scalar", GridField64::from_fn(g, 1, |x, _| x.cos() + 0.5 * (3.0 * x).sin())),
        ("random", RandomSpectrum::new(3, 4, 1.0).sample(g, seed)?),
    ])
}

fn stereographic_check(opts: &SuiteOptions) -> Result<Measured> {
    let all_points = [0.0, 0.5, 1.0, FRAC_PI_2, 2.0, 2.5, PI, -1.0];
    let maps = stereo_maps(opts.seed_for(15))?;
    let (map_count, points, length, step): (usize, &[f64], f64, f64) = match opts.level {
        Level::Fast => (2, &[0.0, 1.0, 2.5], 200.0, 2e-3),
        Level::Full => (5, &all_points, 1e3, 1e-3),
    };
    let parts = maps
        .iter()
        .take(map_count)
        .map(|(name, u)| Ok((*name, Measured::from_ratio(&stereographic::stereographic_check(name, u, points, length, step)?))))
        .collect::<Result<Vec<_>>>()?;
    let worst = parts.iter().map(|(_, m)| m.measured).fold(0.0, f64::max);
    let mut m = Measured::merge(parts);
    m.measured = worst;
    Ok(m)
}

fn mollify_check(opts: &SuiteOptions) -> Result<Measured> {
    let (n, last) = opts.level.pick((512, 5), (2048, 7));
    let g = CircleGrid::new(n)?;
    let schedule: Vec<f64> = (3..=last).map(|k| 0.5f64.powi(k)).collect();
    let smooth = InitialData::Latitude { polar_angle: 0.7, q: 1 }.build::<f64>(g, 3)?;
    // a sharp transition of width 0.02; random high-band data is not monotone while ε exceeds its feature scale
    let steep = InitialData::MollifiedStep { angle: 2.5, half_width: 0.8, epsilon: 0.02 }.build::<f64>(g, 2)?;
    let (a, _) = mollify::approximation_report("latitude", &smooth, &schedule)?;
    let (b, _) = mollify::approximation_report("steep", &steep, &schedule)?;
    let mut m = Measured::merge(vec![("latitude", Measured::from_ratio(&a)), ("steep", Measured::from_ratio(&b))]);
    m.tolerance = f64::NAN;
    Ok(m)
}

fn trajectory(n: usize, dt: f64, horizon: f64, init: InitialData) -> Result<Trajectory<f64>> {
    let mut c = FlowConfig::new(n, 3, dt, horizon, init);
    c.snapshot_cadence = Some((0.05 / dt).round() as usize);
    c.cadence = usize::MAX;
    let out = run::<f64>(&c)?;
    integration_ok(&out.outcome)?;
    Ok(out.trajectory)
}

fn struwe_l4_check(opts: &SuiteOptions) -> Result<Measured> {
    let n = opts.level.pick(128, 512);
    let data = small_data(0.3, opts.seed_for(17));
    let coarse = trajectory(n, 0.01, 1.0, data.clone())?;
    let fine = trajectory(2 * n, 0.01, 1.0, data)?;
    Ok(Measured::from_ratio(&struwe::local_l4_monitor(&coarse, &fine, 0.3, 0.25, 0.05)?))
}

fn local_energy_check(opts: &SuiteOptions) -> Result<Measured> {
    let n = opts.level.pick(64, 128);
    let data = small_data(0.3, opts.seed_for(18));
    let coarse = trajectory(n, 0.01, 1.0, data.clone())?;
    let fine = trajectory(n, 0.005, 1.0, data)?;
    Ok(Measured::from_ratio(&struwe::local_energy_monitor(&coarse, &fine, 0.3, 0.25, 0.1)?))
}
