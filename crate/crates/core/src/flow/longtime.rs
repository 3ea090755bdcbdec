use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::flow::config::FlowConfig;
use crate::flow::diagnostics::harmonic_residual;
use crate::flow::run::run;
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::{analyze, sobolev_norm};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongTimeSpec {
    /// Time between samples; a multiple of dt.
    pub sample_interval: f64,
    pub energy_threshold: f64,
    pub harmonic_threshold: f64,
    pub deviation_threshold: f64,
    /// Shorter horizons give an inconclusive verdict.
    pub min_horizon: f64,
    /// Largest admissible initial energy.
    pub smallness: f64,
}

impl Default for LongTimeSpec {
    fn default() -> Self {
        Self {
            sample_interval: 1.0,
            energy_threshold: 1e-6,
            harmonic_threshold: 1e-4,
            deviation_threshold: 1e-3,
            min_horizon: 10.0,
            smallness: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongTimeSample {
    pub t: f64,
    pub energy: f64,
    /// ‖u − mean(u)‖_{H^{1/2}}
    pub deviation: f64,
    pub harmonic_residual: f64,
    /// ∫_t^{t+1} ‖u_t‖², None when the window runs past the horizon.
    pub dissipation_tail: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub initial_energy: f64,
    pub samples: Vec<LongTimeSample>,
    pub tail_nonincreasing: bool,
    pub verdict: Verdict,
    pub note: String,
}

/// Runs the flow and samples the convergence indicators at a fixed interval.
pub fn long_time_harness<T: Real>(cfg: &FlowConfig, spec: &LongTimeSpec) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let mut c = cfg.clone();
    let every = (spec.sample_interval / cfg.dt).round().max(1.0) as usize;
    c.snapshot_cadence = Some(every);
    c.cadence = c.steps().max(1);
    let u0 = c.initial.build::<T>(c.grid()?, c.components)?;
    let e0 = to_f64(crate::spectral::half_energy(&u0));
    if e0 > spec.smallness {
        return Err(domain(format!("initial energy {e0:.4} exceeds the smallness threshold {}", spec.smallness)));
    }
    let out = run::<T>(&c)?;
    let window = (1.0 / cfg.dt).round().max(1.0) as usize;
    let diss = &out.step_dissipation;
    let mut samples = Vec::new();
    for (i, snap) in out.trajectory.snapshots.iter().enumerate() {
        let coeffs = analyze(&snap.u).without_mean();
        let start = i * every;
        let tail = (start + window <= diss.len())
            .then(|| diss[start..start + window].iter().sum::<f64>() * cfg.dt);
        samples.push(LongTimeSample {
            t: to_f64(snap.t),
            energy: to_f64(crate::spectral::energy_of(&coeffs)),
            deviation: to_f64(sobolev_norm(&coeffs, lit::<T>(0.5), false)),
            harmonic_residual: to_f64(harmonic_residual(&snap.u)),
            dissipation_tail: tail,
        });
    }
    let tails: Vec<f64> = samples.iter().filter_map(|s| s.dissipation_tail).collect();
    // increments below the roundoff floor of the first window are ignored
    let floor = tails.first().map_or(0.0, |t| t * 1e-20);
    let tail_nonincreasing = tails.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + floor);
    let last = samples.last().cloned();
    let (verdict, note) = if out.is_failure() {
        (Verdict::Fail, format!("integration failed: {:?}", out.outcome))
    } else if cfg.horizon < spec.min_horizon {
        (Verdict::Inconclusive, format!("horizon {} below the minimum {}", cfg.horizon, spec.min_horizon))
    } else {
        let l = last.expect("at least the initial sample");
        let ok = l.energy <= spec.energy_threshold
            && l.harmonic_residual <= spec.harmonic_threshold
            && l.deviation <= spec.deviation_threshold
            && tail_nonincreasing;
        let note = format!(
            "final t = {}: energy {:.3e}, harmonic residual {:.3e}, deviation {:.3e}",
            l.t, l.energy, l.harmonic_residual, l.deviation
        );
        (if ok { Verdict::Pass } else { Verdict::Fail }, note)
    };
    Ok(ConvergenceReport { initial_energy: e0, samples, tail_nonincreasing, verdict, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::config::InitialData;

    #[test]
    fn constant_map_indicators_vanish() {
        let cfg = FlowConfig::new(32, 3, 0.1, 12.0, InitialData::Constant { point: vec![0.0, 0.0, 1.0] });
        let r = long_time_harness::<f64>(&cfg, &LongTimeSpec::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        for s in &r.samples {
            assert_eq!(s.energy, 0.0);
            assert_eq!(s.harmonic_residual, 0.0);
        }
    }

    #[test]
    fn short_horizon_is_inconclusive() {
        let cfg = FlowConfig::new(32, 3, 0.1, 2.0, InitialData::Constant { point: vec![0.0, 0.0, 1.0] });
        let r = long_time_harness::<f64>(&cfg, &LongTimeSpec::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn large_energy_is_refused() {
        let cfg = FlowConfig::new(32, 2, 0.1, 12.0, InitialData::Identity);
        assert!(long_time_harness::<f64>(&cfg, &LongTimeSpec::default()).is_err());
    }
}
