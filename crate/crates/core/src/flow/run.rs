use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::config::FlowConfig;
use crate::flow::diagnostics::{record, DiagnosticsRecord};
use crate::flow::state::FlowState;
use crate::flow::step::Integrator;
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::spectral::{sphere_drift, GridField};

/// Stored map at time t.
#[derive(Clone, Debug)]
pub struct Snapshot<T> {
    pub t: T,
    pub u: GridField<T>,
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory<T> {
    pub snapshots: Vec<Snapshot<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}

#[derive(Serialize)]
struct SnapshotJson<'a> {
    t: f64,
    grid_size: usize,
    components: usize,
    /// values[c][j]
    values: Vec<&'a [f64]>,
}

/// Writes one snapshot as JSON: time, grid size, components, node values per component.
pub fn write_snapshot_json<W: Write>(snap: &Snapshot<f64>, w: W) -> Result<()> {
    let comps = snap.u.components();
    let doc = SnapshotJson {
        t: snap.t,
        grid_size: snap.u.len(),
        components: comps,
        values: (0..comps).map(|c| snap.u.component(c)).collect(),
    };
    serde_json::to_writer(w, &doc)?;
    Ok(())
}

/// Labelled early stop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowEvent {
    pub t: f64,
    pub step: usize,
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Completed,
    Halted { event: FlowEvent },
    Failed { t: f64, reason: String },
}

#[derive(Clone, Debug)]
pub struct RunOutput<T> {
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub trajectory: Trajectory<T>,
    pub events: Vec<FlowEvent>,
    pub outcome: Outcome,
    /// Last valid state.
    pub final_state: FlowState<T>,
    pub initial_energy: f64,
    /// Energy after each step, starting with the initial energy.
    pub energies: Vec<f64>,
    /// ‖u_{n+1} − u_n‖²/dt per step, the dissipation over that step.
    pub step_dissipation: Vec<f64>,
    /// Steps with E_{n+1} > E_n + tolerance.
    pub energy_increases: usize,
    /// Largest max_j | |u_j| − 1 | over all states.
    pub max_sphere_drift: f64,
    pub steps_taken: usize,
}

impl<T: Real> RunOutput<T> {
    pub fn is_failure(&self) -> bool {
        matches!(self.outcome, Outcome::Failed { .. })
    }

    /// E(T) − E(0) + Σ dissipation, which vanishes for the continuous flow.
    pub fn dissipation_defect(&self) -> f64 {
        let e_end = *self.energies.last().unwrap_or(&self.initial_energy);
        e_end - self.initial_energy + self.step_dissipation.iter().sum::<f64>()
    }
}

/// Integrates the flow described by `config` from its initial data.
pub fn run<T: Real>(config: &FlowConfig) -> Result<RunOutput<T>> {
    config.validate()?;
    let grid = config.grid()?;
    let u0 = config.initial.build::<T>(grid, config.components)?;
    run_from(config, FlowState::from_sphere(u0, config.lambda))
}

/// Integrates from a given state, using every other field of `config`.
pub fn run_from<T: Real>(config: &FlowConfig, initial: FlowState<T>) -> Result<RunOutput<T>> {
    config.validate()?;
    let integ = Integrator::from_config(config);
    let steps = config.steps();
    let dt: T = lit(config.dt);
    let radius: T = lit(config.local_radius);
    let norm = config.normalization;
    let mut state = initial;
    let initial_energy = to_f64(state.energy);
    let mut out = RunOutput {
        diagnostics: Vec::new(),
        trajectory: Trajectory::default(),
        events: Vec::new(),
        outcome: Outcome::Completed,
        final_state: state.clone(),
        initial_energy,
        energies: vec![initial_energy],
        step_dissipation: Vec::with_capacity(steps),
        energy_increases: 0,
        max_sphere_drift: to_f64(sphere_drift(&state.u)),
        steps_taken: 0,
    };
    if config.snapshot_cadence.is_some() {
        out.trajectory.snapshots.push(Snapshot { t: state.t, u: state.u.clone() });
    }
    let mut last_increment: Option<GridField<T>> = None;
    for n in 0..steps {
        // time stamps from the step counter avoid accumulated rounding
        state.t = dt * from_usize(n);
        let next = match integ.step(&state, dt) {
            Ok(s) => s,
            Err(Error::Integration { t, reason }) => {
                out.outcome = Outcome::Failed { t, reason };
                break;
            }
            Err(e) => return Err(e),
        };
        let increment = next.u.sub(&state.u)?;
        if n % config.cadence == 0 {
            out.diagnostics.push(record(&state, &increment, dt, radius, &norm)?);
        }
        let diss = increment.l2_norm();
        out.step_dissipation.push(to_f64(diss * diss / dt));
        let (e0, e1) = (to_f64(state.energy), to_f64(next.energy));
        out.energies.push(e1);
        out.steps_taken = n + 1;
        let drift = to_f64(sphere_drift(&next.u));
        out.max_sphere_drift = out.max_sphere_drift.max(drift);
        last_increment = Some(increment);
        state = next;
        state.t = dt * from_usize(n + 1);
        if let Some(k) = config.snapshot_cadence {
            if (n + 1) % k == 0 {
                out.trajectory.snapshots.push(Snapshot { t: state.t, u: state.u.clone() });
            }
        }
        let mut halt = None;
        if e1 > e0 + config.monitors.energy_tolerance {
            out.energy_increases += 1;
            let ev = FlowEvent { t: to_f64(state.t), step: n + 1, label: "energy_increase".into(), value: e1 - e0 };
            out.events.push(ev.clone());
            if config.monitors.halt_on_energy_increase {
                halt = Some(ev);
            }
        }
        if !config.projection && drift > config.monitors.drift_limit {
            let ev = FlowEvent { t: to_f64(state.t), step: n + 1, label: "sphere_drift".into(), value: drift };
            out.events.push(ev.clone());
            halt = halt.or(Some(ev));
        }
        if let Some(event) = halt {
            out.outcome = Outcome::Halted { event };
            break;
        }
    }
    if let Some(inc) = last_increment {
        out.diagnostics.push(record(&state, &inc, dt, radius, &norm)?);
    }
    out.final_state = state;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::config::InitialData;

    #[test]
    fn identity_diagnostics_are_constant() {
        let cfg = FlowConfig::new(64, 2, 0.05, 1.0, InitialData::Identity);
        let out = run::<f64>(&cfg).unwrap();
        assert_eq!(out.outcome, Outcome::Completed);
        assert_eq!(out.steps_taken, 20);
        let first = &out.diagnostics[0];
        for r in &out.diagnostics {
            assert!((r.energy - first.energy).abs() < 1e-10);
            assert!(r.dissipation < 1e-20);
            assert!((r.eps_r - first.eps_r).abs() < 1e-10);
            assert!(r.harmonic_residual < 1e-10);
        }
    }

    #[test]
    fn small_perturbation_decays() {
        let mut cfg = FlowConfig::new(
            64,
            3,
            0.05,
            20.0,
            InitialData::Perturbed { point: None, amplitude: 0.3, bandwidth: 3, decay: 1.0, seed: 11 },
        );
        cfg.cadence = 50;
        let out = run::<f64>(&cfg).unwrap();
        assert_eq!(out.outcome, Outcome::Completed);
        assert_eq!(out.energy_increases, 0);
        assert!(*out.energies.last().unwrap() < 1e-6, "{}", out.energies.last().unwrap());
    }
}
