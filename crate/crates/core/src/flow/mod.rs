//! Time integration of the half-harmonic gradient flow and its monitors.

mod config;
mod diagnostics;
mod initial;
mod linearized;
mod local;
mod longtime;
mod run;
mod state;
mod step;
mod twin;

pub use config::{FlowConfig, InitialData, LambdaMethod, Monitors, Scheme};
pub use diagnostics::{
    flow_vector, harmonic_residual, orthogonality_residual, record, sphere_defect, write_diagnostics_csv,
    DiagnosticsRecord, OrthogonalityResidual, DIAGNOSTICS_HEADER,
};
pub use linearized::Linearization;
pub use local::{local_energy, local_energy_profile, local_energy_sup, Density};
pub use longtime::{long_time_harness, ConvergenceReport, LongTimeSample, LongTimeSpec, Verdict};
pub use run::{run, run_from, write_snapshot_json, FlowEvent, Outcome, RunOutput, Snapshot, Trajectory};
pub use state::FlowState;
pub use step::{nonlinearity, step, Integrator};
pub use twin::{perturbation_witness, twin_run, PerturbationWitness, TwinReport, TwinRow, FIRST_ORDER_WINDOW};
