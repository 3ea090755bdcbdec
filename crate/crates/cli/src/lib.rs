//! Experiment runner for the half-harmonic flow: JSON configs in, CSV/JSON artifacts out.
//!
//! Exit statuses: 0 pass, 1 malformed config, 2 check failure, 3 integration failure.

pub mod artifacts;
pub mod config;
pub mod experiment;
pub mod report;
pub mod suite;

pub use config::{ConfigError, ExperimentConfig, Kind};
pub use experiment::{run_config_file, run_experiment, ExitStatus, ExperimentOutcome, Overrides};
pub use report::emit_report;
pub use suite::{run_suite, CheckReport, CheckVerdict, Level, SuiteOptions, CHECKS};
