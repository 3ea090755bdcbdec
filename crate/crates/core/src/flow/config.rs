use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::fractional::Normalization;
use crate::spectral::CircleGrid;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// û ← e^{−|k|dt}(û + dt N̂)
    #[default]
    Exponential,
    /// û ← (û + dt N̂)/(1 + |k|dt)
    SemiImplicit,
    /// Forward Euler, for convergence studies.
    ExplicitReference,
}

/// How λ_raw is evaluated inside a step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMethod {
    /// O(N²) trapezoid with the analytic diagonal.
    #[default]
    Quadrature,
    /// 2π u·(−Δ)^{1/2}u − π(−Δ)^{1/2}|u|² on a doubled grid.
    Spectral,
}

/// Initial maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum InitialData {
    Constant { point: Vec<f64> },
    Identity,
    /// (cos qx, sin qx, 0, ...)
    Degree { q: i64 },
    /// π∘(p + ε·noise), noise band-limited with unit sup norm.
    Perturbed {
        #[serde(default)]
        point: Option<Vec<f64>>,
        amplitude: f64,
        bandwidth: usize,
        #[serde(default = "default_decay")]
        decay: f64,
        seed: u64,
    },
    /// (sin a cos qx, sin a sin qx, cos a) in the first three components.
    Latitude { polar_angle: f64, q: i64 },
    /// (cos a cos px, cos a sin px, sin a cos qx, sin a sin qx) in four components.
    Torus { angle: f64, p: i64, q: i64 },
    /// Equator map rotated by `angle` on the arc |x − π| < half_width, then mollified and projected.
    MollifiedStep { angle: f64, half_width: f64, epsilon: f64 },
}

fn default_decay() -> f64 {
    1.0
}

impl InitialData {
    /// Seed of randomized families.
    pub fn seed(&self) -> Option<u64> {
        match self {
            InitialData::Perturbed { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn with_seed(mut self, new_seed: u64) -> Self {
        if let InitialData::Perturbed { seed, .. } = &mut self {
            *seed = new_seed;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monitors {
    /// Allowed energy increase per step.
    #[serde(default = "default_energy_tolerance")]
    pub energy_tolerance: f64,
    #[serde(default = "default_true")]
    pub halt_on_energy_increase: bool,
    /// Largest tolerated | |u| − 1 | when projection is off.
    #[serde(default = "default_drift_limit")]
    pub drift_limit: f64,
}

impl Default for Monitors {
    fn default() -> Self {
        Self { energy_tolerance: default_energy_tolerance(), halt_on_energy_increase: true, drift_limit: default_drift_limit() }
    }
}

fn default_energy_tolerance() -> f64 {
    1e-8
}

fn default_drift_limit() -> f64 {
    1e-3
}

fn default_true() -> bool {
    true
}

fn default_cadence() -> usize {
    1
}

fn default_radius() -> f64 {
    0.25
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub grid_size: usize,
    pub components: usize,
    pub dt: f64,
    pub horizon: f64,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "default_true")]
    pub projection: bool,
    pub initial: InitialData,
    /// Diagnostics every `cadence` steps.
    #[serde(default = "default_cadence")]
    pub cadence: usize,
    /// Snapshots every `snapshot_cadence` steps; none when absent.
    #[serde(default)]
    pub snapshot_cadence: Option<usize>,
    /// Radius R of the local-energy monitor ε(R).
    #[serde(default = "default_radius")]
    pub local_radius: f64,
    #[serde(default)]
    pub monitors: Monitors,
    #[serde(default)]
    pub lambda: LambdaMethod,
    #[serde(default)]
    pub normalization: Normalization,
}

impl FlowConfig {
    pub fn new(grid_size: usize, components: usize, dt: f64, horizon: f64, initial: InitialData) -> Self {
        Self {
            grid_size,
            components,
            dt,
            horizon,
            scheme: Scheme::default(),
            projection: true,
            initial,
            cadence: 1,
            snapshot_cadence: None,
            local_radius: default_radius(),
            monitors: Monitors::default(),
            lambda: LambdaMethod::default(),
            normalization: Normalization::default(),
        }
    }

    pub fn grid(&self) -> Result<CircleGrid> {
        CircleGrid::new(self.grid_size)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon >= self.dt) {
            return Err(config(format!("horizon {} must be at least dt {}", self.horizon, self.dt)));
        }
        if self.components < 2 {
            return Err(config("sphere-valued maps need at least two components"));
        }
        if self.cadence == 0 || self.snapshot_cadence == Some(0) {
            return Err(config("cadences must be positive"));
        }
        if !(self.local_radius > 0.0 && self.local_radius <= std::f64::consts::PI) {
            return Err(config("local_radius must lie in (0, π]"));
        }
        Ok(())
    }

    /// Number of steps, rounding T/dt to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round().max(1.0) as usize
    }
}
