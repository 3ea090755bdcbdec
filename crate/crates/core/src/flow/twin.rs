use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::flow::config::{FlowConfig, Scheme};
use crate::flow::state::FlowState;
use crate::flow::step::Integrator;
use crate::sampling::RandomSpectrum;
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::spectral::{GridField, SphereField};

/// Accepted window for the divergence ratio per dt-halving of a first-order pair.
pub const FIRST_ORDER_WINDOW: (f64, f64) = (1.6, 2.4);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwinRow {
    pub dt: f64,
    /// sup_t ‖u_a(t) − u_b(t)‖_{L²}
    pub divergence: f64,
    /// Divergence at the previous (coarser) dt divided by this one.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwinReport {
    pub scheme_a: Scheme,
    pub scheme_b: Scheme,
    pub horizon: f64,
    pub rows: Vec<TwinRow>,
    pub passes: bool,
    /// First integration failure of either run, if any.
    pub failure: Option<String>,
}

fn lockstep<T: Real>(cfg: &FlowConfig, a: Scheme, b: Scheme, dt: f64) -> Result<f64> {
    let mut c = cfg.clone();
    c.dt = dt;
    c.validate()?;
    let u0 = c.initial.build::<T>(c.grid()?, c.components)?;
    let ia = Integrator::from_config(&c).with_scheme(a);
    let ib = Integrator::from_config(&c).with_scheme(b);
    let mut sa = FlowState::from_sphere(u0, c.lambda);
    let mut sb = sa.clone();
    let h: T = lit(dt);
    let mut sup = 0.0f64;
    for n in 0..c.steps() {
        let t = h * from_usize(n);
        sa.t = t;
        sb.t = t;
        sa = ia.step(&sa, h)?;
        sb = ib.step(&sb, h)?;
        sup = sup.max(to_f64(sa.u.sub(&sb.u)?.l2_norm()));
    }
    Ok(sup)
}

/// Runs two schemes from the same initial data in lockstep for each dt and reports
/// the sup-in-time L² divergence. Runs for different dt are independent and execute concurrently.
pub fn twin_run<T: Real>(cfg: &FlowConfig, scheme_a: Scheme, scheme_b: Scheme, dts: &[f64]) -> Result<TwinReport> {
    if dts.is_empty() {
        return Err(config("twin run needs at least one dt"));
    }
    let results: Vec<Result<f64>> = dts.par_iter().map(|&dt| lockstep::<T>(cfg, scheme_a, scheme_b, dt)).collect();
    let mut rows = Vec::with_capacity(dts.len());
    let mut failure = None;
    for (dt, r) in dts.iter().zip(results) {
        let divergence = match r {
            Ok(d) => d,
            Err(Error::Integration { t, reason }) => {
                failure.get_or_insert(format!("dt {dt}: t = {t}: {reason}"));
                f64::NAN
            }
            Err(e) => return Err(e),
        };
        let ratio = rows.last().map(|p: &TwinRow| p.divergence / divergence);
        rows.push(TwinRow { dt: *dt, divergence, ratio });
    }
    let (lo, hi) = FIRST_ORDER_WINDOW;
    let passes = failure.is_none()
        && rows.iter().filter_map(|r| r.ratio).all(|q| q >= lo && q <= hi)
        && rows.iter().all(|r| r.divergence.is_finite());
    Ok(TwinReport { scheme_a, scheme_b, horizon: cfg.horizon, rows, passes, failure })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationWitness {
    pub initial_distance: f64,
    pub terminal_divergence: f64,
    pub max_divergence: f64,
}

/// Runs `cfg` from its initial data and from a copy perturbed by an L² amount `delta`
/// (seeded tangential noise, then reprojected) and reports the divergence of the two trajectories.
pub fn perturbation_witness<T: Real>(cfg: &FlowConfig, delta: f64, seed: u64) -> Result<PerturbationWitness> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let u0 = cfg.initial.build::<T>(grid, cfg.components)?;
    let raw: GridField<T> = RandomSpectrum::new(cfg.components, 8, 1.0).sample(grid, seed)?;
    // tangential part only, so the reprojection changes the distance at second order
    let normal = raw.dot(u0.field())?;
    let noise = raw.sub(&u0.field().mul_scalar_field(&normal)?)?;
    let scale = lit::<T>(delta) / noise.l2_norm();
    let pert = SphereField::project(&u0.field().add(&noise.scale(scale))?)?;
    let initial_distance = to_f64(pert.field().sub(u0.field())?.l2_norm());
    let integ = Integrator::from_config(cfg);
    let h: T = lit(cfg.dt);
    let mut sa = FlowState::from_sphere(u0, cfg.lambda);
    let mut sb = FlowState::from_sphere(pert, cfg.lambda);
    let mut max_divergence = initial_distance;
    let mut last = initial_distance;
    for n in 0..cfg.steps() {
        let t = h * from_usize(n);
        sa.t = t;
        sb.t = t;
        sa = integ.step(&sa, h)?;
        sb = integ.step(&sb, h)?;
        last = to_f64(sa.u.sub(&sb.u)?.l2_norm());
        max_divergence = max_divergence.max(last);
    }
    Ok(PerturbationWitness { initial_distance, terminal_divergence: last, max_divergence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::config::InitialData;

    fn small() -> FlowConfig {
        FlowConfig::new(
            32,
            3,
            0.05,
            1.0,
            InitialData::Perturbed { point: None, amplitude: 0.2, bandwidth: 3, decay: 1.0, seed: 5 },
        )
    }

    #[test]
    fn identical_schemes_do_not_diverge() {
        let r = twin_run::<f64>(&small(), Scheme::Exponential, Scheme::Exponential, &[0.05]).unwrap();
        assert_eq!(r.rows[0].divergence, 0.0);
    }

    #[test]
    fn perturbation_stays_small() {
        let w = perturbation_witness::<f64>(&small(), 1e-6, 3).unwrap();
        assert!((w.initial_distance - 1e-6).abs() < 1e-9, "{}", w.initial_distance);
        assert!(w.terminal_divergence < 1e-5);
    }
}
