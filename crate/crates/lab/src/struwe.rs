use halflow::flow::{Density, Trajectory};
use halflow::spectral::grid_energy;
use halflow::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{RatioReport, SampleRow, Stability};

fn trapezoid(ts: &[f64], ys: &[f64]) -> f64 {
    ts.windows(2).zip(ys.windows(2)).map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1])).sum()
}

/// Both sides of the local and global space-time L⁴ estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L4Sides {
    pub horizon: f64,
    pub local_lhs: f64,
    pub local_rhs: f64,
    pub global_lhs: f64,
    pub global_rhs: f64,
}

impl L4Sides {
    pub fn local_ratio(&self) -> f64 {
        self.local_lhs / self.local_rhs
    }

    pub fn global_ratio(&self) -> f64 {
        self.global_lhs / self.global_rhs
    }
}

/// Local: ∫∫_{B_{3R/4}} |w|⁴ against sup_t ∫_{B_R}|w|² · (∫∫_{B_R} |(−Δ)^{1/2}u|² + R⁻² ∫∫ |w|²),
/// global: ∫∫ |w|⁴ against sup_{t,x} ∫_{B_R(x)}|w|² · (∫∫ |(−Δ)^{1/2}u|² + R⁻³ ∫∫ |w|²),
/// with w = (−Δ)^{1/4}u and time integrals by the trapezoid rule over the snapshots.
pub fn local_l4_sides(traj: &Trajectory<f64>, x0: f64, r: f64) -> Result<L4Sides> {
    if traj.len() < 2 {
        return Err(Error::Config("the L4 monitor needs at least two snapshots".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius must lie in (0, 1), got {r}")));
    }
    let mut ts = Vec::new();
    let (mut a, mut b, mut c, mut d, mut ga, mut gc, mut eps) = (vec![], vec![], vec![], vec![], vec![], vec![], 0.0f64);
    for snap in &traj.snapshots {
        let quartic = Density::new(&snap.u, 0.25, 2)?;
        let square = Density::new(&snap.u, 0.25, 1)?;
        let lap = Density::new(&snap.u, 0.5, 1)?;
        ts.push(snap.t);
        a.push(quartic.arc_integral(x0, 0.75 * r));
        b.push(square.arc_integral(x0, r));
        c.push(lap.arc_integral(x0, r));
        d.push(square.total());
        ga.push(quartic.total());
        gc.push(lap.total());
        eps = eps.max(square.arc_profile(r).into_iter().fold(0.0, f64::max));
    }
    let sup_b = b.iter().fold(0.0f64, |m, v| m.max(*v));
    let dd = trapezoid(&ts, &d);
    Ok(L4Sides {
        horizon: ts[ts.len() - 1] - ts[0],
        local_lhs: trapezoid(&ts, &a),
        local_rhs: sup_b * (trapezoid(&ts, &c) + dd / (r * r)),
        global_lhs: trapezoid(&ts, &ga),
        global_rhs: eps * (trapezoid(&ts, &gc) + dd / (r * r * r)),
    })
}

/// L⁴ ratios for a trajectory and a refined counterpart (finer N or dt).
pub fn local_l4_monitor(coarse: &Trajectory<f64>, fine: &Trajectory<f64>, x0: f64, r: f64, tolerance: f64) -> Result<RatioReport> {
    let s0 = local_l4_sides(coarse, x0, r)?;
    let s1 = local_l4_sides(fine, x0, r)?;
    let rows = vec![SampleRow::new(0, s0.local_lhs, s0.local_rhs), SampleRow::new(1, s0.global_lhs, s0.global_rhs)];
    let mut rep = RatioReport::new("struwe_l4", json!({"x0": x0, "R": r, "horizon": s0.horizon}), None, rows);
    let local = Stability::new(s0.local_ratio(), s1.local_ratio(), tolerance);
    let global = Stability::new(s0.global_ratio(), s1.global_ratio(), tolerance);
    rep.note(format!("local ratio {:.6} -> {:.6}", local.coarse, local.fine));
    rep.note(format!("global ratio {:.6} -> {:.6}", global.coarse, global.fine));
    rep.measured = s0.local_ratio();
    rep.tolerance = tolerance;
    let zero = s0.local_lhs == 0.0 && s0.global_lhs == 0.0;
    if zero {
        rep.note("both left sides vanish");
    } else {
        rep.require(rep.all_finite(), "non-finite ratio");
        rep.require(local.stable && global.stable, "ratio not stable under refinement");
    }
    rep.stability = Some(local);
    Ok(rep)
}

/// sup over snapshots with t > 0 of (E_R(x₀,t) − E_{2R}(x₀,0)) / ((t/R² + √t/R) E(u₀)),
/// plus the first-snapshot excess E_R(x₀,t₁) − E_{2R}(x₀,0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalEnergySides {
    pub sup_ratio: f64,
    pub first_excess: f64,
    pub initial_energy: f64,
}

pub fn local_energy_sides(traj: &Trajectory<f64>, x0: f64, r: f64) -> Result<LocalEnergySides> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::Domain(format!("radius must lie in (0, 1/2), got {r}")));
    }
    let first = traj.snapshots.first().ok_or_else(|| Error::Config("empty trajectory".into()))?;
    let e0 = grid_energy(&first.u);
    let outer = 0.5 * Density::new(&first.u, 0.25, 1)?.arc_integral(x0, 2.0 * r);
    let mut sup_ratio = 0.0f64;
    let mut first_excess = f64::NAN;
    for snap in traj.snapshots.iter().skip(1) {
        let t = snap.t - first.t;
        let er = 0.5 * Density::new(&snap.u, 0.25, 1)?.arc_integral(x0, r);
        if first_excess.is_nan() {
            first_excess = er - outer;
        }
        let scale = (t / (r * r) + t.sqrt() / r) * e0;
        if scale > 0.0 {
            sup_ratio = sup_ratio.max((er - outer) / scale);
        }
    }
    Ok(LocalEnergySides { sup_ratio, first_excess, initial_energy: e0 })
}

pub fn local_energy_monitor(coarse: &Trajectory<f64>, fine: &Trajectory<f64>, x0: f64, r: f64, tolerance: f64) -> Result<RatioReport> {
    let s0 = local_energy_sides(coarse, x0, r)?;
    let s1 = local_energy_sides(fine, x0, r)?;
    let rows = vec![SampleRow::new(0, s0.sup_ratio, 1.0), SampleRow::new(1, s1.sup_ratio, 1.0)];
    let mut rep = RatioReport::new("struwe_local_energy", json!({"x0": x0, "R": r}), None, rows);
    rep.measured = s0.sup_ratio;
    rep.tolerance = tolerance;
    rep.note(format!("first-snapshot excess {:.3e}, refined {:.3e}", s0.first_excess, s1.first_excess));
    rep.require(s0.first_excess <= 1e-6 && s1.first_excess <= 1e-6, "E_R(t1) exceeds E_2R(0) by more than 1e-6");
    rep.require(rep.all_finite(), "non-finite ratio");
    if s0.sup_ratio > 0.0 || s1.sup_ratio > 0.0 {
        let st = Stability::new(s0.sup_ratio, s1.sup_ratio, tolerance);
        rep.require(st.stable, "sup ratio not stable under refinement");
        rep.stability = Some(st);
    } else {
        rep.note("E_R(t) never exceeds E_2R(0); the ratio is nonpositive at every sampled time");
    }
    Ok(rep)
}
