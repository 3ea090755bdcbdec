use halflow::flow::local_energy_profile;
use halflow::spectral::{analyze, BumpMollifier, SphereField};
use halflow::{Error, GridField64, Result, SphereField64};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::norms::h_norm;
use crate::report::{RatioReport, SampleRow};

/// Smallest |ρ_ε∗u| accepted before projecting.
pub const MIN_MODULUS: f64 = 1e-3;

/// Errors at or below this level count as exact and need not decrease further.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

/// u_ε = π(ρ_ε ∗ u) with the unit-mass bump of radius ε.
pub fn mollify_project(u: &SphereField64, eps: f64) -> Result<SphereField64> {
    let m = BumpMollifier::new();
    Ok(mollify_project_with(&m, u, eps)?.0)
}

fn mollify_project_with(m: &BumpMollifier, u: &SphereField64, eps: f64) -> Result<(SphereField64, GridField64)> {
    let smooth = m.convolve(u.field(), eps)?;
    let (j, low) = smooth
        .pointwise_norms()
        .into_iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (j, r)| if r < acc.1 { (j, r) } else { acc });
    if low < MIN_MODULUS {
        return Err(Error::Domain(format!(
            "|ρ_ε∗u| = {low:.3e} at node {j} for ε = {eps}; ε is too large for this map"
        )));
    }
    Ok((SphereField::project(&smooth)?, smooth))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationRow {
    pub eps: f64,
    /// sup_x | |ρ_ε∗u|(x) − 1 |
    pub sphere_distance: f64,
    /// ‖u_ε − u‖_{H^{1/2}}
    pub h_half_error: f64,
    /// max over nodes of distance / (local Ḣ^{1/2} content on B_ε)^{1/2}
    pub local_constant: f64,
}

pub fn approximation_rows(u: &SphereField64, schedule: &[f64]) -> Result<Vec<ApproximationRow>> {
    let m = BumpMollifier::new();
    let mut rows = Vec::with_capacity(schedule.len());
    for &eps in schedule {
        let (ue, smooth) = mollify_project_with(&m, u, eps)?;
        let dist: Vec<f64> = smooth.pointwise_norms().iter().map(|r| (r - 1.0).abs()).collect();
        let content = local_energy_profile(u.field(), eps)?;
        let local_constant = dist
            .iter()
            .zip(&content)
            .filter(|(_, e)| **e > 1e-14)
            .map(|(d, e)| d / (2.0 * e).sqrt())
            .fold(0.0, f64::max);
        rows.push(ApproximationRow {
            eps,
            sphere_distance: dist.iter().fold(0.0, |a, b| a.max(*b)),
            h_half_error: h_norm(&analyze(&ue.field().sub(u.field())?), 0.5),
            local_constant,
        });
    }
    Ok(rows)
}

/// Tracks both distances along a decreasing ε schedule and asserts both decrease.
pub fn approximation_report(name: &str, u: &SphereField64, schedule: &[f64]) -> Result<(RatioReport, Vec<ApproximationRow>)> {
    let params = json!({"map": name, "grid": u.grid().size(), "schedule": schedule});
    let rows = match approximation_rows(u, schedule) {
        Ok(r) => r,
        Err(Error::Domain(msg)) => return Ok((RatioReport::refused("mollify_project", params, msg), Vec::new())),
        Err(e) => return Err(e),
    };
    let samples = rows.iter().enumerate().map(|(i, r)| SampleRow::new(i, r.sphere_distance, r.h_half_error)).collect();
    let mut rep = RatioReport::new("mollify_project", params, None, samples);
    let down = |a: f64, b: f64| b < a || b <= ROUNDOFF_FLOOR;
    let dist_down = rows.windows(2).all(|w| down(w[0].sphere_distance, w[1].sphere_distance));
    let err_down = rows.windows(2).all(|w| down(w[0].h_half_error, w[1].h_half_error));
    if rows.iter().all(|r| r.h_half_error <= ROUNDOFF_FLOOR) {
        rep.note("u_ε = u to roundoff at every ε".to_string());
    }
    let c = rows.iter().map(|r| r.local_constant).fold(0.0, f64::max);
    for r in &rows {
        rep.note(format!(
            "eps {:.6}: distance {:.3e}, H1/2 error {:.3e}, local constant {:.4}",
            r.eps, r.sphere_distance, r.h_half_error, r.local_constant
        ));
    }
    rep.measured = rows.last().map_or(f64::NAN, |r| r.h_half_error);
    rep.tolerance = 0.0;
    rep.note(format!("empirical local constant {c:.6}"));
    rep.require(dist_down, "sphere distance does not decrease along the schedule");
    rep.require(err_down, "H1/2 error does not decrease along the schedule");
    rep.require(c.is_finite(), "local constant not finite");
    Ok((rep, rows))
}
