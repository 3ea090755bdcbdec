use halflow::fractional::gradient_pairing;
use halflow::spectral::{analyze, CircleGrid};
use halflow::{GridField64, Result};
use serde_json::json;
use std::f64::consts::TAU;

use crate::family::SampleFamily;
use crate::norms::riesz_norm;
use crate::report::{RatioReport, SampleRow};

pub const FRACGRAD_TOLERANCE: f64 = 1e-3;

/// (∫|d_{1/2}u|², ‖(−Δ)^{1/4}u‖²) for one field.
pub fn fracgrad_sides(u: &GridField64) -> Result<(f64, f64)> {
    let lhs = gradient_pairing(u, u)?.integrals()[0];
    let rhs = riesz_norm(&analyze(u), 0.25).powi(2);
    Ok((lhs, rhs))
}

fn finish(mut r: RatioReport, skipped: usize) -> RatioReport {
    let worst = r.samples.iter().map(|s| (s.ratio - TAU).abs() / TAU).fold(0.0, f64::max);
    r.measured = r.max_ratio;
    r.tolerance = FRACGRAD_TOLERANCE;
    if skipped > 0 {
        r.note(format!("{skipped} constant samples skipped (0/0)"));
    }
    r.note(format!("worst relative deviation from 2π: {worst:.3e}"));
    r.require(!r.samples.is_empty(), "no usable samples");
    r.require(worst <= FRACGRAD_TOLERANCE, "ratio differs from 2π");
    r
}

/// Quadrature of the fractional gradient against the spectral energy; the ratio is 2π.
pub fn fracgrad_constant(family: &SampleFamily, grid: CircleGrid) -> Result<RatioReport> {
    let fields: Result<Vec<_>> = (0..family.count).map(|i| family.member(i, grid)).collect();
    let mut r = fracgrad_fields("fracgrad", &fields?)?;
    r.seed = Some(family.seed);
    r.params = json!({"grid": grid.size(), "bandwidth": family.bandwidth, "count": family.count});
    Ok(r)
}

/// Same check on explicit fields; constants are skipped.
pub fn fracgrad_fields(name: &str, fields: &[GridField64]) -> Result<RatioReport> {
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (i, u) in fields.iter().enumerate() {
        let (lhs, rhs) = fracgrad_sides(u)?;
        if rhs <= f64::EPSILON * u.l2_norm().powi(2) {
            skipped += 1;
            continue;
        }
        rows.push(SampleRow::new(i, lhs, rhs));
    }
    Ok(finish(RatioReport::new(name, json!({}), None, rows), skipped))
}
