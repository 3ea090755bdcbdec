use halflow::spectral::{analyze, CircleGrid};
use halflow::Result;
use serde_json::json;

use crate::family::SampleFamily;
use crate::norms::{h_norm, lp_norm};
use crate::report::{RatioReport, SampleRow};

/// Relative slack allowed in the coefficient-level Cauchy–Schwarz step.
pub const CS_TOLERANCE: f64 = 1e-10;

/// Coefficient-level step ‖u‖²_{H^{1/4}} ≤ ‖u‖_{L²}‖u‖_{H^{1/2}} for one field: (lhs, rhs).
pub fn cauchy_schwarz_step(u: &halflow::GridField64) -> (f64, f64) {
    let c = analyze(u);
    (h_norm(&c, 0.25).powi(2), h_norm(&c, 0.0) * h_norm(&c, 0.5))
}

/// Per sample: the embedding ratio ‖u‖_{L⁴}/‖u‖_{H^{1/4}}. Violations of the
/// Cauchy–Schwarz step are counted and fail the report.
pub fn ladyzhenskaya_report(family: &SampleFamily, grid: CircleGrid) -> Result<RatioReport> {
    let mut rows = Vec::with_capacity(family.count);
    let mut violations = 0usize;
    let mut worst_cs = 0.0f64;
    for i in 0..family.count {
        let u = family.member(i, grid)?;
        let (a, b) = cauchy_schwarz_step(&u);
        worst_cs = worst_cs.max(a / b);
        if a > b * (1.0 + CS_TOLERANCE) {
            violations += 1;
        }
        let c = analyze(&u);
        // |u|⁴ has four times the band of u
        rows.push(SampleRow::new(i, lp_norm(&u, 4.0, 4)?, h_norm(&c, 0.25)));
    }
    let params = json!({
        "grid": grid.size(),
        "bandwidth": family.bandwidth,
        "components": family.components,
        "count": family.count,
        "decay": family.amplitude.decay,
    });
    let mut r = RatioReport::new("ladyzhenskaya", params, Some(family.seed), rows);
    r.measured = r.max_ratio;
    r.tolerance = CS_TOLERANCE;
    r.note(format!("cauchy-schwarz violations: {violations}, worst step ratio {worst_cs:.12}"));
    r.note(format!("empirical embedding constant ||u||_L4 / ||u||_H1/4 <= {:.6}", r.max_ratio));
    let finite = r.all_finite();
    r.require(violations == 0, "cauchy-schwarz step violated");
    r.require(finite, "non-finite ratio");
    Ok(r)
}
