use halflow::fractional::{frac_divergence, frac_gradient_kernel, omega_potential, pair, OffsetTable};
use halflow::spectral::{analyze, CircleGrid, GridField, SphereField};
use halflow::{OffDiagonalKernel64, Result, SphereField64};
use serde_json::json;

use crate::family::SampleFamily;
use crate::norms::h_norm;
use crate::report::{RatioReport, SampleRow, Stability, DEFAULT_STABILITY};

/// Largest admissible sup-norm of div_{1/2}F.
pub const DIVERGENCE_THRESHOLD: f64 = 1e-3;

/// ‖F‖_{L²_od} = (∫∫ |F|² dxdy/|x−y|)^{1/2}, diagonal cell omitted.
pub fn offdiagonal_l2(f: &OffDiagonalKernel64) -> f64 {
    let grid = f.grid();
    let n = grid.size();
    let h: f64 = grid.spacing();
    let w = OffsetTable::<f64>::new(grid).inverse_power(1.0);
    let mut acc = 0.0;
    for i in 0..n {
        for m in 1..n {
            let j = (i + m) % n;
            let sq: f64 = f.pair_values(i, j).iter().map(|v| v * v).sum();
            acc += sq * w[m];
        }
    }
    (acc * h * h).sqrt()
}

/// One ratio ‖F·d_{1/2}g − c‖_{H^{−1/2}} / (‖F‖_{L²_od}‖g‖_{H^{1/2}}); returns (lhs, rhs).
pub fn wente_sides(f: &OffDiagonalKernel64, f_norm: f64, g: &GridField<f64>) -> Result<(f64, f64)> {
    let dg = frac_gradient_kernel(g, 0.5)?;
    let prod = pair(f, &dg)?;
    let lhs = h_norm(&analyze(&prod).without_mean(), -0.5);
    let rhs = f_norm * h_norm(&analyze(g), 0.5);
    Ok((lhs, rhs))
}

fn source_kernel(u: &SphereField64) -> Result<(OffDiagonalKernel64, f64)> {
    let omega = omega_potential(u)?;
    let div = frac_divergence(&omega, 0.5)?;
    // Ω_{01}, the single independent entry for planar maps
    let f = omega.component_kernel(1)?;
    Ok((f, div.sup_norm()))
}

fn max_ratio_at(u_at: &dyn Fn(CircleGrid) -> Result<SphereField64>, family: &SampleFamily, grid: CircleGrid) -> Result<(Vec<SampleRow>, f64, f64)> {
    let u = u_at(grid)?;
    let (f, div) = source_kernel(&u)?;
    let f_norm = offdiagonal_l2(&f);
    let mut rows = Vec::with_capacity(family.count);
    for i in 0..family.count {
        let g = family.member(i, grid)?;
        let (lhs, rhs) = wente_sides(&f, f_norm, &g)?;
        rows.push(SampleRow::new(i, lhs, rhs));
    }
    Ok((rows, div, f_norm))
}

/// Wente ratio for F = Ω_{01}(u) against scalar samples g, at `grid` and at twice its size.
///
/// `u_at` builds the source map on a given grid. The check is refused when
/// sup|div_{1/2}Ω| exceeds [`DIVERGENCE_THRESHOLD`].
pub fn wente_report(u_at: &dyn Fn(CircleGrid) -> Result<SphereField64>, family: &SampleFamily, grid: CircleGrid) -> Result<RatioReport> {
    let params = json!({"grid": grid.size(), "bandwidth": family.bandwidth, "count": family.count});
    let u = u_at(grid)?;
    let (_, div) = source_kernel(&u)?;
    if div > DIVERGENCE_THRESHOLD {
        return Ok(RatioReport::refused(
            "wente",
            params,
            format!("sup |div Ω| = {div:.3e} exceeds {DIVERGENCE_THRESHOLD:e}; the potential is not divergence free"),
        ));
    }
    let (rows, _, f_norm) = max_ratio_at(u_at, family, grid)?;
    let (fine_rows, fine_div, _) = max_ratio_at(u_at, family, grid.refined(2)?)?;
    let mut r = RatioReport::new("wente", params, Some(family.seed), rows);
    let fine_max = crate::report::max_finite_ratio(&fine_rows);
    r.stability = Some(Stability::new(r.max_ratio, fine_max, DEFAULT_STABILITY));
    r.measured = r.max_ratio;
    r.tolerance = DEFAULT_STABILITY;
    r.note(format!("sup |div Ω| = {div:.3e} (refined {fine_div:.3e}), ||F||_od = {f_norm:.6}"));
    r.note(format!("empirical Wente constant {:.6}", r.max_ratio));
    let finite = r.all_finite();
    let stable = r.stability.as_ref().is_some_and(|s| s.stable);
    r.require(finite, "non-finite ratio");
    r.require(stable, "max ratio not stable under grid doubling");
    Ok(r)
}

/// The identity map as a source.
pub fn identity_source(grid: CircleGrid) -> Result<SphereField64> {
    SphereField::identity(grid, 2)
}
