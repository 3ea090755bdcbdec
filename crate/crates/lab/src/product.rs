use halflow::fractional::{build_table, product_spectrum, CjkTable};
use halflow::spectral::{sobolev_norm, CircleGrid, SpectralField};
use halflow::Result;
use serde_json::json;

use crate::family::SampleFamily;
use crate::norms::riesz_norm;
use crate::report::{max_finite_ratio, RatioReport, SampleRow, Stability};

/// Accepted growth of the max ratio when the band-width doubles. The ratio of an upper
/// bound may fall as the band grows; only growth is held against it.
pub const PRODUCT_STABILITY: f64 = 0.25;

/// ‖d_{1/2}u·d_{1/2}v‖_{Ḣ^s} from the exact product spectrum.
pub fn product_lhs(u: &SpectralField<f64>, v: &SpectralField<f64>, s: f64, table: &CjkTable) -> Result<f64> {
    Ok(sobolev_norm(&product_spectrum(u, v, table)?, s, true))
}

/// The two right sides, with exponents a = 1/4 + s/2 + ε and a' = 1/4 + s/2 + 2ε:
/// ‖(−Δ)^a u‖‖(−Δ)^{1/2}v‖ + sym, and ‖(−Δ)^{a'}u‖‖(−Δ)^{1/2−ε}v‖ + sym.
pub fn product_rhs(u: &SpectralField<f64>, v: &SpectralField<f64>, s: f64, eps: f64) -> (f64, f64) {
    let a = 0.25 + s / 2.0 + eps;
    let b = 0.25 + s / 2.0 + 2.0 * eps;
    let first = riesz_norm(u, a) * riesz_norm(v, 0.5) + riesz_norm(u, 0.5) * riesz_norm(v, a);
    let second = riesz_norm(u, b) * riesz_norm(v, 0.5 - eps) + riesz_norm(u, 0.5 - eps) * riesz_norm(v, b);
    (first, second)
}

fn ratios(u_fam: &SampleFamily, v_fam: &SampleFamily, s: f64, eps: f64, grid: CircleGrid) -> Result<(Vec<SampleRow>, Vec<SampleRow>)> {
    let table = build_table(u_fam.bandwidth.max(v_fam.bandwidth));
    let mut first = Vec::new();
    let mut second = Vec::new();
    for i in 0..u_fam.count.min(v_fam.count) {
        let u = u_fam.coefficients(i, grid)?;
        let v = v_fam.coefficients(i, grid)?;
        let lhs = product_lhs(&u, &v, s, &table)?;
        let (r1, r2) = product_rhs(&u, &v, s, eps);
        first.push(SampleRow::new(i, lhs, r1));
        second.push(SampleRow::new(i, lhs, r2));
    }
    Ok((first, second))
}

/// Ratios of the product norm to both right sides; stability is measured by doubling the
/// band-width of both families (which must stay within N/8).
pub fn product_regularity_report(u_fam: &SampleFamily, v_fam: &SampleFamily, s: f64, eps: f64, grid: CircleGrid) -> Result<RatioReport> {
    let params = json!({"s": s, "epsilon": eps, "grid": grid.size(), "bandwidth": u_fam.bandwidth, "count": u_fam.count});
    if !(s > 0.0 && s < 1.5 && eps > 0.0) {
        return Ok(RatioReport::refused("product_regularity", params, format!("needs s in (0, 3/2) and ε > 0, got s = {s}, ε = {eps}")));
    }
    let band = u_fam.bandwidth.max(v_fam.bandwidth);
    if 16 * band > grid.size() {
        return Ok(RatioReport::refused("product_regularity", params, format!("doubled band-width {} exceeds N/8", 2 * band)));
    }
    let (first, second) = ratios(u_fam, v_fam, s, eps, grid)?;
    let (first_fine, second_fine) = ratios(&u_fam.with_bandwidth(2 * u_fam.bandwidth), &v_fam.with_bandwidth(2 * v_fam.bandwidth), s, eps, grid)?;
    let second_max = max_finite_ratio(&second);
    let second_fine_max = max_finite_ratio(&second_fine);
    let finite = first.iter().chain(&second).all(|r| r.ratio.is_finite());
    let mut r = RatioReport::new("product_regularity", params, Some(u_fam.seed), first);
    let s1 = Stability::no_growth(r.max_ratio, max_finite_ratio(&first_fine), PRODUCT_STABILITY);
    let s2 = Stability::no_growth(second_max, second_fine_max, PRODUCT_STABILITY);
    r.note(format!("first right side: max ratio {:.6} -> {:.6} under band doubling", s1.coarse, s1.fine));
    r.note(format!("second right side: max ratio {:.6} -> {:.6} under band doubling", s2.coarse, s2.fine));
    r.measured = r.max_ratio;
    r.tolerance = PRODUCT_STABILITY;
    r.require(finite, "non-finite ratio");
    r.require(s1.stable && s2.stable, "max ratio not stable under band-width doubling");
    r.stability = Some(s1);
    Ok(r)
}
