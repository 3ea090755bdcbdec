use halflow::spectral::{analyze, synthesize, sobolev_norm, CircleGrid, SpectralField};
use halflow::{GridField64, Result};

/// ‖f‖_{L^p} of the pointwise Euclidean norm, by the trapezoid rule on a grid refined by `refine`.
pub fn lp_norm(f: &GridField64, p: f64, refine: usize) -> Result<f64> {
    let fine = if refine > 1 { synthesize(&analyze(f), f.grid().refined(refine)?)? } else { f.clone() };
    lp_of_samples(&fine.pointwise_norms(), p, fine.grid())
}

pub fn lp_of_samples(values: &[f64], p: f64, grid: CircleGrid) -> Result<f64> {
    let h: f64 = grid.spacing();
    Ok((values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * h).powf(1.0 / p))
}

/// ‖(−Δ)^a f‖_{L²} = (2π Σ |n|^{4a} |f̂|²)^{1/2}.
pub fn riesz_norm(c: &SpectralField<f64>, a: f64) -> f64 {
    sobolev_norm(c, 2.0 * a, true)
}

/// Inhomogeneous H^s norm.
pub fn h_norm(c: &SpectralField<f64>, s: f64) -> f64 {
    sobolev_norm(c, s, false)
}
