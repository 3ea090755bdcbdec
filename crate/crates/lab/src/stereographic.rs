use halflow::spectral::{analyze, riesz_gradient, SpectralField};
use num_complex::Complex;
use halflow::{Error, GridField64, Result};
use rayon::prelude::*;
use serde_json::json;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::report::{RatioReport, SampleRow};

/// Fixed part of the agreement budget; the truncation tail is added per point.
pub const STEREO_TOLERANCE: f64 = 1e-3;
/// Minimal angular distance of a base point from the projection pole −π/2.
pub const POLE_CLEARANCE: f64 = 0.2;

const BLOCK: i64 = 4096;

/// Π(θ) = cos θ / (1 + sin θ).
pub fn stereo(theta: f64) -> f64 {
    theta.cos() / (1.0 + theta.sin())
}

/// Π⁻¹(y) = π/2 − 2 atan y.
pub fn stereo_inverse(y: f64) -> f64 {
    FRAC_PI_2 - 2.0 * y.atan()
}

/// Band-limited evaluation of every component at θ.
struct Evaluator {
    /// coeffs[c][k] = û_c(k) for 0 ≤ k ≤ band
    coeffs: Vec<Vec<Complex<f64>>>,
}

impl Evaluator {
    fn new(c: &SpectralField<f64>) -> Self {
        let band = c.bandwidth();
        let coeffs = (0..c.components()).map(|comp| (0..=band as i64).map(|k| c.coeff(comp, k)).collect()).collect();
        Self { coeffs }
    }

    /// Real fields: u(θ) = û(0) + 2 Re Σ_{k≥1} û(k) e^{ikθ}.
    fn eval(&self, theta: f64, out: &mut [f64]) {
        let z = Complex::from_polar(1.0, theta);
        for (slot, cs) in out.iter_mut().zip(&self.coeffs) {
            let mut acc = cs[0].re;
            let mut p = Complex::new(1.0, 0.0);
            for c in cs.iter().skip(1) {
                p *= z;
                acc += 2.0 * (c * p).re;
            }
            *slot = acc;
        }
    }
}

fn pole_distance(x0: f64) -> f64 {
    let d = (x0 + FRAC_PI_2).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Line and circle sides of the stereographic identity at one base point.
#[derive(Clone, Debug, PartialEq)]
pub struct StereoPoint {
    pub x0: f64,
    pub line: f64,
    pub circle: f64,
    /// Upper bound for the truncated part of the line integral.
    pub tail_bound: f64,
}

/// ∫_{[−L,L]} |v(x)−v(y)|²/|x−y|² dy with v = u∘Π⁻¹, on a uniform grid through x (step ≤ h),
/// against (1 + sin x₀)·∫_{S¹} |u(x₀)−u(y)|²/|x₀−y|² dy.
pub fn stereographic_point(u: &GridField64, x0: f64, length: f64, step: f64) -> Result<StereoPoint> {
    if pole_distance(x0) < POLE_CLEARANCE {
        return Err(Error::Domain(format!("base point {x0} is within {POLE_CLEARANCE} of the projection pole")));
    }
    let c = analyze(u);
    let m = u.components();
    let x = stereo(x0);
    if x.abs() >= length {
        return Err(Error::Domain(format!("base point maps outside the truncation window ({x} vs {length})")));
    }
    let ev = Evaluator::new(&c);
    let mut ux = vec![0.0; m];
    ev.eval(x0, &mut ux);
    // derivative of v at x: u'(θ)·dθ/dy with dθ/dy = −2/(1+y²)
    let mut dux = vec![0.0; m];
    Evaluator::new(&riesz_gradient(&c)).eval(x0, &mut dux);
    let jac = -2.0 / (1.0 + x * x);
    let diag: f64 = dux.iter().map(|d| (d * jac).powi(2)).sum();
    let left = ((x + length) / step).floor() as i64;
    let right = ((length - x) / step).floor() as i64;
    let term = |k: i64| {
        if k == 0 {
            return diag;
        }
        let y = x + k as f64 * step;
        let mut v = vec![0.0; m];
        ev.eval(stereo_inverse(y), &mut v);
        let sq: f64 = v.iter().zip(&ux).map(|(a, b)| (a - b).powi(2)).sum();
        sq / (y - x).powi(2)
    };
    // fixed blocks summed in order keep the result independent of the thread count
    let total = left + right + 1;
    let blocks = (total + BLOCK - 1) / BLOCK;
    let partial: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = -left + b * BLOCK;
            let hi = (lo + BLOCK).min(right + 1);
            (lo..hi).map(term).sum::<f64>()
        })
        .collect();
    let line = partial.iter().sum::<f64>() * step;
    let sup_sq = u.pointwise_norms().iter().fold(0.0f64, |a, v| a.max(*v)).powi(2);
    let tail_bound = 4.0 * sup_sq * 2.0 * length / (length * length - x * x);
    let circle = circle_side(&c, x0) * (1.0 + x0.sin());
    Ok(StereoPoint { x0, line, circle, tail_bound })
}

/// ∫_{S¹} |u(x₀)−u(y)|²/|x₀−y|² dy at an arbitrary x₀:
/// Σ_{j,k} û(j) conj(û(k)) e^{i(j−k)x₀} C(j,−k) with C(j,−k) = π(|j|+|k|−|j−k|).
fn circle_side(c: &SpectralField<f64>, x0: f64) -> f64 {
    let kk = c.bandwidth() as i64;
    let mut acc = 0.0;
    for comp in 0..c.components() {
        let vals: Vec<(i64, Complex<f64>)> = (-kk..=kk).map(|j| (j, c.coeff(comp, j))).collect();
        for &(j, a) in &vals {
            if a.norm() == 0.0 {
                continue;
            }
            for &(k, b) in &vals {
                if b.norm() == 0.0 {
                    continue;
                }
                let weight = PI * (j.abs() + k.abs() - (j - k).abs()) as f64;
                let phase = Complex::from_polar(1.0, (j - k) as f64 * x0);
                acc += (a * b.conj() * phase).re * weight;
            }
        }
    }
    acc
}

/// Checks the identity for each base point; a point passes when the sides agree within
/// [`STEREO_TOLERANCE`] plus its tail bound.
pub fn stereographic_check(name: &str, u: &GridField64, points: &[f64], length: f64, step: f64) -> Result<RatioReport> {
    let params = json!({"map": name, "points": points, "length": length, "step": step});
    let mut rows = Vec::with_capacity(points.len());
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_gap = 0.0f64;
    let mut notes = Vec::new();
    for (i, &x0) in points.iter().enumerate() {
        let p = match stereographic_point(u, x0, length, step) {
            Ok(p) => p,
            Err(e) => return Ok(RatioReport::refused("stereographic", params, e.to_string())),
        };
        let gap = (p.line - p.circle).abs();
        worst_gap = worst_gap.max(gap);
        worst_excess = worst_excess.max(gap - STEREO_TOLERANCE - p.tail_bound);
        notes.push(format!("x0 {x0:.4}: line {:.9} circle {:.9} gap {gap:.3e} tail bound {:.3e}", p.line, p.circle, p.tail_bound));
        rows.push(SampleRow::new(i, p.line, p.circle));
    }
    let mut r = RatioReport::new("stereographic", params, None, rows);
    r.notes = notes;
    r.measured = worst_gap;
    r.tolerance = STEREO_TOLERANCE;
    r.require(worst_excess <= 0.0, "sides disagree beyond tolerance plus tail");
    Ok(r)
}
