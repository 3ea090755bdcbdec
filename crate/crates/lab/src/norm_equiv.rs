//! Gagliardo-type norm ‖𝒟_{s,q} f‖_{L^p} against the Littlewood–Paley norm of Ḟ^s_{p,q}.
//!
//! Frozen dyadic partition: with S(t) = e^{−1/t} / (e^{−1/t} + e^{−1/(1−t)}) on (0,1),
//! ψ(ξ) = S(2 − |ξ|) equals 1 on |ξ| ≤ 1 and 0 on |ξ| ≥ 2; φ₀ = ψ and
//! φ_j(ξ) = ψ(ξ/2^j) − ψ(ξ/2^{j−1}) for j ≥ 1, supported in 2^{j−1} ≤ |ξ| ≤ 2^{j+1}.

use halflow::fractional::OffsetTable;
use halflow::spectral::{analyze, grid_derivative, synthesize, CircleGrid, GridField};
use halflow::{Error, GridField64, Result};
use rayon::prelude::*;
use serde_json::json;

use crate::family::SampleFamily;
use crate::norms::lp_of_samples;
use crate::report::{max_finite_ratio, RatioReport, SampleRow, Stability, DEFAULT_STABILITY};

/// Largest accepted max/min ratio across a family.
pub const SPREAD_LIMIT: f64 = 30.0;

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

pub fn psi(xi: f64) -> f64 {
    smooth_step(2.0 - xi.abs())
}

pub fn phi(j: u32, xi: f64) -> f64 {
    if j == 0 {
        psi(xi)
    } else {
        psi(xi / f64::powi(2.0, j as i32)) - psi(xi / f64::powi(2.0, j as i32 - 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponents {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl Exponents {
    pub const DEFAULT: Self = Self { s: 0.5, p: 4.0, q: 2.0 };

    pub fn check(&self) -> Result<()> {
        let bound = self.q / (1.0 + self.s * self.q);
        if !(self.s > 0.0 && self.s < 1.0 && self.q >= 1.0 && self.p > bound) {
            return Err(Error::Domain(format!(
                "(s, p, q) = ({}, {}, {}) violates p > q/(1+sq) = {bound:.4} (or 0 < s < 1, q ≥ 1)",
                self.s, self.p, self.q
            )));
        }
        Ok(())
    }
}

/// 𝒟_{s,q} f at each node. The diagonal cell takes the limit |f'|^q when q(1−s) = 1,
/// zero when q(1−s) > 1, and is omitted otherwise.
pub fn gagliardo_density(f: &GridField64, e: Exponents) -> Vec<f64> {
    let grid = f.grid();
    let n = grid.size();
    let h: f64 = grid.spacing();
    let w = OffsetTable::<f64>::new(grid).inverse_power(e.s * e.q + 1.0);
    let df = grid_derivative(f);
    let order = e.q * (1.0 - e.s) - 1.0;
    let comps = f.components();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for (m, wm) in w.iter().enumerate().skip(1) {
                let j = (i + m) % n;
                let d: f64 = (0..comps).map(|c| (f.value(i, c) - f.value(j, c)).powi(2)).sum::<f64>().sqrt();
                acc += d.powf(e.q) * wm;
            }
            if order.abs() < 1e-12 {
                let g: f64 = (0..comps).map(|c| df.value(i, c).powi(2)).sum::<f64>().sqrt();
                acc += g.powf(e.q);
            }
            (acc * h).powf(1.0 / e.q)
        })
        .collect()
}

pub fn gagliardo_norm(f: &GridField64, e: Exponents) -> Result<f64> {
    lp_of_samples(&gagliardo_density(f, e), e.p, f.grid())
}

/// ‖(Σ_j |2^{js} Δ_j f|^q)^{1/q}‖_{L^p} with the mean removed, on a grid refined by two.
pub fn triebel_norm(f: &GridField64, e: Exponents) -> Result<f64> {
    let c = analyze(f).without_mean();
    let band = c.bandwidth().max(1);
    let top = (usize::BITS - band.leading_zeros()) + 1;
    let fine = f.grid().refined(2)?;
    let mut acc = vec![0.0; fine.size()];
    for j in 0..=top {
        let block = c.apply_symbol(|k| phi(j, k as f64) * f64::powi(2.0, j as i32).powf(e.s));
        let vals = synthesize(&block, fine)?;
        for (a, r) in acc.iter_mut().zip(vals.pointwise_norms()) {
            *a += r.powf(e.q);
        }
    }
    let pointwise: Vec<f64> = acc.into_iter().map(|a| a.powf(1.0 / e.q)).collect();
    lp_of_samples(&pointwise, e.p, fine)
}

fn family_rows(family: &SampleFamily, grid: CircleGrid, e: Exponents) -> Result<Vec<SampleRow>> {
    (0..family.count)
        .map(|i| {
            let f = family.member(i, grid)?;
            Ok(SampleRow::new(i, gagliardo_norm(&f, e)?, triebel_norm(&f, e)?))
        })
        .collect()
}

fn min_ratio(rows: &[SampleRow]) -> f64 {
    rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min)
}

/// Two-sided ratios Ẇ/Ḟ over a family at `grid` and twice its size.
pub fn norm_equivalence_report(family: &SampleFamily, grid: CircleGrid, e: Exponents) -> Result<RatioReport> {
    let params = json!({"s": e.s, "p": e.p, "q": e.q, "grid": grid.size(), "bandwidth": family.bandwidth, "count": family.count});
    if let Err(err) = e.check() {
        return Ok(RatioReport::refused("norm_equivalence", params, err.to_string()));
    }
    let rows = family_rows(family, grid, e)?;
    let fine = family_rows(family, grid.refined(2)?, e)?;
    let (lo, hi) = (min_ratio(&rows), max_finite_ratio(&rows));
    let spread = hi / lo;
    let mut r = RatioReport::new("norm_equivalence", params, Some(family.seed), rows);
    let upper = Stability::new(hi, max_finite_ratio(&fine), DEFAULT_STABILITY);
    let lower = Stability::new(lo, min_ratio(&fine), DEFAULT_STABILITY);
    r.note(format!("ratio range [{lo:.6}, {hi:.6}], spread {spread:.3}"));
    r.note(format!("refined range [{:.6}, {:.6}]", lower.fine, upper.fine));
    r.measured = spread;
    r.tolerance = SPREAD_LIMIT;
    let finite = r.all_finite() && lo > 0.0;
    r.require(finite, "non-finite or vanishing ratio");
    r.require(spread <= SPREAD_LIMIT, "two-sided ratio spread too large");
    r.require(upper.stable && lower.stable, "ratio range not stable under grid doubling");
    r.stability = Some(upper);
    Ok(r)
}

/// Ratios for f = cos(jx) at each j.
pub fn single_mode_ratios(grid: CircleGrid, modes: &[u32], e: Exponents) -> Result<Vec<f64>> {
    modes
        .iter()
        .map(|&j| {
            let f = GridField::from_fn(grid, 1, |x: f64, _| (j as f64 * x).cos());
            Ok(gagliardo_norm(&f, e)? / triebel_norm(&f, e)?)
        })
        .collect()
}
