use num_complex::Complex;

use crate::error::{domain, Result};
use crate::scalar::{from_i64, lit, Real};
use crate::spectral::{analyze, synthesize, GridField, SpectralField, SphereField};

#[inline]
fn abs_k<T: Real>(k: i64) -> T {
    from_i64::<T>(k.abs())
}

/// Multiplier |k|^{2s}; the zero mode is annihilated.
pub fn fractional_laplacian<T: Real>(f: &SpectralField<T>, s: T) -> SpectralField<T> {
    let two_s = s + s;
    f.apply_symbol(|k| if k == 0 { T::zero() } else { abs_k::<T>(k).powf(two_s) })
}

/// Multiplier ik (spatial derivative).
pub fn riesz_gradient<T: Real>(f: &SpectralField<T>) -> SpectralField<T> {
    f.apply_complex_symbol(|k| Complex::new(T::zero(), from_i64(k)))
}

/// Sobolev norm: inhomogeneous 2π Σ (1+n²)^s |û|², homogeneous 2π Σ |n|^{2s} |û|² (n ≠ 0).
pub fn sobolev_norm<T: Real>(f: &SpectralField<T>, s: T, homogeneous: bool) -> T {
    let total = if homogeneous {
        let two_s = s + s;
        f.weighted_sum(|k| if k == 0 { T::zero() } else { abs_k::<T>(k).powf(two_s) })
    } else {
        f.weighted_sum(|k| (T::one() + abs_k::<T>(k).powi(2)).powf(s))
    };
    (T::TAU() * total).sqrt()
}

/// π Σ |k| |û(k)|² over all components.
pub fn energy_of<T: Real>(f: &SpectralField<T>) -> T {
    T::PI() * f.weighted_sum(abs_k::<T>)
}

/// Half-energy ½ ∫ |(−Δ)^{1/4} u|².
pub fn half_energy<T: Real>(u: &SphereField<T>) -> T {
    energy_of(&analyze(u.field()))
}

/// Half-energy of an arbitrary grid field.
pub fn grid_energy<T: Real>(u: &GridField<T>) -> T {
    energy_of(&analyze(u))
}

/// Multiplier e^{-|k| t}.
pub fn heat_propagate<T: Real>(f: &SpectralField<T>, t: T) -> Result<SpectralField<T>> {
    if !(t >= T::zero()) {
        return Err(domain(format!("heat propagation needs t >= 0, got {t}")));
    }
    Ok(f.apply_symbol(|k| (-abs_k::<T>(k) * t).exp()))
}

/// (−Δ)^s applied to grid samples.
pub fn grid_fractional_laplacian<T: Real>(f: &GridField<T>, s: T) -> GridField<T> {
    synthesize(&fractional_laplacian(&analyze(f), s), f.grid()).expect("band preserved")
}

/// Spectral derivative of grid samples.
pub fn grid_derivative<T: Real>(f: &GridField<T>) -> GridField<T> {
    synthesize(&riesz_gradient(&analyze(f)), f.grid()).expect("band preserved")
}

/// Symbol of convolution with the standard bump rescaled to support [−ε, ε].
///
/// The bump ρ(t) = c exp(−1/(1−t²)) has unit mass; m(ξ) = ∫ ρ(t) cos(ξ t) dt.
pub struct BumpMollifier {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    mass: f64,
}

impl Default for BumpMollifier {
    fn default() -> Self {
        Self::new()
    }
}

impl BumpMollifier {
    pub fn new() -> Self {
        let m = 4096usize;
        let h = 2.0 / m as f64;
        let nodes: Vec<f64> = (1..m).map(|i| -1.0 + i as f64 * h).collect();
        let raw: Vec<f64> = nodes.iter().map(|t| (-1.0 / (1.0 - t * t)).exp()).collect();
        let mass: f64 = raw.iter().sum::<f64>() * h;
        let weights = raw.iter().map(|r| r * h / mass).collect();
        Self { nodes, weights, mass }
    }

    /// Bump density at t (unit mass on [−1, 1]).
    pub fn density(&self, t: f64) -> f64 {
        if t.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - t * t)).exp() / self.mass
        }
    }

    pub fn symbol(&self, xi: f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(t, w)| w * (xi * t).cos()).sum()
    }

    /// ρ_ε ∗ f for a grid field (periodic convolution of the trigonometric interpolant).
    pub fn convolve<T: Real>(&self, f: &GridField<T>, eps: f64) -> Result<GridField<T>> {
        if !(eps > 0.0 && eps < std::f64::consts::PI) {
            return Err(domain(format!("mollifier radius must lie in (0, π), got {eps}")));
        }
        let c = analyze(f);
        let kk = c.max_mode() as i64;
        let table: Vec<T> = (0..=kk).map(|k| lit(self.symbol(eps * k as f64))).collect();
        synthesize(&c.apply_symbol(|k| table[k.unsigned_abs() as usize]), f.grid())
    }
}
