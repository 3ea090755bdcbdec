//! Normalization constants under the multiplier convention (−Δ)^{1/2} e^{ikx} = |k| e^{ikx}.
//!
//! Each value follows from the Fejér identity
//! ∫ sin²(kh/2)/sin²(h/2) dh = 2π|k| and is re-derived by a brute-force
//! quadrature oracle in this crate's tests.

use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

/// P.V. ∫ (f(x) − f(y)) / |x−y|² dy = π (−Δ)^{1/2} f(x).
pub const PV_HALF_LAPLACIAN: f64 = std::f64::consts::PI;

/// ∫ |d_{1/2} u|² dx = 2π ‖(−Δ)^{1/4} u‖²_{L²}.
pub const GRADIENT_PAIRING: f64 = std::f64::consts::TAU;

/// div_{1/2} d_{1/2} = 2π (−Δ)^{1/2}.
pub const DIV_GRAD: f64 = std::f64::consts::TAU;

/// Runtime copy of the constants used by the flow and the divergence correction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// λ = λ_raw / pairing.
    pub pairing: f64,
    /// Symbol of div_{1/2}∘d_{1/2} relative to (−Δ)^{1/2}.
    pub div_grad: f64,
}

impl Default for Normalization {
    fn default() -> Self {
        Self { pairing: GRADIENT_PAIRING, div_grad: DIV_GRAD }
    }
}

impl Normalization {
    pub fn lambda_scale<T: Real>(&self) -> T {
        lit::<T>(1.0 / self.pairing)
    }

    /// Coefficient of u (d_{1/2}u · d_{1/2}h) in the linearized flow.
    pub fn linear_coupling<T: Real>(&self) -> T {
        lit::<T>(2.0 / self.pairing)
    }
}
