//! Two-point calculus: fractional gradients, pairings, divergences, the C(j,k)
//! coefficients, the antisymmetric potential Ω and the three-term functional T.

mod cjk;
pub mod constants;
mod distance;
mod divergence;
mod kernel;
mod pairing;
mod potential;

pub use cjk::{build_table, cjk, product_spectrum, CjkTable};
pub use constants::Normalization;
pub use distance::{circle_distance, OffsetTable};
pub use divergence::{duality_pairing, frac_divergence};
pub use kernel::{frac_gradient_kernel, DiagonalPolicy, OffDiagonalKernel, MAX_STORED_GRID};
pub use pairing::{gradient_pairing, lambda_raw, lambda_raw_field, lambda_raw_spectral, matrix_pair, pair};
pub use potential::{divfree_correction, omega_potential, t_functional, DivFreeCorrection, HALF};
