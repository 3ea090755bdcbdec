//! Numerical checks of the analytic estimates behind the half-harmonic flow.
//!
//! Every check returns a [`RatioReport`]: per-sample left and right sides, the
//! empirical constant, a refinement-stability record and a verdict. Inequalities
//! without explicit constants are tested for finiteness and stability only.

pub mod family;
pub mod fracgrad;
pub mod holder;
pub mod ladyzhenskaya;
pub mod mollify;
pub mod norm_equiv;
mod norms;
pub mod product;
pub mod report;
pub mod stereographic;
pub mod struwe;
pub mod wente;

pub use family::{AmplitudeLaw, SampleFamily};
pub use norms::{h_norm, lp_norm, riesz_norm};
pub use report::{RatioReport, SampleRow, Stability, Verdict};
