//! Half-harmonic gradient flow on the circle with values in the unit sphere.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); concrete
//! aliases for both are exported below.

mod error;
mod scalar;

pub mod flow;
pub mod fractional;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{lit, to_f64, Real};
pub use fractional::{CjkTable, Normalization, OffDiagonalKernel};
pub use spectral::{CircleGrid, GridField, SpectralField, SphereField};

pub type GridField64 = GridField<f64>;
pub type GridField32 = GridField<f32>;
pub type SpectralField64 = SpectralField<f64>;
pub type SpectralField32 = SpectralField<f32>;
pub type SphereField64 = SphereField<f64>;
pub type SphereField32 = SphereField<f32>;
pub type OffDiagonalKernel64 = OffDiagonalKernel<f64>;
pub type OffDiagonalKernel32 = OffDiagonalKernel<f32>;
pub type FlowState64 = flow::FlowState<f64>;
pub type FlowState32 = flow::FlowState<f32>;
pub type RunOutput64 = flow::RunOutput<f64>;
