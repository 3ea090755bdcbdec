//! Spectral representation of functions on the circle and Fourier multipliers.

mod field;
mod grid;
mod multiplier;
mod transform;

pub use field::{sphere_drift, GridField, SpectralField, SphereField};
pub use grid::CircleGrid;
pub use multiplier::{
    energy_of, fractional_laplacian, grid_derivative, grid_energy, grid_fractional_laplacian, half_energy,
    heat_propagate, riesz_gradient, sobolev_norm, BumpMollifier,
};
pub use transform::{analyze, analyze_complex, resample, synthesize, synthesize_complex};
