//! Seeded random fields. Coefficients are drawn mode by mode in a fixed order
//! independent of the grid, so the same seed describes the same function on
//! every resolution that can hold its band.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{config, Result};
use crate::scalar::{lit, Real};
use crate::spectral::{synthesize, CircleGrid, GridField, SpectralField, SphereField};

/// Gaussian coefficients with amplitude (1+|k|)^{−decay} for 1 ≤ |k| ≤ bandwidth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpectrum {
    pub components: usize,
    pub bandwidth: usize,
    pub decay: f64,
    pub include_mean: bool,
}

impl RandomSpectrum {
    pub fn new(components: usize, bandwidth: usize, decay: f64) -> Self {
        Self { components, bandwidth, decay, include_mean: false }
    }

    /// Real-valued coefficients (conjugate symmetric) drawn from `seed`.
    pub fn draw<T: Real>(&self, grid: CircleGrid, seed: u64) -> Result<SpectralField<T>> {
        if self.bandwidth > grid.max_mode() {
            return Err(config(format!("band-width {} exceeds grid max mode {}", self.bandwidth, grid.max_mode())));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = SpectralField::zeros(grid, self.components, self.bandwidth);
        for c in 0..self.components {
            let mean: f64 = StandardNormal.sample(&mut rng);
            if self.include_mean {
                out.set(c, 0, Complex::new(lit(mean), T::zero()));
            }
            for k in 1..=self.bandwidth as i64 {
                let amp = (1.0 + k as f64).powf(-self.decay) / std::f64::consts::SQRT_2;
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let z = Complex::new(lit::<T>(re * amp), lit::<T>(im * amp));
                out.set(c, k, z);
                out.set(c, -k, z.conj());
            }
        }
        Ok(out)
    }

    pub fn sample<T: Real>(&self, grid: CircleGrid, seed: u64) -> Result<GridField<T>> {
        synthesize(&self.draw::<T>(grid, seed)?, grid)
    }
}

/// π∘(p + ε·noise) with the noise scaled to unit sup norm.
pub fn perturbed_sphere<T: Real>(
    grid: CircleGrid,
    point: &[f64],
    amplitude: f64,
    bandwidth: usize,
    decay: f64,
    seed: u64,
) -> Result<SphereField<T>> {
    let n = point.len();
    let noise = RandomSpectrum::new(n, bandwidth, decay).sample::<T>(grid, seed)?;
    let peak = noise.data().iter().fold(T::zero(), |a, v| a.max(v.abs()));
    let scale = if peak > T::zero() { lit::<T>(amplitude) / peak } else { T::zero() };
    let base = GridField::from_fn(grid, n, |_, c| lit::<T>(point[c]));
    SphereField::project(&base.add(&noise.scale(scale))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_function_across_grids() {
        let spec = RandomSpectrum::new(2, 6, 1.0);
        let a = spec.sample::<f64>(CircleGrid::new(32).unwrap(), 7).unwrap();
        let b = spec.sample::<f64>(CircleGrid::new(32).unwrap(), 7).unwrap();
        assert_eq!(a, b);
        let fine = spec.sample::<f64>(CircleGrid::new(64).unwrap(), 7).unwrap();
        for j in 0..32 {
            assert!((fine.value(2 * j, 1) - a.value(j, 1)).abs() < 1e-13);
        }
    }
}
