use halflow::sampling::RandomSpectrum;
use halflow::spectral::{CircleGrid, SpectralField};
use halflow::{GridField64, Result};
use serde::{Deserialize, Serialize};

/// Coefficient amplitude law (1 + |k|)^{−decay}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeLaw {
    pub decay: f64,
}

/// Seeded family of band-limited random fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleFamily {
    pub generator: String,
    pub seed: u64,
    pub count: usize,
    pub bandwidth: usize,
    pub components: usize,
    pub amplitude: AmplitudeLaw,
}

impl SampleFamily {
    pub fn gaussian(seed: u64, count: usize, bandwidth: usize, components: usize, decay: f64) -> Self {
        Self {
            generator: "gaussian-spectrum".into(),
            seed,
            count,
            bandwidth,
            components,
            amplitude: AmplitudeLaw { decay },
        }
    }

    /// Seed of member i; members are independent streams.
    pub fn member_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
    }

    fn spectrum(&self) -> RandomSpectrum {
        RandomSpectrum::new(self.components, self.bandwidth, self.amplitude.decay)
    }

    pub fn coefficients(&self, i: usize, grid: CircleGrid) -> Result<SpectralField<f64>> {
        self.spectrum().draw(grid, self.member_seed(i))
    }

    pub fn member(&self, i: usize, grid: CircleGrid) -> Result<GridField64> {
        self.spectrum().sample(grid, self.member_seed(i))
    }

    pub fn with_bandwidth(&self, bandwidth: usize) -> Self {
        Self { bandwidth, ..self.clone() }
    }
}
