use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::scalar::{from_usize, Real};

/// Uniform periodic grid x_j = 2πj/N on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct CircleGrid {
    size: usize,
}

impl CircleGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 8 || !size.is_power_of_two() {
            return Err(config(format!("grid size must be a power of two >= 8, got {size}")));
        }
        Ok(Self { size })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Highest retained mode K = N/2 - 1 (the Nyquist mode is dropped).
    #[inline]
    pub fn max_mode(&self) -> usize {
        self.size / 2 - 1
    }

    #[inline]
    pub fn spacing<T: Real>(&self) -> T {
        T::TAU() / from_usize(self.size)
    }

    #[inline]
    pub fn node<T: Real>(&self, j: usize) -> T {
        T::TAU() * from_usize(j) / from_usize(self.size)
    }

    pub fn nodes<T: Real>(&self) -> Vec<T> {
        (0..self.size).map(|j| self.node(j)).collect()
    }

    /// Grid with `factor` times as many nodes.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.size * factor)
    }
}

impl TryFrom<usize> for CircleGrid {
    type Error = crate::Error;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<CircleGrid> for usize {
    fn from(g: CircleGrid) -> usize {
        g.size
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(CircleGrid::new(4).is_err());
        assert!(CircleGrid::new(12).is_err());
        assert!(CircleGrid::new(16).is_ok());
    }

    #[test]
    fn nodes_increase_in_period() {
        let g = CircleGrid::new(32).unwrap();
        let x: Vec<f64> = g.nodes();
        assert_eq!(x[0], 0.0);
        assert!(x.windows(2).all(|w| w[0] < w[1]));
        assert!(*x.last().unwrap() < std::f64::consts::TAU);
        assert_eq!(g.max_mode(), 15);
    }
}
