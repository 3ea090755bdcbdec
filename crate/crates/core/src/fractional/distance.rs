use crate::scalar::{from_usize, Real};
use crate::spectral::CircleGrid;

/// Chordal distance 2|sin((x−y)/2)|.
#[inline]
pub fn circle_distance<T: Real>(x: T, y: T) -> T {
    let two = T::one() + T::one();
    two * ((x - y) / two).sin().abs()
}

/// Distances between nodes at index offset m, symmetric in m ↔ N−m bitwise.
#[derive(Clone, Debug)]
pub struct OffsetTable<T> {
    chord: Vec<T>,
}

impl<T: Real> OffsetTable<T> {
    pub fn new(grid: CircleGrid) -> Self {
        let n = grid.size();
        let mut chord = vec![T::zero(); n];
        let two = T::one() + T::one();
        for m in 1..=n / 2 {
            let v = two * (T::PI() * from_usize(m) / from_usize(n)).sin();
            chord[m] = v;
            chord[n - m] = v;
        }
        Self { chord }
    }

    #[inline]
    pub fn chord(&self, m: usize) -> T {
        self.chord[m]
    }

    /// |x−y|^{−p} by offset, with 0 at the diagonal.
    pub fn inverse_power(&self, p: T) -> Vec<T> {
        self.chord.iter().enumerate().map(|(m, d)| if m == 0 { T::zero() } else { d.powf(-p) }).collect()
    }

    /// |x−y|^{−2} by offset, with 0 at the diagonal.
    pub fn inverse_square(&self) -> Vec<T> {
        self.chord.iter().enumerate().map(|(m, d)| if m == 0 { T::zero() } else { T::one() / (*d * *d) }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn distance_examples() {
        assert_eq!(circle_distance(0.7f64, 0.7), 0.0);
        assert!((circle_distance(0.0f64, PI) - 2.0).abs() < 1e-15);
        assert!((circle_distance(0.0f64, PI / 2.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((circle_distance(0.0f64, 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn offsets_symmetric() {
        let t = OffsetTable::<f64>::new(CircleGrid::new(64).unwrap());
        for m in 1..64 {
            assert_eq!(t.chord(m).to_bits(), t.chord(64 - m).to_bits());
        }
    }
}
