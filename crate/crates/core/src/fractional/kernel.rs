use rayon::prelude::*;

use crate::error::{config, domain, Result};
use crate::fractional::distance::OffsetTable;
use crate::scalar::Real;
use crate::spectral::{grid_derivative, CircleGrid, GridField};

/// Largest grid on which two-point kernels are stored densely.
pub const MAX_STORED_GRID: usize = 4096;

/// Treatment of the node pair x = y.
#[derive(Clone, Debug, PartialEq)]
pub enum DiagonalPolicy<T> {
    /// Nothing is known about the behaviour near the diagonal.
    Omit,
    /// F(x,y) ≈ ℓ(x) (x−y) |x−y|^{−s} as y → x; stores ℓ per node, component-major.
    AnalyticLimit(Vec<T>),
}

/// Two-point function F(x_i, x_j) sampled on all node pairs.
///
/// `order` is the exponent s of the difference quotient the kernel behaves like,
/// so F vanishes like |x−y|^{1−s} at the diagonal.
#[derive(Clone, Debug)]
pub struct OffDiagonalKernel<T> {
    grid: CircleGrid,
    components: usize,
    order: T,
    values: Vec<T>,
    diagonal: DiagonalPolicy<T>,
}

impl<T: Real> OffDiagonalKernel<T> {
    /// Builds a kernel from `fill(i, j, out)` writing the `components` values at (x_i, x_j).
    pub fn from_fn(
        grid: CircleGrid,
        components: usize,
        order: T,
        diagonal: DiagonalPolicy<T>,
        fill: impl Fn(usize, usize, &mut [T]) + Sync,
    ) -> Result<Self> {
        let n = grid.size();
        if n > MAX_STORED_GRID {
            return Err(config(format!("dense kernels are limited to N <= {MAX_STORED_GRID}, got {n}")));
        }
        if let DiagonalPolicy::AnalyticLimit(ell) = &diagonal {
            if ell.len() != n * components {
                return Err(config("diagonal limit has the wrong length"));
            }
        }
        let mut values = vec![T::zero(); n * n * components];
        values.par_chunks_mut(n * components).enumerate().for_each(|(i, row)| {
            for j in 0..n {
                if j != i {
                    fill(i, j, &mut row[j * components..(j + 1) * components]);
                }
            }
        });
        Ok(Self { grid, components, order, values, diagonal })
    }

    #[inline]
    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    #[inline]
    pub fn components(&self) -> usize {
        self.components
    }

    #[inline]
    pub fn order(&self) -> T {
        self.order
    }

    pub fn diagonal(&self) -> &DiagonalPolicy<T> {
        &self.diagonal
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize, c: usize) -> T {
        let n = self.grid.size();
        self.values[(i * n + j) * self.components + c]
    }

    /// All component values at (x_i, x_j).
    #[inline]
    pub fn pair_values(&self, i: usize, j: usize) -> &[T] {
        let n = self.grid.size();
        let m = self.components;
        &self.values[(i * n + j) * m..(i * n + j + 1) * m]
    }

    /// Diagonal slope ℓ_c(x_i), if known.
    pub fn slope(&self, i: usize, c: usize) -> Option<T> {
        match &self.diagonal {
            DiagonalPolicy::Omit => None,
            DiagonalPolicy::AnalyticLimit(ell) => Some(ell[c * self.grid.size() + i]),
        }
    }

    pub fn with_diagonal_omitted(mut self) -> Self {
        self.diagonal = DiagonalPolicy::Omit;
        self
    }

    /// max |F(x_i,x_j) + F(x_j,x_i)| over pairs and components.
    pub fn swap_symmetric_part(&self) -> T {
        let n = self.grid.size();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                for c in 0..self.components {
                    worst = worst.max((self.value(i, j, c) + self.value(j, i, c)).abs());
                }
            }
        }
        worst
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |a, v| a.max(v.abs()))
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Difference of two kernels of identical shape (diagonal slopes subtracted when both known).
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a - *b).collect();
        let diagonal = match (&self.diagonal, &other.diagonal) {
            (DiagonalPolicy::AnalyticLimit(a), DiagonalPolicy::AnalyticLimit(b)) => {
                DiagonalPolicy::AnalyticLimit(a.iter().zip(b).map(|(x, y)| *x - *y).collect())
            }
            _ => DiagonalPolicy::Omit,
        };
        Ok(Self { values, diagonal, ..self.clone() })
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.components != other.components {
            return Err(config(format!(
                "kernel shapes differ: ({}, {}) vs ({}, {})",
                self.grid.size(),
                self.components,
                other.grid.size(),
                other.components
            )));
        }
        Ok(())
    }

    /// Selects one component as a scalar kernel.
    pub fn component_kernel(&self, c: usize) -> Result<Self> {
        if c >= self.components {
            return Err(config("component index out of range"));
        }
        let n = self.grid.size();
        let values = (0..n * n).map(|p| self.values[p * self.components + c]).collect();
        let diagonal = match &self.diagonal {
            DiagonalPolicy::Omit => DiagonalPolicy::Omit,
            DiagonalPolicy::AnalyticLimit(ell) => DiagonalPolicy::AnalyticLimit(ell[c * n..(c + 1) * n].to_vec()),
        };
        Ok(Self { grid: self.grid, components: 1, order: self.order, values, diagonal })
    }
}

/// d_s f(x,y) = (f(x) − f(y)) / |x−y|^s for each component of f.
///
/// The stored diagonal value is 0; the slope f'(x) is kept so pairings can use
/// the exact diagonal limit.
pub fn frac_gradient_kernel<T: Real>(f: &GridField<T>, s: T) -> Result<OffDiagonalKernel<T>> {
    if !(s >= T::zero() && s < T::one()) {
        return Err(domain(format!("fractional gradient order must lie in [0, 1), got {s}")));
    }
    let grid = f.grid();
    let n = grid.size();
    let weights = OffsetTable::new(grid).inverse_power(s);
    let slope = grid_derivative(f).into_data();
    let m = f.components();
    OffDiagonalKernel::from_fn(grid, m, s, DiagonalPolicy::AnalyticLimit(slope), |i, j, out| {
        let w = weights[(j + n - i) % n];
        for (c, o) in out.iter_mut().enumerate() {
            *o = (f.value(i, c) - f.value(j, c)) * w;
        }
    })
}
