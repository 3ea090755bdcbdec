use rayon::prelude::*;

use crate::error::{config, Result};
use crate::fractional::distance::OffsetTable;
use crate::fractional::kernel::OffDiagonalKernel;
use crate::scalar::{lit, Real};
use crate::spectral::{analyze, fractional_laplacian, grid_derivative, synthesize, GridField, SphereField};

/// Diagonal contribution per node of ∫ F G dy/|x−y|, or None when unknown or zero.
fn diagonal_term<T: Real>(f: &OffDiagonalKernel<T>, g: &OffDiagonalKernel<T>, i: usize, cf: usize, cg: usize) -> T {
    let exponent = T::one() - f.order() - g.order();
    if exponent > lit(1e-12) {
        return T::zero();
    }
    if exponent.abs() <= lit(1e-12) {
        if let (Some(a), Some(b)) = (f.slope(i, cf), g.slope(i, cg)) {
            return a * b;
        }
    }
    T::zero()
}

/// F·G(x) = ∫ F(x,y)·G(x,y) dy/|x−y|, contracted over components.
///
/// Trapezoid over the off-diagonal nodes; the diagonal node uses the product of
/// the stored slopes when both kernels carry them and the integrand has a finite
/// nonzero limit there.
pub fn pair<T: Real>(f: &OffDiagonalKernel<T>, g: &OffDiagonalKernel<T>) -> Result<GridField<T>> {
    f.check_compatible(g)?;
    let grid = f.grid();
    let n = grid.size();
    let h: T = grid.spacing();
    let inv = OffsetTable::new(grid).inverse_power(T::one());
    let m = f.components();
    let data: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = T::zero();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let a = f.pair_values(i, j);
                let b = g.pair_values(i, j);
                let mut dot = T::zero();
                for c in 0..m {
                    dot = dot + a[c] * b[c];
                }
                acc = acc + dot * inv[(j + n - i) % n];
            }
            let diag: T = (0..m).map(|c| diagonal_term(f, g, i, c, c)).sum();
            h * (acc + diag)
        })
        .collect();
    GridField::new(grid, 1, data)
}

/// (Ω·G)^i(x) = Σ_k ∫ Ω_{ik}(x,y) G^k(x,y) dy/|x−y| for an n×n matrix kernel Ω and n-vector kernel G.
pub fn matrix_pair<T: Real>(omega: &OffDiagonalKernel<T>, g: &OffDiagonalKernel<T>) -> Result<GridField<T>> {
    let dim = g.components();
    if omega.components() != dim * dim || omega.grid() != g.grid() {
        return Err(config(format!(
            "matrix kernel with {} components cannot act on a {}-vector kernel",
            omega.components(),
            dim
        )));
    }
    let grid = g.grid();
    let n = grid.size();
    let h: T = grid.spacing();
    let inv = OffsetTable::new(grid).inverse_power(T::one());
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![T::zero(); dim];
            for j in 0..n {
                if j == i {
                    continue;
                }
                let w = inv[(j + n - i) % n];
                let om = omega.pair_values(i, j);
                let gv = g.pair_values(i, j);
                for (a, row) in acc.iter_mut().enumerate() {
                    let mut dot = T::zero();
                    for k in 0..dim {
                        dot = dot + om[a * dim + k] * gv[k];
                    }
                    *row = *row + dot * w;
                }
            }
            for (a, row) in acc.iter_mut().enumerate() {
                let diag: T = (0..dim).map(|k| diagonal_term(omega, g, i, a * dim + k, k)).sum();
                *row = h * (*row + diag);
            }
            acc
        })
        .collect();
    let mut out = GridField::zeros(grid, dim);
    for (i, row) in rows.iter().enumerate() {
        for (a, v) in row.iter().enumerate() {
            out.set(i, a, *v);
        }
    }
    Ok(out)
}

/// (d_{1/2}f · d_{1/2}g)(x) = ∫ (f(x)−f(y))·(g(x)−g(y)) / |x−y|² dy, evaluated without storing kernels.
///
/// The diagonal node takes the limit f'(x)·g'(x).
pub fn gradient_pairing<T: Real>(f: &GridField<T>, g: &GridField<T>) -> Result<GridField<T>> {
    f.check_shape(g)?;
    let grid = f.grid();
    let n = grid.size();
    let h: T = grid.spacing();
    let inv_sq = OffsetTable::new(grid).inverse_square();
    let df = grid_derivative(f);
    let dg = grid_derivative(g);
    let comps = f.components();
    let data: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = T::zero();
            for m in 1..n {
                let j = (i + m) % n;
                let mut dot = T::zero();
                for c in 0..comps {
                    let a = f.component(c);
                    let b = g.component(c);
                    dot = dot + (a[i] - a[j]) * (b[i] - b[j]);
                }
                acc = acc + dot * inv_sq[m];
            }
            let diag: T = (0..comps).map(|c| df.value(i, c) * dg.value(i, c)).sum();
            h * (acc + diag)
        })
        .collect();
    GridField::new(grid, 1, data)
}

/// λ_raw(x) = ∫ |u(x)−u(y)|² / |x−y|² dy by trapezoidal quadrature with the |u'(x)|² diagonal limit.
pub fn lambda_raw<T: Real>(u: &SphereField<T>) -> GridField<T> {
    lambda_raw_field(u.field())
}

/// λ_raw for an arbitrary grid field.
pub fn lambda_raw_field<T: Real>(f: &GridField<T>) -> GridField<T> {
    let grid = f.grid();
    let n = grid.size();
    let h: T = grid.spacing();
    let inv_sq = OffsetTable::new(grid).inverse_square();
    let df = grid_derivative(f);
    let comps = f.components();
    let data: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = T::zero();
            for m in 1..n {
                let j = if i + m < n { i + m } else { i + m - n };
                let mut sq = T::zero();
                for c in 0..comps {
                    let a = f.component(c);
                    let d = a[i] - a[j];
                    sq = sq + d * d;
                }
                acc = acc + sq * inv_sq[m];
            }
            let diag: T = (0..comps).map(|c| df.value(i, c).powi(2)).sum();
            h * (acc + diag)
        })
        .collect();
    GridField::new(grid, 1, data).expect("shape")
}

/// λ_raw through multipliers: 2π u·(−Δ)^{1/2}u − π(−Δ)^{1/2}|u|², evaluated on a doubled grid
/// so the quadratic term is not aliased. Agrees with the quadrature path for every grid field.
pub fn lambda_raw_spectral<T: Real>(f: &GridField<T>) -> GridField<T> {
    let grid = f.grid();
    let fine = grid.refined(2).expect("refined grid");
    let c = analyze(f);
    let uf = synthesize(&c, fine).expect("fits");
    let lap = synthesize(&fractional_laplacian(&c, lit(0.5)), fine).expect("fits");
    let sq = GridField::new(fine, 1, uf.pointwise_norms().iter().map(|r| *r * *r).collect()).expect("shape");
    let lap_sq = synthesize(&fractional_laplacian(&analyze(&sq), lit(0.5)), fine).expect("fits");
    let dot = uf.dot(&lap).expect("shape");
    let n = grid.size();
    let data = (0..n).map(|i| T::TAU() * dot[2 * i] - T::PI() * lap_sq.value(2 * i, 0)).collect();
    GridField::new(grid, 1, data).expect("shape")
}
