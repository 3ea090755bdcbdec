use rayon::prelude::*;

use crate::error::{config, domain, Result};
use crate::fractional::constants::Normalization;
use crate::fractional::distance::OffsetTable;
use crate::fractional::divergence::frac_divergence;
use crate::fractional::kernel::{frac_gradient_kernel, DiagonalPolicy, OffDiagonalKernel};
use crate::scalar::{from_i64, lit, Real};
use crate::spectral::{analyze, grid_derivative, synthesize, GridField, SphereField};

/// Factor carried by the three-term functional so that u λ_raw = Ω·d_{1/2}u + T(u,u,u) closes.
pub const HALF: f64 = 0.5;

/// Ω_{ik}(x,y) = u^i(x) d_{1/2}u^k(x,y) − u^k(x) d_{1/2}u^i(x,y), stored with component index i·n + k.
pub fn omega_potential<T: Real>(u: &SphereField<T>) -> Result<OffDiagonalKernel<T>> {
    let f = u.field();
    let grid = f.grid();
    let n = grid.size();
    let dim = f.components();
    let w = OffsetTable::new(grid).inverse_power(lit(0.5));
    let du = grid_derivative(f);
    let mut slope = vec![T::zero(); n * dim * dim];
    for j in 0..n {
        for a in 0..dim {
            for b in (a + 1)..dim {
                let v = f.value(j, a) * du.value(j, b) - f.value(j, b) * du.value(j, a);
                slope[(a * dim + b) * n + j] = v;
                slope[(b * dim + a) * n + j] = -v;
            }
        }
    }
    OffDiagonalKernel::from_fn(grid, dim * dim, lit(0.5), DiagonalPolicy::AnalyticLimit(slope), |i, j, out| {
        let wt = w[(j + n - i) % n];
        for a in 0..dim {
            for b in (a + 1)..dim {
                let dk = (f.value(i, b) - f.value(j, b)) * wt;
                let di = (f.value(i, a) - f.value(j, a)) * wt;
                let v = f.value(i, a) * dk - f.value(i, b) * di;
                out[a * dim + b] = v;
                out[b * dim + a] = -v;
            }
        }
    })
}

/// T^i(u,v,w)(x) = ½ Σ_k ∫ d_{1/2}u^i d_{1/4}v^k d_{1/4}w^k dy/|x−y|.
///
/// The integrand vanishes at the diagonal, so the diagonal node contributes 0.
pub fn t_functional<T: Real>(u: &GridField<T>, v: &GridField<T>, w: &GridField<T>) -> Result<GridField<T>> {
    v.check_shape(w)?;
    if u.grid() != v.grid() {
        return Err(config("t_functional needs fields on one grid"));
    }
    let grid = u.grid();
    let n = grid.size();
    let h: T = grid.spacing();
    let inv_sq = OffsetTable::new(grid).inverse_square();
    let half: T = lit(HALF);
    let (nu, nv) = (u.components(), v.components());
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![T::zero(); nu];
            for m in 1..n {
                let j = (i + m) % n;
                let mut vw = T::zero();
                for k in 0..nv {
                    vw = vw + (v.value(i, k) - v.value(j, k)) * (w.value(i, k) - w.value(j, k));
                }
                let weight = vw * inv_sq[m];
                for (a, slot) in acc.iter_mut().enumerate() {
                    *slot = *slot + (u.value(i, a) - u.value(j, a)) * weight;
                }
            }
            acc.into_iter().map(|a| half * h * a).collect()
        })
        .collect();
    let mut out = GridField::zeros(grid, nu);
    for (i, row) in rows.iter().enumerate() {
        for (a, val) in row.iter().enumerate() {
            out.set(i, a, *val);
        }
    }
    Ok(out)
}

/// Result of removing the divergence of a two-point kernel.
#[derive(Clone, Debug)]
pub struct DivFreeCorrection<T> {
    pub kernel: OffDiagonalKernel<T>,
    /// Potential h per component with div_grad·(−Δ)^{1/2}h = div_{1/2}Ω − mean, Nyquist mode included.
    pub potential: GridField<T>,
    /// Mean of the divergence removed per component before solving.
    pub removed_mean: Vec<T>,
}

/// Returns Ω − d_{1/2}h, where h solves div_grad·(−Δ)^{1/2}h = div_{1/2}Ω per component.
pub fn divfree_correction<T: Real>(omega: &OffDiagonalKernel<T>, norm: &Normalization) -> Result<DivFreeCorrection<T>> {
    let half: T = lit(0.5);
    if (omega.order() - half).abs() > lit(1e-12) {
        return Err(domain("divergence correction is defined for kernels of order 1/2"));
    }
    let div = frac_divergence(omega, half)?;
    let removed_mean = div.means();
    let c = analyze(&div);
    let scale: T = lit(norm.div_grad);
    let sol = c.apply_symbol(|k| if k == 0 { T::zero() } else { T::one() / (scale * from_i64::<T>(k.abs())) });
    let mut potential = synthesize(&sol, div.grid())?;
    // The Nyquist mode is outside the spectral range but d and div still act on it with symbol N/2.
    let n = div.grid().size();
    let nyquist_symbol = scale * from_i64::<T>(n as i64 / 2);
    for c in 0..div.components() {
        let mut alt = T::zero();
        for j in 0..n {
            alt = if j % 2 == 0 { alt + div.value(j, c) } else { alt - div.value(j, c) };
        }
        let amp = alt / (from_i64::<T>(n as i64) * nyquist_symbol);
        for j in 0..n {
            let v = potential.value(j, c);
            potential.set(j, c, if j % 2 == 0 { v + amp } else { v - amp });
        }
    }
    let dh = frac_gradient_kernel(&potential, half)?;
    let dh = match omega.diagonal() {
        DiagonalPolicy::Omit => dh.with_diagonal_omitted(),
        DiagonalPolicy::AnalyticLimit(_) => dh,
    };
    let kernel = omega.sub(&dh)?;
    Ok(DivFreeCorrection { kernel, potential, removed_mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::pairing::{lambda_raw, matrix_pair};
    use crate::spectral::CircleGrid;

    #[test]
    fn omega_is_antisymmetric_and_vanishes_for_constants() {
        let g = CircleGrid::new(32).unwrap();
        let u = SphereField::<f64>::identity(g, 3).unwrap();
        let om = omega_potential(&u).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                for a in 0..3 {
                    assert_eq!(om.value(i, j, a * 3 + a), 0.0);
                    for b in 0..3 {
                        assert!(om.value(i, j, a * 3 + b) == -om.value(i, j, b * 3 + a));
                    }
                }
            }
        }
        let c = SphereField::<f64>::constant(g, &[0.6, 0.8]).unwrap();
        assert_eq!(omega_potential(&c).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn decomposition_closes_for_identity() {
        let g = CircleGrid::new(64).unwrap();
        let u = SphereField::<f64>::identity(g, 2).unwrap();
        let om = omega_potential(&u).unwrap();
        let du = frac_gradient_kernel(u.field(), 0.5).unwrap();
        let lhs = u.field().mul_scalar_field(lambda_raw(&u).component(0)).unwrap();
        let rhs = matrix_pair(&om, &du).unwrap().add(&t_functional(u.field(), u.field(), u.field()).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn correction_removes_divergence_to_roundoff() {
        let g = CircleGrid::new(32).unwrap();
        let u = crate::sampling::perturbed_sphere::<f64>(g, &[0.0, 0.0, 1.0], 0.8, 4, 1.0, 5).unwrap();
        let om = omega_potential(&u).unwrap();
        let before = frac_divergence(&om, 0.5).unwrap().sup_norm();
        let fixed = divfree_correction(&om, &Normalization::default()).unwrap();
        let after = frac_divergence(&fixed.kernel, 0.5).unwrap();
        let mean = fixed.removed_mean.iter().fold(0.0f64, |a, m| a.max(m.abs()));
        assert!(after.sup_norm() <= mean + 1e-12 * before, "{} of {before}", after.sup_norm());
    }

    #[test]
    fn t_functional_symmetric_in_last_two() {
        let g = CircleGrid::new(32).unwrap();
        let u = GridField::from_fn(g, 2, |x: f64, c| (x + c as f64).sin());
        let v = GridField::from_fn(g, 2, |x: f64, c| (2.0 * x).cos() * (c as f64 + 1.0));
        let w = GridField::from_fn(g, 2, |x: f64, c| (3.0 * x - c as f64).sin());
        assert_eq!(t_functional(&u, &v, &w).unwrap(), t_functional(&u, &w, &v).unwrap());
        let k = GridField::from_fn(g, 2, |_, _| 0.7);
        assert_eq!(t_functional(&k, &v, &w).unwrap().sup_norm(), 0.0);
        assert_eq!(t_functional(&u, &k, &w).unwrap().sup_norm(), 0.0);
    }
}
