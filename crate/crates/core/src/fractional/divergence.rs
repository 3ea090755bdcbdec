use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::fractional::distance::OffsetTable;
use crate::fractional::kernel::OffDiagonalKernel;
use crate::scalar::Real;
use crate::spectral::GridField;

/// div_s F(x) = P.V. ∫ (F(x,y) − F(y,x)) / |x−y|^{1+s} dy.
///
/// Offsets ±m are added in matched pairs, and only odd offsets enter with
/// doubled weight. The pairing cancels the odd singular part; the odd-offset
/// rule is the trapezoid for a diagonal value reconstructed without the Nyquist
/// mode, so the result is exact whenever the paired integrand is a
/// trigonometric polynomial of degree below N/2.
pub fn frac_divergence<T: Real>(f: &OffDiagonalKernel<T>, s: T) -> Result<GridField<T>> {
    if !(s >= T::zero() && s < T::one()) {
        return Err(domain(format!("divergence order must lie in [0, 1), got {s}")));
    }
    let grid = f.grid();
    let n = grid.size();
    let comps = f.components();
    let h: T = grid.spacing();
    let w = OffsetTable::new(grid).inverse_power(T::one() + s);
    let two_h = h + h;
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![T::zero(); comps];
            let mut m = 1;
            while m < n / 2 {
                let jp = (i + m) % n;
                let jm = (i + n - m) % n;
                for (c, a) in acc.iter_mut().enumerate() {
                    let plus = f.value(i, jp, c) - f.value(jp, i, c);
                    let minus = f.value(i, jm, c) - f.value(jm, i, c);
                    *a = *a + (plus + minus) * w[m];
                }
                m += 2;
            }
            acc.into_iter().map(|a| two_h * a).collect()
        })
        .collect();
    let mut out = GridField::zeros(grid, comps);
    for (i, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            out.set(i, c, *v);
        }
    }
    Ok(out)
}

/// ∫∫ F(x,y) d_sφ(x,y) dx dy/|x−y| for a scalar kernel, the left side of the duality defining div_s.
pub fn duality_pairing<T: Real>(f: &OffDiagonalKernel<T>, phi: &GridField<T>, s: T) -> Result<T> {
    let dphi = crate::fractional::kernel::frac_gradient_kernel(phi, s)?;
    let pointwise = crate::fractional::pairing::pair(f, &dphi)?;
    Ok(pointwise.integrals()[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::kernel::{frac_gradient_kernel, DiagonalPolicy};
    use crate::spectral::{grid_fractional_laplacian, CircleGrid};
    use std::f64::consts::TAU;

    #[test]
    fn symmetric_kernel_has_zero_divergence() {
        let g = CircleGrid::new(32).unwrap();
        let f = GridField::from_fn(g, 1, |x: f64, _| x.cos());
        let k = OffDiagonalKernel::from_fn(g, 1, 0.5, DiagonalPolicy::Omit, |i, j, out| {
            out[0] = f.value(i, 0) * f.value(j, 0);
        })
        .unwrap();
        assert_eq!(frac_divergence(&k, 0.5).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn divergence_of_gradient_is_two_pi_half_laplacian() {
        let g = CircleGrid::new(256).unwrap();
        let f = GridField::from_fn(g, 1, |x: f64, _| (3.0 * x).sin() + 0.5 * (17.0 * x).cos() - 0.1 * (60.0 * x).sin());
        let d = frac_gradient_kernel(&f, 0.5).unwrap();
        let div = frac_divergence(&d, 0.5).unwrap();
        let expect = grid_fractional_laplacian(&f, 0.5).scale(TAU);
        let err = div.sub(&expect).unwrap().l2_norm() / expect.l2_norm();
        assert!(err < 1e-10, "relative error {err}");
    }
}
