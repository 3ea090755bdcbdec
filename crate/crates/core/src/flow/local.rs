use num_complex::Complex;

use crate::error::{domain, Result};
use crate::scalar::{from_i64, lit, Real};
use crate::spectral::{analyze, fractional_laplacian, synthesize, GridField, SpectralField};

/// Pointwise density |(−Δ)^a u|^{2p} with its exact Fourier coefficients.
///
/// The density is a trigonometric polynomial of degree 2pK, so it is sampled on a
/// grid refined by 2p, where the transform reproduces it exactly.
pub struct Density<T> {
    coeffs: SpectralField<T>,
    factor: usize,
}

impl<T: Real> Density<T> {
    pub fn new(u: &GridField<T>, a: T, p: u32) -> Result<Self> {
        let factor = 2 * p as usize;
        let fine = u.grid().refined(factor)?;
        let c = analyze(u);
        let w = if a == T::zero() { c } else { fractional_laplacian(&c, a) };
        let wf = synthesize(&w, fine)?;
        let vals: Vec<T> = wf.pointwise_norms().iter().map(|r| (*r * *r).powi(p as i32)).collect();
        let coeffs = analyze(&GridField::new(fine, 1, vals)?);
        Ok(Self { coeffs, factor })
    }

    /// ∫ over the arc [x0 − R, x0 + R].
    pub fn arc_integral(&self, x0: T, r: T) -> T {
        let kk = self.coeffs.max_mode() as i64;
        let two = lit::<T>(2.0);
        let mut acc = self.coeffs.coeff(0, 0).re * two * r;
        for k in 1..=kk {
            let kf: T = from_i64(k);
            let w = two * (kf * r).sin() / kf;
            let phase = Complex::new((kf * x0).cos(), (kf * x0).sin());
            let z = self.coeffs.coeff(0, k) * phase;
            acc = acc + two * z.re * w;
        }
        acc
    }

    /// Arc integrals centred at every node of the original grid.
    pub fn arc_profile(&self, r: T) -> Vec<T> {
        let two = lit::<T>(2.0);
        let sym = self.coeffs.apply_symbol(|k| if k == 0 { two * r } else { two * (from_i64::<T>(k) * r).sin() / from_i64::<T>(k) });
        let vals = synthesize(&sym, self.coeffs.grid()).expect("fits");
        vals.component(0).iter().step_by(self.factor).copied().collect()
    }

    pub fn total(&self) -> T {
        self.coeffs.coeff(0, 0).re * T::TAU()
    }
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if !(r > T::zero() && r <= T::PI()) {
        return Err(domain(format!("arc radius must lie in (0, π], got {r}")));
    }
    Ok(())
}

/// E_R(u; x0) = ½ ∫_{B_R(x0)} |(−Δ)^{1/4}u|² with B_R the arc of angular radius R.
pub fn local_energy<T: Real>(u: &GridField<T>, x0: T, r: T) -> Result<T> {
    check_radius(r)?;
    Ok(lit::<T>(0.5) * Density::new(u, lit(0.25), 1)?.arc_integral(x0, r))
}

/// E_R centred at each grid node.
pub fn local_energy_profile<T: Real>(u: &GridField<T>, r: T) -> Result<Vec<T>> {
    check_radius(r)?;
    Ok(Density::new(u, lit(0.25), 1)?.arc_profile(r).into_iter().map(|v| v * lit(0.5)).collect())
}

/// max over nodes of E_R.
pub fn local_energy_sup<T: Real>(u: &GridField<T>, r: T) -> Result<T> {
    Ok(local_energy_profile(u, r)?.into_iter().fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{grid_energy, CircleGrid, SphereField};
    use std::f64::consts::PI;

    #[test]
    fn identity_half_circle() {
        let g = CircleGrid::new(64).unwrap();
        let u = SphereField::<f64>::identity(g, 2).unwrap();
        let e = local_energy(u.field(), 0.3, PI / 2.0).unwrap();
        assert!((e - PI / 2.0).abs() < 1e-12);
        let whole = local_energy(u.field(), 1.0, PI).unwrap();
        assert!((whole - PI).abs() < 1e-12);
    }

    #[test]
    fn covering_exceeds_total() {
        let g = CircleGrid::new(128).unwrap();
        let u = GridField::from_fn(g, 2, |x: f64, c| ((c + 2) as f64 * x).sin() + 0.2 * (7.0 * x).cos());
        let r = 0.3;
        let centres: Vec<f64> = (0..12).map(|i| i as f64 * std::f64::consts::TAU / 12.0).collect();
        let sum: f64 = centres.iter().map(|x| local_energy(&u, *x, r).unwrap()).sum();
        assert!(sum >= grid_energy(&u) * (1.0 - 1e-12));
        let prof = local_energy_profile(&u, r).unwrap();
        for j in [0usize, 17, 64] {
            let direct = local_energy(&u, g.node(j), r).unwrap();
            assert!((prof[j] - direct).abs() < 1e-12);
        }
    }
}
