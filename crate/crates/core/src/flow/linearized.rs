use crate::error::Result;
use crate::fractional::{gradient_pairing, lambda_raw_field, Normalization};
use crate::scalar::{from_i64, to_f64, Real};
use crate::spectral::{analyze, synthesize, GridField};

/// Linearization of the flow about a frozen map u:
/// h_t = −(−Δ)^{1/2}h + hλ + c·u (d_{1/2}u · d_{1/2}h), with λ = λ_raw/2π and c = 2/2π.
#[derive(Clone, Debug)]
pub struct Linearization<T> {
    pub u: GridField<T>,
    pub lambda: GridField<T>,
    pub coupling: T,
}

impl<T: Real> Linearization<T> {
    pub fn new(u: &GridField<T>, norm: &Normalization) -> Self {
        let s: T = norm.lambda_scale();
        let lambda = lambda_raw_field(u).map(|v| v * s);
        Self { u: u.clone(), lambda, coupling: norm.linear_coupling() }
    }

    /// Right side without the linear part.
    pub fn forcing(&self, h: &GridField<T>) -> Result<GridField<T>> {
        let lam = self.lambda.component(0);
        let mut out = h.mul_scalar_field(lam)?;
        let dd = gradient_pairing(&self.u, h)?;
        let w: Vec<T> = dd.component(0).iter().map(|v| *v * self.coupling).collect();
        out = out.add(&self.u.mul_scalar_field(&w)?)?;
        Ok(out)
    }

    /// One exponential step: ĥ ← e^{−|k|dt}(ĥ + dt·F̂(h)).
    pub fn step(&self, h: &GridField<T>, dt: T) -> Result<GridField<T>> {
        let f = analyze(&self.forcing(h)?);
        let next = analyze(h)
            .zip_with(&f, |a, b| a + b * dt)?
            .apply_symbol(|k| (-from_i64::<T>(k.abs()) * dt).exp());
        synthesize(&next, h.grid())
    }

    pub fn evolve(&self, h0: &GridField<T>, dt: T, steps: usize) -> Result<Vec<GridField<T>>> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(h0.clone());
        for _ in 0..steps {
            let next = self.step(out.last().expect("non-empty"), dt)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn sup_lambda(&self) -> f64 {
        self.lambda.component(0).iter().fold(f64::NEG_INFINITY, |m, v| m.max(to_f64(*v)))
    }

    /// Rate in the sup-norm growth bound ‖h(t)‖_∞ ≤ e^{Ĉt}‖h(0)‖_∞.
    /// The normal part of h grows like 2λ, so the rate is max(sup λ + 1, 2 sup λ).
    pub fn growth_constant(&self) -> f64 {
        let s = self.sup_lambda().max(0.0);
        (s + 1.0).max(2.0 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RandomSpectrum;
    use crate::spectral::{heat_propagate, CircleGrid, SphereField};

    #[test]
    fn zero_stays_zero() {
        let g = CircleGrid::new(32).unwrap();
        let u = SphereField::<f64>::identity(g, 2).unwrap();
        let lin = Linearization::new(u.field(), &Normalization::default());
        let h = GridField::zeros(g, 2);
        let out = lin.evolve(&h, 0.01, 20).unwrap();
        assert_eq!(out.last().unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn constant_map_gives_heat_flow() {
        let g = CircleGrid::new(32).unwrap();
        let u = SphereField::<f64>::constant(g, &[0.0, 0.0, 1.0]).unwrap();
        let lin = Linearization::new(u.field(), &Normalization::default());
        let h0: GridField<f64> = RandomSpectrum::new(3, 6, 1.0).sample(g, 4).unwrap();
        let hs = lin.evolve(&h0, 0.1, 10).unwrap();
        let exact = synthesize(&heat_propagate(&analyze(&h0), 1.0).unwrap(), g).unwrap();
        assert!(hs[10].max_abs_diff(&exact).unwrap() < 1e-13);
    }
}
