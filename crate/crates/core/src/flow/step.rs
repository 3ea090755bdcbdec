use crate::error::{Error, Result};
use crate::flow::config::{FlowConfig, LambdaMethod, Scheme};
use crate::flow::state::FlowState;
use crate::fractional::Normalization;
use crate::scalar::{from_i64, to_f64, Real};
use crate::spectral::{analyze, synthesize, GridField, SphereField};

/// u·λ with λ = λ_raw / 2π (the pairing constant).
pub fn nonlinearity<T: Real>(u: &SphereField<T>, norm: &Normalization) -> GridField<T> {
    let lam = crate::fractional::lambda_raw(u);
    scaled_product(u.field(), &lam, norm)
}

pub(crate) fn scaled_product<T: Real>(u: &GridField<T>, lambda_raw: &GridField<T>, norm: &Normalization) -> GridField<T> {
    let s: T = norm.lambda_scale();
    let lam: Vec<T> = lambda_raw.component(0).iter().map(|v| *v * s).collect();
    u.mul_scalar_field(&lam).expect("shape")
}

/// One-step map of the flow u_t + (−Δ)^{1/2}u = uλ.
#[derive(Clone, Debug)]
pub struct Integrator {
    pub scheme: Scheme,
    pub projection: bool,
    pub normalization: Normalization,
    pub lambda: LambdaMethod,
    /// When false the right side is dropped and the step is the linear propagator.
    pub nonlinear: bool,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            scheme: Scheme::Exponential,
            projection: true,
            normalization: Normalization::default(),
            lambda: LambdaMethod::Quadrature,
            nonlinear: true,
        }
    }
}

impl Integrator {
    pub fn from_config(cfg: &FlowConfig) -> Self {
        Self { scheme: cfg.scheme, projection: cfg.projection, normalization: cfg.normalization, lambda: cfg.lambda, nonlinear: true }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// Advances the state by dt. Fails on non-finite values or a vanishing norm during projection.
    pub fn step<T: Real>(&self, s: &FlowState<T>, dt: T) -> Result<FlowState<T>> {
        let t_new = s.t + dt;
        let uhat = analyze(&s.u);
        let forcing = if self.nonlinear {
            analyze(&scaled_product(&s.u, &s.lambda_raw, &self.normalization))
        } else {
            uhat.scale(T::zero())
        };
        let advanced = match self.scheme {
            Scheme::Exponential => uhat
                .zip_with(&forcing, |a, b| a + b * dt)?
                .apply_symbol(|k| (-from_i64::<T>(k.abs()) * dt).exp()),
            Scheme::SemiImplicit => uhat
                .zip_with(&forcing, |a, b| a + b * dt)?
                .apply_symbol(|k| T::one() / (T::one() + from_i64::<T>(k.abs()) * dt)),
            Scheme::ExplicitReference => {
                let lin = uhat.apply_symbol(|k| -from_i64::<T>(k.abs()));
                let rhs = lin.zip_with(&forcing, |a, b| a + b)?;
                uhat.zip_with(&rhs, |a, b| a + b * dt)?
            }
        };
        let raw = synthesize(&advanced, s.u.grid())?;
        if !raw.is_finite() {
            return Err(Error::Integration { t: to_f64(t_new), reason: "non-finite values after step".into() });
        }
        let u = if self.projection {
            SphereField::project(&raw)
                .map_err(|e| Error::Integration { t: to_f64(t_new), reason: format!("projection failed: {e}") })?
                .into_field()
        } else {
            raw
        };
        let next = FlowState::new(t_new, u, self.lambda);
        if !next.lambda_raw.is_finite() || !next.energy.is_finite() {
            return Err(Error::Integration { t: to_f64(t_new), reason: "non-finite diagnostics after step".into() });
        }
        Ok(next)
    }
}

/// Advances `s` by dt with the given scheme, projection on, default constants.
pub fn step<T: Real>(s: &FlowState<T>, dt: T, scheme: Scheme) -> Result<FlowState<T>> {
    Integrator::default().with_scheme(scheme).step(s, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{heat_propagate, CircleGrid};

    #[test]
    fn identity_map_is_fixed_point() {
        let g = CircleGrid::new(128).unwrap();
        let u = SphereField::<f64>::identity(g, 2).unwrap();
        let mut s = FlowState::from_sphere(u.clone(), LambdaMethod::Quadrature);
        for _ in 0..50 {
            let next = step(&s, 0.01, Scheme::Exponential).unwrap();
            assert!(next.u.max_abs_diff(&s.u).unwrap() < 1e-10);
            s = next;
        }
        assert!(s.u.max_abs_diff(u.field()).unwrap() < 1e-10);
    }

    #[test]
    fn heat_only_matches_propagator() {
        let g = CircleGrid::new(64).unwrap();
        let f = GridField::from_fn(g, 2, |x: f64, c| (x + c as f64).sin() + 0.3 * (4.0 * x).cos());
        let s = FlowState::new(0.0, f.clone(), LambdaMethod::Quadrature);
        let integ = Integrator { nonlinear: false, projection: false, ..Integrator::default() };
        let next = integ.step(&s, 0.125).unwrap();
        let expect = synthesize(&heat_propagate(&analyze(&f), 0.125).unwrap(), g).unwrap();
        assert!(next.u.max_abs_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn constant_map_has_zero_nonlinearity() {
        let g = CircleGrid::new(32).unwrap();
        let u = SphereField::<f64>::constant(g, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(nonlinearity(&u, &Normalization::default()).sup_norm(), 0.0);
    }
}
