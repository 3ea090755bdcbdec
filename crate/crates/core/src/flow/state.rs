use crate::flow::config::LambdaMethod;
use crate::fractional::{lambda_raw_field, lambda_raw_spectral};
use crate::scalar::Real;
use crate::spectral::{grid_energy, GridField, SphereField};

/// Time stamp, map and cached λ_raw and energy.
#[derive(Clone, Debug)]
pub struct FlowState<T> {
    pub t: T,
    pub u: GridField<T>,
    pub lambda_raw: GridField<T>,
    pub energy: T,
}

pub(crate) fn compute_lambda<T: Real>(u: &GridField<T>, method: LambdaMethod) -> GridField<T> {
    match method {
        LambdaMethod::Quadrature => lambda_raw_field(u),
        LambdaMethod::Spectral => lambda_raw_spectral(u),
    }
}

impl<T: Real> FlowState<T> {
    pub fn new(t: T, u: GridField<T>, method: LambdaMethod) -> Self {
        let lambda_raw = compute_lambda(&u, method);
        let energy = grid_energy(&u);
        Self { t, u, lambda_raw, energy }
    }

    pub fn from_sphere(u: SphereField<T>, method: LambdaMethod) -> Self {
        Self::new(T::zero(), u.into_field(), method)
    }

    /// The map as a validated sphere field, if it satisfies the constraint.
    pub fn sphere(&self) -> Option<SphereField<T>> {
        SphereField::new(self.u.clone()).ok()
    }
}
