use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::flow::local::local_energy_sup;
use crate::flow::state::FlowState;
use crate::fractional::Normalization;
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::{grid_fractional_laplacian, sphere_drift, GridField};

/// One row of the diagnostics stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    /// ∫ |u_t|² dx with u_t the step increment divided by dt.
    pub dissipation: f64,
    pub sphere_drift: f64,
    /// Tangential part of u_t + (−Δ)^{1/2}u − uλ in L².
    pub orth_residual: f64,
    /// Normal part u·(u_t + (−Δ)^{1/2}u − uλ) in L².
    pub normal_residual: f64,
    pub harmonic_residual: f64,
    pub eps_r: f64,
}

pub const DIAGNOSTICS_HEADER: [&str; 7] =
    ["t", "energy", "dissipation", "sphere_drift", "orth_residual", "harmonic_residual", "eps_R"];

pub fn write_diagnostics_csv<W: Write>(records: &[DiagnosticsRecord], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(DIAGNOSTICS_HEADER)?;
    for r in records {
        wtr.write_record(
            [r.t, r.energy, r.dissipation, r.sphere_drift, r.orth_residual, r.harmonic_residual, r.eps_r]
                .iter()
                .map(|v| format!("{v:e}")),
        )?;
    }
    wtr.flush()?;
    Ok(())
}

/// −(−Δ)^{1/2}u + uλ, the right side of the flow.
pub fn flow_vector<T: Real>(u: &GridField<T>, lambda_raw: &GridField<T>, norm: &Normalization) -> GridField<T> {
    let lap = grid_fractional_laplacian(u, lit(0.5));
    crate::flow::step::scaled_product(u, lambda_raw, norm).sub(&lap).expect("shape")
}

/// Tangential and normal L² norms of a node-wise field relative to u.
fn split_norms<T: Real>(u: &GridField<T>, r: &GridField<T>) -> (T, T) {
    let h: T = u.grid().spacing();
    let dots = u.dot(r).expect("shape");
    let mut tang = T::zero();
    let mut norm = T::zero();
    for (j, d) in dots.iter().enumerate() {
        let mut tj = T::zero();
        for c in 0..u.components() {
            let v = r.value(j, c) - *d * u.value(j, c);
            tj = tj + v * v;
        }
        tang = tang + tj;
        norm = norm + *d * *d;
    }
    ((h * tang).sqrt(), (h * norm).sqrt())
}

/// Residuals of u_t + (−Δ)^{1/2}u − uλ: tangential part (the projected equation) and normal part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityResidual {
    pub tangential: f64,
    pub normal: f64,
}

pub fn orthogonality_residual<T: Real>(s: &FlowState<T>, u_t: &GridField<T>, norm: &Normalization) -> Result<OrthogonalityResidual> {
    let fv = flow_vector(&s.u, &s.lambda_raw, norm);
    let r = u_t.sub(&fv)?;
    let (t, n) = split_norms(&s.u, &r);
    Ok(OrthogonalityResidual { tangential: to_f64(t), normal: to_f64(n) })
}

/// ‖u·(−(−Δ)^{1/2}u + uλ)‖_{L²}: the rate at which the flow leaves the sphere.
pub fn sphere_defect<T: Real>(s: &FlowState<T>, norm: &Normalization) -> f64 {
    let fv = flow_vector(&s.u, &s.lambda_raw, norm);
    to_f64(split_norms(&s.u, &fv).1)
}

/// ‖u ∧ (−Δ)^{1/2}u‖_{L²}.
pub fn harmonic_residual<T: Real>(u: &GridField<T>) -> T {
    let lap = grid_fractional_laplacian(u, lit(0.5));
    let h: T = u.grid().spacing();
    let m = u.components();
    let mut acc = T::zero();
    for j in 0..u.len() {
        for a in 0..m {
            for b in a + 1..m {
                let w = u.value(j, a) * lap.value(j, b) - u.value(j, b) * lap.value(j, a);
                acc = acc + w * w;
            }
        }
    }
    (h * acc).sqrt()
}

/// Diagnostics at state `s` given the increment to the next state.
pub fn record<T: Real>(
    s: &FlowState<T>,
    increment: &GridField<T>,
    dt: T,
    radius: T,
    norm: &Normalization,
) -> Result<DiagnosticsRecord> {
    let u_t = increment.scale(T::one() / dt);
    let orth = orthogonality_residual(s, &u_t, norm)?;
    let diss = u_t.l2_norm();
    Ok(DiagnosticsRecord {
        t: to_f64(s.t),
        energy: to_f64(s.energy),
        dissipation: to_f64(diss * diss),
        sphere_drift: to_f64(sphere_drift(&s.u)),
        orth_residual: orth.tangential,
        normal_residual: orth.normal,
        harmonic_residual: to_f64(harmonic_residual(&s.u)),
        eps_r: to_f64(local_energy_sup(&s.u, radius)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::config::LambdaMethod;
    use crate::spectral::{CircleGrid, SphereField};

    #[test]
    fn identity_and_constant_residuals_vanish() {
        let g = CircleGrid::new(128).unwrap();
        let norm = Normalization::default();
        let id = FlowState::from_sphere(SphereField::<f64>::identity(g, 2).unwrap(), LambdaMethod::Quadrature);
        let zero = GridField::zeros(g, 2);
        let r = orthogonality_residual(&id, &zero, &norm).unwrap();
        assert!(r.tangential < 1e-8 && r.normal < 1e-8);
        assert!(harmonic_residual(&id.u) < 1e-12);
        let c = FlowState::from_sphere(SphereField::<f64>::constant(g, &[1.0, 0.0]).unwrap(), LambdaMethod::Quadrature);
        let r = orthogonality_residual(&c, &zero, &norm).unwrap();
        assert_eq!((r.tangential, r.normal), (0.0, 0.0));
    }

    #[test]
    fn csv_header_is_exact() {
        let mut buf = Vec::new();
        write_diagnostics_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,energy,dissipation,sphere_drift,orth_residual,harmonic_residual,eps_R\n");
    }
}
