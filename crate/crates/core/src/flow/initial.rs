use crate::error::{config, Result};
use crate::flow::config::InitialData;
use crate::sampling::perturbed_sphere;
use crate::scalar::{from_i64, lit, Real};
use crate::spectral::{BumpMollifier, CircleGrid, GridField, SphereField};

impl InitialData {
    /// Samples the initial map on `grid` with `components` target dimensions.
    pub fn build<T: Real>(&self, grid: CircleGrid, components: usize) -> Result<SphereField<T>> {
        match self {
            InitialData::Constant { point } => {
                if point.len() != components {
                    return Err(config(format!("constant point has {} entries, expected {components}", point.len())));
                }
                let p: Vec<T> = point.iter().map(|v| lit(*v)).collect();
                SphereField::constant(grid, &p)
            }
            InitialData::Identity => SphereField::identity(grid, components),
            InitialData::Degree { q } => SphereField::degree(grid, components, *q),
            InitialData::Perturbed { point, amplitude, bandwidth, decay, seed } => {
                let base = match point {
                    Some(p) if p.len() == components => p.clone(),
                    Some(p) => {
                        return Err(config(format!("base point has {} entries, expected {components}", p.len())));
                    }
                    None => {
                        let mut p = vec![0.0; components];
                        p[components - 1] = 1.0;
                        p
                    }
                };
                perturbed_sphere(grid, &base, *amplitude, *bandwidth, *decay, *seed)
            }
            InitialData::Latitude { polar_angle, q } => {
                if components < 3 {
                    return Err(config("latitude circles need at least three components"));
                }
                let (sa, ca): (T, T) = (lit::<T>(*polar_angle).sin(), lit::<T>(*polar_angle).cos());
                let qf: T = from_i64(*q);
                SphereField::project(&GridField::from_fn(grid, components, |x, c| match c {
                    0 => sa * (qf * x).cos(),
                    1 => sa * (qf * x).sin(),
                    2 => ca,
                    _ => T::zero(),
                }))
            }
            InitialData::Torus { angle, p, q } => {
                if components < 4 {
                    return Err(config("torus curves need at least four components"));
                }
                let (sa, ca): (T, T) = (lit::<T>(*angle).sin(), lit::<T>(*angle).cos());
                let (pf, qf): (T, T) = (from_i64(*p), from_i64(*q));
                SphereField::project(&GridField::from_fn(grid, components, |x, c| match c {
                    0 => ca * (pf * x).cos(),
                    1 => ca * (pf * x).sin(),
                    2 => sa * (qf * x).cos(),
                    3 => sa * (qf * x).sin(),
                    _ => T::zero(),
                }))
            }
            InitialData::MollifiedStep { angle, half_width, epsilon } => {
                let jump = GridField::from_fn(grid, components, |x: T, c| {
                    let inside = (x - T::PI()).abs() < lit(*half_width);
                    let phi: T = if inside { lit(*angle) } else { T::zero() };
                    match c {
                        0 => phi.cos(),
                        1 => phi.sin(),
                        _ => T::zero(),
                    }
                });
                let smooth = BumpMollifier::new().convolve(&jump, *epsilon)?;
                SphereField::project(&smooth)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_sphere_valued() {
        let g = CircleGrid::new(64).unwrap();
        let cases = [
            (InitialData::Identity, 3),
            (InitialData::Degree { q: 2 }, 2),
            (InitialData::Perturbed { point: None, amplitude: 0.3, bandwidth: 4, decay: 1.0, seed: 3 }, 3),
            (InitialData::Latitude { polar_angle: 0.4, q: 1 }, 3),
            (InitialData::Torus { angle: 0.5, p: 1, q: 2 }, 4),
            (InitialData::MollifiedStep { angle: 1.2, half_width: 0.8, epsilon: 0.25 }, 2),
        ];
        for (init, n) in cases {
            let u = init.build::<f64>(g, n).unwrap();
            assert!(u.max_drift() < 1e-12, "{init:?}");
        }
        assert!(InitialData::Constant { point: vec![1.0] }.build::<f64>(g, 2).is_err());
    }
}
