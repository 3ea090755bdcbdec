use halflow::fractional::OffsetTable;
use halflow::spectral::{CircleGrid, GridField};
use halflow::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{RatioReport, SampleRow};

/// Accepted relative variation over the last doubling for a stabilized probe.
pub const HOLDER_VARIATION: f64 = 0.10;

/// u_α(x) = A|sin(x/2)|^α, Hölder of order α and no better at x = 0.
pub fn holder_profile(grid: CircleGrid, alpha: f64, amplitude: f64) -> GridField<f64> {
    GridField::from_fn(grid, 1, |x: f64, _| amplitude * (x / 2.0).sin().abs().powf(alpha))
}

/// sup_x |P.V. ∫ (u(x)−u(y))/|x−y|^{1+2s} dy| with the punctured trapezoid rule.
pub fn pv_sup(u: &GridField<f64>, s: f64) -> f64 {
    let grid = u.grid();
    let n = grid.size();
    let h: f64 = grid.spacing();
    let w = OffsetTable::<f64>::new(grid).inverse_power(1.0 + 2.0 * s);
    let vals = u.component(0);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for (m, wm) in w.iter().enumerate().skip(1) {
                acc += (vals[i] - vals[(i + m) % n]) * wm;
            }
            (acc * h).abs()
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HolderBehaviour {
    Stabilizes,
    Grows,
    Undetermined,
}

/// Sup norms along increasing resolutions for u_α and 2u_α.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderProbe {
    pub alpha: f64,
    pub s: f64,
    pub resolutions: Vec<usize>,
    pub sup_norms: Vec<f64>,
    pub doubled_amplitude_ratio: f64,
    pub behaviour: HolderBehaviour,
}

/// Stabilizes: the increments shrink and the last doubling moves the value by ≤ 10%.
/// Grows: the sequence increases monotonically and the last doubling moves it by more.
pub fn classify(values: &[f64]) -> HolderBehaviour {
    if values.len() < 3 {
        return HolderBehaviour::Undetermined;
    }
    let k = values.len();
    let d1 = values[k - 2] - values[k - 3];
    let d2 = values[k - 1] - values[k - 2];
    let variation = d2.abs() / values[k - 2].abs();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    if d2.abs() < d1.abs() && variation <= HOLDER_VARIATION {
        HolderBehaviour::Stabilizes
    } else if increasing && variation > HOLDER_VARIATION {
        HolderBehaviour::Grows
    } else {
        HolderBehaviour::Undetermined
    }
}

pub fn holder_probe(alpha: f64, s: f64, resolutions: &[usize]) -> Result<HolderProbe> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("Hölder exponent must lie in (0, 1), got {alpha}")));
    }
    if !(s > 0.0 && s < 0.5) {
        return Err(Error::Domain(format!("probe order must lie in (0, 1/2), got {s}")));
    }
    let mut sup_norms = Vec::with_capacity(resolutions.len());
    let mut last_doubled = f64::NAN;
    for &n in resolutions {
        let grid = CircleGrid::new(n)?;
        let single = pv_sup(&holder_profile(grid, alpha, 1.0), s);
        last_doubled = pv_sup(&holder_profile(grid, alpha, 2.0), s) / single;
        sup_norms.push(single);
    }
    let behaviour = classify(&sup_norms);
    Ok(HolderProbe { alpha, s, resolutions: resolutions.to_vec(), sup_norms, doubled_amplitude_ratio: last_doubled, behaviour })
}

/// Probes every (α, s) pair; passes when each stabilizes exactly when 2s < α.
pub fn holder_laplacian_probe(pairs: &[(f64, f64)], resolutions: &[usize]) -> Result<(RatioReport, Vec<HolderProbe>)> {
    let probes: Result<Vec<HolderProbe>> = pairs.iter().map(|&(a, s)| holder_probe(a, s, resolutions)).collect();
    let probes = probes?;
    let rows = probes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let k = p.sup_norms.len();
            SampleRow::new(i, p.sup_norms[k - 1], p.sup_norms[k - 2])
        })
        .collect();
    let params = json!({"pairs": pairs, "resolutions": resolutions});
    let mut r = RatioReport::new("holder_probe", params, None, rows);
    let mut mismatches = 0;
    for p in &probes {
        let expected = if 2.0 * p.s < p.alpha { HolderBehaviour::Stabilizes } else { HolderBehaviour::Grows };
        if p.behaviour != expected {
            mismatches += 1;
        }
        r.note(format!(
            "alpha {} s {}: {:?} (expected {:?}), sup norms {:?}, amplitude doubling ratio {:.12}",
            p.alpha, p.s, p.behaviour, expected, p.sup_norms, p.doubled_amplitude_ratio
        ));
        if (p.doubled_amplitude_ratio - 2.0).abs() > 1e-9 {
            mismatches += 1;
        }
    }
    r.measured = mismatches as f64;
    r.tolerance = HOLDER_VARIATION;
    r.require(mismatches == 0, "stabilization does not match 2s < α");
    Ok((r, probes))
}
