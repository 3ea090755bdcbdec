use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use num_complex::Complex;

use crate::error::{config, Result};
use crate::scalar::{lit, Real};
use crate::spectral::SpectralField;

/// Quadrature order used for |j|,|k| ≤ J; the integrand is a trigonometric
/// polynomial of degree < 2J, so any M > 2J is exact.
fn points_for(max_freq: usize) -> usize {
    (4 * max_freq + 16).next_power_of_two()
}

struct SineTable {
    m: usize,
    sin_half: Vec<f64>,
}

impl SineTable {
    fn new(m: usize) -> Self {
        // sin(π t / M) for t in [0, 2M)
        let sin_half = (0..2 * m).map(|t| (std::f64::consts::PI * t as f64 / m as f64).sin()).collect();
        Self { m, sin_half }
    }

    /// sin²(a h_i / 2) with h_i = 2π i / M.
    #[inline]
    fn half_angle_sq(&self, a: i64, i: usize) -> f64 {
        let period = 2 * self.m as i64;
        let t = (a * i as i64).rem_euclid(period) as usize;
        let s = self.sin_half[t];
        s * s
    }

    fn integral(&self, j: i64, k: i64) -> f64 {
        if j == 0 || k == 0 {
            return 0.0;
        }
        // Re[(e^{ijh}−1)(e^{ikh}−1)] = −2[sin²((j+k)h/2) − sin²(jh/2) − sin²(kh/2)]
        let mut acc = -((j * k) as f64);
        for i in 1..self.m {
            let num = -2.0 * (self.half_angle_sq(j + k, i) - self.half_angle_sq(j, i) - self.half_angle_sq(k, i));
            let den = 4.0 * self.half_angle_sq(1, i);
            acc += num / den;
        }
        acc * std::f64::consts::TAU / self.m as f64
    }
}

/// C(j,k) = ∫ (e^{ijh}−1)(e^{ikh}−1) / |h|² dh with |h| the chordal distance.
pub fn cjk(j: i64, k: i64) -> f64 {
    let b = j.unsigned_abs().max(k.unsigned_abs()) as usize;
    SineTable::new(points_for(b)).integral(j, k)
}

/// Dense table of C(j,k) for |j|, |k| ≤ J.
#[derive(Clone, Debug, PartialEq)]
pub struct CjkTable {
    max_frequency: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CjkRow {
    j: i64,
    k: i64,
    value: f64,
}

impl CjkTable {
    #[inline]
    pub fn max_frequency(&self) -> usize {
        self.max_frequency
    }

    #[inline]
    fn index(&self, j: i64, k: i64) -> Option<usize> {
        let jj = self.max_frequency as i64;
        if j.abs() > jj || k.abs() > jj {
            return None;
        }
        let w = 2 * self.max_frequency + 1;
        Some((j + jj) as usize * w + (k + jj) as usize)
    }

    pub fn get(&self, j: i64, k: i64) -> Option<f64> {
        self.index(j, k).map(|i| self.values[i])
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let jj = self.max_frequency as i64;
        for j in -jj..=jj {
            for k in -jj..=jj {
                wtr.serialize(CjkRow { j, k, value: self.get(j, k).unwrap() })?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let rows: Vec<CjkRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
        let jj = rows.iter().map(|r| r.j.abs().max(r.k.abs())).max().unwrap_or(0) as usize;
        let w = 2 * jj + 1;
        if rows.len() != w * w {
            return Err(config(format!("C-table CSV has {} rows, expected {}", rows.len(), w * w)));
        }
        let mut table = Self { max_frequency: jj, values: vec![f64::NAN; w * w] };
        for r in rows {
            let i = table.index(r.j, r.k).expect("in range");
            table.values[i] = r.value;
        }
        if table.values.iter().any(|v| v.is_nan()) {
            return Err(config("C-table CSV has missing entries"));
        }
        Ok(table)
    }
}

/// Builds the table for |j|, |k| ≤ J; symmetric in (j,k) and under (j,k) ↦ (−j,−k).
pub fn build_table(max_frequency: usize) -> CjkTable {
    let jj = max_frequency as i64;
    let w = 2 * max_frequency + 1;
    let sines = SineTable::new(points_for(max_frequency));
    let mut values = vec![0.0; w * w];
    let at = |j: i64, k: i64| (j + jj) as usize * w + (k + jj) as usize;
    for j in -jj..=jj {
        for k in -jj..=jj {
            let orbit = [(j, k), (k, j), (-j, -k), (-k, -j)];
            if orbit.iter().max() != Some(&(j, k)) {
                continue;
            }
            let v = sines.integral(j, k);
            for (a, b) in orbit {
                values[at(a, b)] = v;
            }
        }
    }
    CjkTable { max_frequency, values }
}

/// Fourier coefficients of d_{1/2}u · d_{1/2}v (contracted over components):
/// coefficient n is Σ_j C(j, n−j) û(j)·v̂(n−j).
pub fn product_spectrum<T: Real>(u: &SpectralField<T>, v: &SpectralField<T>, table: &CjkTable) -> Result<SpectralField<T>> {
    if u.components() != v.components() {
        return Err(config("product_spectrum needs fields with equal component counts"));
    }
    let (bu, bv) = (u.bandwidth(), v.bandwidth());
    let jj = table.max_frequency();
    if bu > jj || bv > jj {
        return Err(config(format!("C-table with J = {jj} cannot serve band-widths {bu} and {bv}")));
    }
    let (bu, bv) = (bu as i64, bv as i64);
    let out_mode = (bu + bv) as usize;
    let mut out = SpectralField::zeros(u.grid(), 1, out_mode);
    for n in -(bu + bv)..=(bu + bv) {
        let mut acc = Complex::new(T::zero(), T::zero());
        let lo = (-bu).max(n - bv);
        let hi = bu.min(n + bv);
        for c in 0..u.components() {
            for j in lo..=hi {
                let cjk: T = lit(table.get(j, n - j).expect("checked band"));
                if cjk != T::zero() {
                    acc = acc + u.coeff(c, j) * v.coeff(c, n - j) * cjk;
                }
            }
        }
        out.set(0, n, acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn closed_form(j: i64, k: i64) -> f64 {
        PI * ((j.abs() + k.abs() - (j + k).abs()) as f64)
    }

    #[test]
    fn matches_closed_form() {
        let t = build_table(24);
        for j in -24..=24i64 {
            for k in -24..=24i64 {
                assert!((t.get(j, k).unwrap() - closed_form(j, k)).abs() < 1e-9, "({j},{k})");
            }
        }
    }

    #[test]
    fn fejer_and_zero_rows() {
        for j in 1..=64i64 {
            let c = cjk(j, -j);
            assert!((c - TAU * j as f64).abs() <= 1e-6 * TAU * j as f64);
            assert_eq!(cjk(0, j), 0.0);
            assert_eq!(cjk(j, 0), 0.0);
        }
    }

    #[test]
    fn csv_roundtrip() {
        let t = build_table(4);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("j,k,value\n"));
        assert_eq!(text.lines().count(), 1 + 81);
        let back = CjkTable::read_csv(&buf[..]).unwrap();
        assert_eq!(back, t);
    }
}
