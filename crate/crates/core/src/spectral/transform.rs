use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{config, Result};
use crate::scalar::{from_usize, Real};
use crate::spectral::{CircleGrid, GridField, SpectralField};

fn forward<T: Real>(values: &mut [Complex<T>]) {
    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_forward(values.len()).process(values);
}

fn inverse<T: Real>(values: &mut [Complex<T>]) {
    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_inverse(values.len()).process(values);
}

/// Fourier coefficients of each component, modes |k| ≤ N/2 - 1.
pub fn analyze<T: Real>(f: &GridField<T>) -> SpectralField<T> {
    let grid = f.grid();
    let n = grid.size();
    let kk = grid.max_mode();
    let inv_n = T::one() / from_usize(n);
    let mut out = SpectralField::zeros(grid, f.components(), kk);
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
    for c in 0..f.components() {
        for (b, v) in buf.iter_mut().zip(f.component(c)) {
            *b = Complex::new(*v, T::zero());
        }
        forward(&mut buf);
        write_band(&mut out, c, &buf, inv_n);
    }
    out
}

/// Coefficients of one complex-valued function sampled at the nodes.
pub fn analyze_complex<T: Real>(grid: CircleGrid, values: &[Complex<T>]) -> Result<SpectralField<T>> {
    let n = grid.size();
    if values.len() != n {
        return Err(config(format!("expected {n} samples, got {}", values.len())));
    }
    let mut buf = values.to_vec();
    forward(&mut buf);
    let mut out = SpectralField::zeros(grid, 1, grid.max_mode());
    write_band(&mut out, 0, &buf, T::one() / from_usize(n));
    Ok(out)
}

fn write_band<T: Real>(out: &mut SpectralField<T>, c: usize, buf: &[Complex<T>], inv_n: T) {
    let n = buf.len();
    let kk = out.max_mode() as i64;
    for k in -kk..=kk {
        let idx = if k >= 0 { k as usize } else { n - (-k) as usize };
        out.set(c, k, buf[idx] * inv_n);
    }
}

fn fill_buffer<T: Real>(c: &SpectralField<T>, comp: usize, n: usize) -> Vec<Complex<T>> {
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
    let kk = c.max_mode().min(n / 2 - 1) as i64;
    for k in -kk..=kk {
        let z = c.coeff(comp, k);
        let idx = if k >= 0 { k as usize } else { n - (-k) as usize };
        buf[idx] = z;
    }
    buf
}

fn check_band<T: Real>(c: &SpectralField<T>, g: CircleGrid) -> Result<()> {
    let b = c.bandwidth();
    if b > g.max_mode() {
        return Err(config(format!(
            "band-width {b} does not fit on a grid of {} nodes (max mode {})",
            g.size(),
            g.max_mode()
        )));
    }
    Ok(())
}

/// Real part of the truncated Fourier series at the nodes of `g`.
pub fn synthesize<T: Real>(c: &SpectralField<T>, g: CircleGrid) -> Result<GridField<T>> {
    check_band(c, g)?;
    let n = g.size();
    let mut data = Vec::with_capacity(n * c.components());
    for comp in 0..c.components() {
        let mut buf = fill_buffer(c, comp, n);
        inverse(&mut buf);
        data.extend(buf.iter().map(|z| z.re));
    }
    GridField::new(g, c.components(), data)
}

/// Complex values of the truncated Fourier series of component `comp`.
pub fn synthesize_complex<T: Real>(c: &SpectralField<T>, comp: usize, g: CircleGrid) -> Result<Vec<Complex<T>>> {
    check_band(c, g)?;
    let mut buf = fill_buffer(c, comp, g.size());
    inverse(&mut buf);
    Ok(buf)
}

/// Spectral interpolation of a grid field onto another grid.
pub fn resample<T: Real>(f: &GridField<T>, g: CircleGrid) -> Result<GridField<T>> {
    synthesize(&analyze(f), g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_modes() {
        let g = CircleGrid::new(16).unwrap();
        let vals: Vec<Complex<f64>> = g.nodes::<f64>().iter().map(|x| Complex::new((3.0 * x).cos(), (3.0 * x).sin())).collect();
        let c = analyze_complex(g, &vals).unwrap();
        for k in -7..=7 {
            let expect = if k == 3 { 1.0 } else { 0.0 };
            assert!((c.coeff(0, k) - Complex::new(expect, 0.0)).norm() < 1e-14);
        }
        let f = GridField::from_fn(g, 1, |x: f64, _| (2.0 * x).cos());
        let c = analyze(&f);
        assert!((c.coeff(0, 2).re - 0.5).abs() < 1e-15);
        assert!((c.coeff(0, -2).re - 0.5).abs() < 1e-15);
        let f = GridField::from_fn(g, 1, |_, _| 3.5f64);
        let c = analyze(&f);
        assert!((c.coeff(0, 0).re - 3.5).abs() < 1e-15);
        assert_eq!(c.bandwidth(), 0);
    }

    #[test]
    fn synthesize_cosine() {
        let g = CircleGrid::new(32).unwrap();
        let mut c = SpectralField::<f64>::zeros(g, 1, g.max_mode());
        c.set(0, 1, Complex::new(0.5, 0.0));
        c.set(0, -1, Complex::new(0.5, 0.0));
        let f = synthesize(&c, g).unwrap();
        for (j, x) in g.nodes::<f64>().iter().enumerate() {
            assert!((f.value(j, 0) - x.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn coarse_target_rejected() {
        let fine = CircleGrid::new(64).unwrap();
        let coarse = CircleGrid::new(16).unwrap();
        let f = GridField::from_fn(fine, 1, |x: f64, _| (20.0 * x).sin());
        assert!(synthesize(&analyze(&f), coarse).is_err());
        let g = GridField::from_fn(fine, 1, |x: f64, _| (3.0 * x).sin());
        let r = resample(&g, coarse).unwrap();
        assert!((r.value(1, 0) - (3.0 * coarse.node::<f64>(1)).sin()).abs() < 1e-14);
    }

    #[test]
    fn size_mismatch_is_config_error() {
        let g = CircleGrid::new(16).unwrap();
        assert!(matches!(analyze_complex::<f64>(g, &[Complex::new(0.0, 0.0); 8]), Err(crate::Error::Config(_))));
        assert!(GridField::<f64>::new(g, 1, vec![0.0; 15]).is_err());
    }
}
