use num_complex::Complex;

use crate::error::{config, domain, Result};
use crate::scalar::{from_usize, Real};
use crate::spectral::CircleGrid;

/// Real vector-valued samples on a circle grid, stored component-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    grid: CircleGrid,
    components: usize,
    data: Vec<T>,
}

impl<T: Real> GridField<T> {
    pub fn new(grid: CircleGrid, components: usize, data: Vec<T>) -> Result<Self> {
        if components == 0 {
            return Err(config("a field needs at least one component"));
        }
        if data.len() != grid.size() * components {
            return Err(config(format!(
                "field has {} values, expected {} = {} nodes x {} components",
                data.len(),
                grid.size() * components,
                grid.size(),
                components
            )));
        }
        Ok(Self { grid, components, data })
    }

    pub fn zeros(grid: CircleGrid, components: usize) -> Self {
        Self { grid, components, data: vec![T::zero(); grid.size() * components] }
    }

    /// Samples `f(x, c)` at every node and component.
    pub fn from_fn(grid: CircleGrid, components: usize, f: impl Fn(T, usize) -> T) -> Self {
        let n = grid.size();
        let mut data = Vec::with_capacity(n * components);
        for c in 0..components {
            for j in 0..n {
                data.push(f(grid.node(j), c));
            }
        }
        Self { grid, components, data }
    }

    pub fn from_components(grid: CircleGrid, comps: Vec<Vec<T>>) -> Result<Self> {
        let components = comps.len();
        let data: Vec<T> = comps.into_iter().flatten().collect();
        Self::new(grid, components, data)
    }

    #[inline]
    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    #[inline]
    pub fn components(&self) -> usize {
        self.components
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.grid.size()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn component(&self, c: usize) -> &[T] {
        let n = self.grid.size();
        &self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn component_mut(&mut self, c: usize) -> &mut [T] {
        let n = self.grid.size();
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn value(&self, j: usize, c: usize) -> T {
        self.data[c * self.grid.size() + j]
    }

    #[inline]
    pub fn set(&mut self, j: usize, c: usize, v: T) {
        let n = self.grid.size();
        self.data[c * n + j] = v;
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn vector_at(&self, j: usize) -> Vec<T> {
        (0..self.components).map(|c| self.value(j, c)).collect()
    }

    /// Euclidean norm of the value at every node.
    pub fn pointwise_norms(&self) -> Vec<T> {
        (0..self.len())
            .map(|j| (0..self.components).map(|c| self.value(j, c).powi(2)).sum::<T>().sqrt())
            .collect()
    }

    /// Node-wise dot product with another field of the same shape.
    pub fn dot(&self, other: &Self) -> Result<Vec<T>> {
        self.check_shape(other)?;
        Ok((0..self.len())
            .map(|j| (0..self.components).map(|c| self.value(j, c) * other.value(j, c)).sum())
            .collect())
    }

    /// Trapezoidal L² norm (h Σ |v_j|²)^{1/2}.
    pub fn l2_norm(&self) -> T {
        let h: T = self.grid.spacing();
        (h * self.data.iter().map(|v| *v * *v).sum::<T>()).sqrt()
    }

    pub fn sup_norm(&self) -> T {
        self.pointwise_norms().into_iter().fold(T::zero(), T::max)
    }

    /// Trapezoidal integral of each component.
    pub fn integrals(&self) -> Vec<T> {
        let h: T = self.grid.spacing();
        (0..self.components).map(|c| h * self.component(c).iter().copied().sum::<T>()).collect()
    }

    pub fn means(&self) -> Vec<T> {
        let n: T = from_usize(self.len());
        (0..self.components).map(|c| self.component(c).iter().copied().sum::<T>() / n).collect()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { grid: self.grid, components: self.components, data: self.data.iter().map(|v| f(*v)).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            grid: self.grid,
            components: self.components,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: T) -> Self {
        self.map(|v| v * k)
    }

    /// Multiplies every component by the scalar field `w` node-wise.
    pub fn mul_scalar_field(&self, w: &[T]) -> Result<Self> {
        if w.len() != self.len() {
            return Err(config("scalar weight length does not match the grid"));
        }
        let mut out = self.clone();
        for c in 0..self.components {
            for (v, wj) in out.component_mut(c).iter_mut().zip(w) {
                *v = *v * *wj;
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn check_shape(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.components != other.components {
            return Err(config(format!(
                "shape mismatch: ({}, {}) vs ({}, {})",
                self.grid.size(),
                self.components,
                other.grid.size(),
                other.components
            )));
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> GridField<U> {
        GridField {
            grid: self.grid,
            components: self.components,
            data: self.data.iter().map(|v| U::from_f64(crate::scalar::to_f64(*v)).unwrap()).collect(),
        }
    }
}

/// Grid field whose value at every node lies on the unit sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereField<T>(GridField<T>);

impl<T: Real> SphereField<T> {
    /// Validates the unit-norm constraint without modifying the data.
    pub fn new(field: GridField<T>) -> Result<Self> {
        if field.components() < 2 {
            return Err(config("sphere-valued maps need at least two components"));
        }
        let tol = T::sphere_tolerance();
        for (j, r) in field.pointwise_norms().into_iter().enumerate() {
            if !((r - T::one()).abs() <= tol) {
                return Err(domain(format!("value at node {j} has norm {r}, not 1")));
            }
        }
        Ok(Self(field))
    }

    /// Pointwise renormalization v / |v|.
    pub fn project(field: &GridField<T>) -> Result<Self> {
        if field.components() < 2 {
            return Err(config("sphere-valued maps need at least two components"));
        }
        let norms = field.pointwise_norms();
        let tiny = T::min_positive_value().sqrt();
        for (j, r) in norms.iter().enumerate() {
            if !(*r > tiny) || !r.is_finite() {
                return Err(domain(format!("cannot project: norm {r} at node {j}")));
            }
        }
        let inv: Vec<T> = norms.iter().map(|r| T::one() / *r).collect();
        Ok(Self(field.mul_scalar_field(&inv)?))
    }

    pub fn constant(grid: CircleGrid, point: &[T]) -> Result<Self> {
        let f = GridField::from_fn(grid, point.len(), |_, c| point[c]);
        Self::project(&f)
    }

    /// (cos qx, sin qx, 0, ...), the degree-q equator map.
    pub fn degree(grid: CircleGrid, components: usize, q: i64) -> Result<Self> {
        if components < 2 {
            return Err(config("sphere-valued maps need at least two components"));
        }
        let qf: T = crate::scalar::from_i64(q);
        Self::new(GridField::from_fn(grid, components, |x, c| match c {
            0 => (qf * x).cos(),
            1 => (qf * x).sin(),
            _ => T::zero(),
        }))
    }

    pub fn identity(grid: CircleGrid, components: usize) -> Result<Self> {
        Self::degree(grid, components, 1)
    }

    pub fn max_drift(&self) -> T {
        sphere_drift(&self.0)
    }

    #[inline]
    pub fn field(&self) -> &GridField<T> {
        &self.0
    }

    pub fn into_field(self) -> GridField<T> {
        self.0
    }

    pub fn grid(&self) -> CircleGrid {
        self.0.grid()
    }

    pub fn components(&self) -> usize {
        self.0.components()
    }
}

impl<T> AsRef<GridField<T>> for SphereField<T> {
    fn as_ref(&self) -> &GridField<T> {
        &self.0
    }
}

/// max_j | |v_j| - 1 |
pub fn sphere_drift<T: Real>(f: &GridField<T>) -> T {
    f.pointwise_norms().into_iter().map(|r| (r - T::one()).abs()).fold(T::zero(), T::max)
}

/// Truncated Fourier coefficients û(k), |k| ≤ K, per component.
///
/// Convention: û(k) = (1/2π) ∫ f e^{-ikx} dx, so the L² norm squared is 2π Σ |û(k)|².
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T> {
    grid: CircleGrid,
    components: usize,
    max_mode: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(grid: CircleGrid, components: usize, max_mode: usize) -> Self {
        Self { grid, components, max_mode, coeffs: vec![Complex::new(T::zero(), T::zero()); components * (2 * max_mode + 1)] }
    }

    pub fn from_fn(grid: CircleGrid, components: usize, max_mode: usize, f: impl Fn(usize, i64) -> Complex<T>) -> Self {
        let mut out = Self::zeros(grid, components, max_mode);
        let k = max_mode as i64;
        for c in 0..components {
            for m in -k..=k {
                out.set(c, m, f(c, m));
            }
        }
        out
    }

    #[inline]
    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    #[inline]
    pub fn components(&self) -> usize {
        self.components
    }

    #[inline]
    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    #[inline]
    fn index(&self, c: usize, k: i64) -> Option<usize> {
        let kk = self.max_mode as i64;
        if k.abs() > kk {
            None
        } else {
            Some(c * (2 * self.max_mode + 1) + (k + kk) as usize)
        }
    }

    /// Coefficient û_c(k); zero outside the stored band.
    #[inline]
    pub fn coeff(&self, c: usize, k: i64) -> Complex<T> {
        match self.index(c, k) {
            Some(i) => self.coeffs[i],
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Sets û_c(k). Panics if |k| exceeds the stored band.
    pub fn set(&mut self, c: usize, k: i64, v: Complex<T>) {
        let i = self.index(c, k).expect("mode outside stored band");
        self.coeffs[i] = v;
    }

    pub fn component_coeffs(&self, c: usize) -> &[Complex<T>] {
        let w = 2 * self.max_mode + 1;
        &self.coeffs[c * w..(c + 1) * w]
    }

    /// Highest |k| whose coefficient exceeds roundoff relative to the largest one.
    pub fn bandwidth(&self) -> usize {
        let floor = self.max_abs() * T::epsilon() * crate::scalar::lit(256.0);
        let kk = self.max_mode as i64;
        for k in (1..=kk).rev() {
            for c in 0..self.components {
                if self.coeff(c, k).norm() > floor || self.coeff(c, -k).norm() > floor {
                    return k as usize;
                }
            }
        }
        0
    }

    /// Coefficient-wise multiplication by the real symbol m(k).
    pub fn apply_symbol(&self, m: impl Fn(i64) -> T) -> Self {
        let kk = self.max_mode as i64;
        let w = 2 * self.max_mode + 1;
        let symbol: Vec<T> = (-kk..=kk).map(&m).collect();
        let coeffs = self.coeffs.iter().enumerate().map(|(i, z)| *z * symbol[i % w]).collect();
        Self { coeffs, ..self.clone() }
    }

    /// Coefficient-wise multiplication by the complex symbol m(k).
    pub fn apply_complex_symbol(&self, m: impl Fn(i64) -> Complex<T>) -> Self {
        let kk = self.max_mode as i64;
        let w = 2 * self.max_mode + 1;
        let symbol: Vec<Complex<T>> = (-kk..=kk).map(&m).collect();
        let coeffs = self.coeffs.iter().enumerate().map(|(i, z)| *z * symbol[i % w]).collect();
        Self { coeffs, ..self.clone() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        if self.components != other.components || self.max_mode != other.max_mode {
            return Err(config("spectral shape mismatch"));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { coeffs, ..self.clone() })
    }

    /// Restricts (or zero-pads) the stored band to `max_mode`.
    pub fn with_max_mode(&self, max_mode: usize) -> Self {
        Self::from_fn(self.grid, self.components, max_mode, |c, k| self.coeff(c, k))
    }

    /// Rebinds the home grid without touching coefficients.
    pub fn on_grid(mut self, grid: CircleGrid) -> Self {
        self.grid = grid;
        self
    }

    /// Σ_k |û(k)|² weighted by w(k), summed over components, fixed order.
    pub fn weighted_sum(&self, w: impl Fn(i64) -> T) -> T {
        let kk = self.max_mode as i64;
        let mut total = T::zero();
        for c in 0..self.components {
            for k in -kk..=kk {
                let z = self.coeff(c, k);
                let a = z.norm_sqr();
                if a != T::zero() {
                    total = total + w(k) * a;
                }
            }
        }
        total
    }

    /// L² norm via Parseval.
    pub fn l2_norm(&self) -> T {
        (T::TAU() * self.weighted_sum(|_| T::one())).sqrt()
    }

    /// max |û(-k) - conj(û(k))| over components and modes.
    pub fn conjugate_symmetry_defect(&self) -> T {
        let kk = self.max_mode as i64;
        let mut worst = T::zero();
        for c in 0..self.components {
            for k in 0..=kk {
                let d = (self.coeff(c, -k) - self.coeff(c, k).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let kk = self.max_mode.max(other.max_mode) as i64;
        let mut worst = T::zero();
        for c in 0..self.components.max(other.components) {
            for k in -kk..=kk {
                worst = worst.max((self.coeff(c, k) - other.coeff(c, k)).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn scale(&self, a: T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|z| *z * a).collect(), ..self.clone() }
    }

    /// Zeroes the mean mode.
    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        for c in 0..self.components {
            out.set(c, 0, Complex::new(T::zero(), T::zero()));
        }
        out
    }

    /// Sum of coefficients evaluated at a single point x (real part of component c).
    pub fn evaluate(&self, c: usize, x: T) -> Complex<T> {
        let kk = self.max_mode as i64;
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in -kk..=kk {
            let z = self.coeff(c, k);
            if z.re != T::zero() || z.im != T::zero() {
                let phase = crate::scalar::from_i64::<T>(k) * x;
                acc = acc + z * Complex::new(phase.cos(), phase.sin());
            }
        }
        acc
    }

}
