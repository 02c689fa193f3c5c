use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rustfft::num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Real samples of a scalar on a [`Grid`], x-fastest layout.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

/// Fourier coefficients of a real scalar field (Hermitian symmetric).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

/// Three scalar components on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    components: [ScalarField; 3],
}

impl ScalarField {
    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count does not match grid");
        Self { grid: grid.clone(), values }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self::from_values(grid, vec![value; grid.len()])
    }

    /// Sample `f(x, y, z)` at every lattice point.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for k in 0..n {
            let z = grid.coordinate(k);
            for j in 0..n {
                let y = grid.coordinate(j);
                for i in 0..n {
                    values.push(f(grid.coordinate(i), y, z));
                }
            }
        }
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        self.check_grid(other);
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self { grid: self.grid.clone(), values }
    }

    /// Pointwise product without spectral truncation.
    pub fn mul_pointwise(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    /// Pointwise product followed by the 2/3-rule truncation.
    pub fn product(&self, other: &Self) -> Self {
        self.mul_pointwise(other).dealiased()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: f64, other: &Self) {
        self.check_grid(other);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += factor * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the minimum sample.
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v < self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.values.len() as f64
    }

    /// Sequential sum; the summation order is fixed so results do not
    /// depend on the thread count.
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Rectangle-rule volume integral, exact for band-limited fields.
    pub fn integral(&self) -> f64 {
        self.sum() * self.grid.cell_volume()
    }

    /// `(∫ s² dV)^{1/2}`
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// `∫ |s| dV`
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn ensure_finite(&self, field: &'static str) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(idx) => {
                let (i, j, k) = self.grid.unravel(idx);
                Err(Error::NonFinite { field, i, j, k })
            }
        }
    }

    pub fn to_spectral(&self) -> SpectralField {
        SpectralField { grid: self.grid.clone(), coeffs: self.grid.forward(&self.values) }
    }

    /// Field with every mode at or above the 2/3 cutoff removed.
    pub fn dealiased(&self) -> Self {
        self.to_spectral().dealiased().to_physical()
    }

    pub(crate) fn check_grid(&self, other: &Self) {
        assert!(self.grid.same_as(&other.grid), "fields live on different grids");
    }
}

impl SpectralField {
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), grid.len(), "coefficient count does not match grid");
        Self { grid: grid.clone(), coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn to_physical(&self) -> ScalarField {
        ScalarField { grid: self.grid.clone(), values: self.grid.inverse(self.coeffs.clone()) }
    }

    pub fn into_physical(self) -> ScalarField {
        let values = self.grid.inverse(self.coeffs);
        ScalarField { grid: self.grid, values }
    }

    /// Zero every coefficient with some |mode| ≥ n/3.
    pub fn dealiased(mut self) -> Self {
        let mask = dealias_mask(&self.grid);
        let n = self.grid.n();
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            let (i, j, k) = (idx % n, (idx / n) % n, idx / (n * n));
            if !(mask[i] && mask[j] && mask[k]) {
                *c = Complex64::default();
            }
        }
        self
    }

    /// `Σ |ŝ|²/n³ · dx³`, equal to `∫ s² dV` by Parseval.
    pub fn energy(&self) -> f64 {
        let n3 = self.grid.len() as f64;
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / n3 * self.grid.cell_volume()
    }
}

/// Per-axis retention mask for the 2/3 rule: keep |m| < n/3.
fn dealias_mask(grid: &Grid) -> Vec<bool> {
    let n = grid.n() as i64;
    grid.modes().iter().map(|&m| 3 * m.abs() < n).collect()
}

impl VectorField {
    pub fn new(x: ScalarField, y: ScalarField, z: ScalarField) -> Self {
        x.check_grid(&y);
        x.check_grid(&z);
        Self { components: [x, y, z] }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::new(ScalarField::zeros(grid), ScalarField::zeros(grid), ScalarField::zeros(grid))
    }

    pub fn constant(grid: &Grid, value: [f64; 3]) -> Self {
        Self::new(
            ScalarField::constant(grid, value[0]),
            ScalarField::constant(grid, value[1]),
            ScalarField::constant(grid, value[2]),
        )
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> Self {
        Self::new(
            ScalarField::from_fn(grid, |x, y, z| f(x, y, z)[0]),
            ScalarField::from_fn(grid, |x, y, z| f(x, y, z)[1]),
            ScalarField::from_fn(grid, |x, y, z| f(x, y, z)[2]),
        )
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn x(&self) -> &ScalarField {
        &self.components[0]
    }

    pub fn y(&self) -> &ScalarField {
        &self.components[1]
    }

    pub fn z(&self) -> &ScalarField {
        &self.components[2]
    }

    pub fn components(&self) -> &[ScalarField; 3] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [ScalarField; 3] {
        &mut self.components
    }

    pub fn into_components(self) -> [ScalarField; 3] {
        self.components
    }

    pub fn map_components(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        let [x, y, z] = &self.components;
        Self::new(f(x), f(y), f(z))
    }

    /// Dealiased dot product.
    pub fn dot(&self, other: &Self) -> ScalarField {
        self.dot_pointwise(other).dealiased()
    }

    pub fn dot_pointwise(&self, other: &Self) -> ScalarField {
        let [ax, ay, az] = &self.components;
        let [bx, by, bz] = &other.components;
        ax.check_grid(bx);
        let values = (0..ax.values.len())
            .map(|i| ax.values[i] * bx.values[i] + ay.values[i] * by.values[i] + az.values[i] * bz.values[i])
            .collect();
        ScalarField::from_values(ax.grid(), values)
    }

    /// Dealiased cross product.
    pub fn cross(&self, other: &Self) -> Self {
        self.cross_pointwise(other).map_components(ScalarField::dealiased)
    }

    pub fn cross_pointwise(&self, other: &Self) -> Self {
        let [ax, ay, az] = &self.components;
        let [bx, by, bz] = &other.components;
        let cx = ay.zip_map(bz, |a, b| a * b).zip_map(&az.mul_pointwise(by), |p, q| p - q);
        let cy = az.zip_map(bx, |a, b| a * b).zip_map(&ax.mul_pointwise(bz), |p, q| p - q);
        let cz = ax.zip_map(by, |a, b| a * b).zip_map(&ay.mul_pointwise(bx), |p, q| p - q);
        Self::new(cx, cy, cz)
    }

    /// Dealiased product with a scalar field.
    pub fn scale_by(&self, s: &ScalarField) -> Self {
        self.map_components(|c| c.product(s))
    }

    pub fn scale_by_pointwise(&self, s: &ScalarField) -> Self {
        self.map_components(|c| c.mul_pointwise(s))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map_components(|c| c.scaled(factor))
    }

    pub fn axpy(&mut self, factor: f64, other: &Self) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.axpy(factor, b);
        }
    }

    /// Pointwise |v|², not truncated.
    pub fn norm_sq_pointwise(&self) -> ScalarField {
        self.dot_pointwise(self)
    }

    /// Pointwise |v|.
    pub fn magnitude(&self) -> ScalarField {
        self.norm_sq_pointwise().map(f64::sqrt)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(ScalarField::max_abs).fold(0.0, f64::max)
    }

    pub fn dealiased(&self) -> Self {
        self.map_components(ScalarField::dealiased)
    }

    pub fn ensure_finite(&self, field: &'static str) -> Result<()> {
        self.components.iter().try_for_each(|c| c.ensure_finite(field))
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: Self) -> ScalarField {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: Self) -> ScalarField {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.map(|v| -v)
    }
}

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: f64) -> ScalarField {
        self.scaled(rhs)
    }
}

impl AddAssign<&ScalarField> for ScalarField {
    fn add_assign(&mut self, rhs: &ScalarField) {
        self.axpy(1.0, rhs);
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: Self) -> VectorField {
        let [ax, ay, az] = &self.components;
        let [bx, by, bz] = &rhs.components;
        VectorField::new(ax + bx, ay + by, az + bz)
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: Self) -> VectorField {
        let [ax, ay, az] = &self.components;
        let [bx, by, bz] = &rhs.components;
        VectorField::new(ax - bx, ay - by, az - bz)
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        self.map_components(|c| -c)
    }
}

impl Mul<f64> for &VectorField {
    type Output = VectorField;
    fn mul(self, rhs: f64) -> VectorField {
        self.scaled(rhs)
    }
}

impl AddAssign<&VectorField> for VectorField {
    fn add_assign(&mut self, rhs: &VectorField) {
        self.axpy(1.0, rhs);
    }
}
