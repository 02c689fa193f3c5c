use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Smallest admissible number of points per axis.
pub const MIN_POINTS: usize = 8;

/// Uniform periodic cubic lattice with its transform plans.
///
/// Cloning is cheap; clones share the wavenumber tables and FFT plans.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    length: f64,
    dx: f64,
    /// Integer mode numbers per axis in FFT order.
    modes: Vec<i64>,
    wavenumbers: Vec<f64>,
    /// Wavenumbers used for first derivatives (Nyquist entry zeroed).
    derivative_wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Build a grid with `n` points per axis on a box of side `length`.
pub fn make_grid(n: usize, length: f64) -> Result<Grid> {
    Grid::new(n, length)
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n = {n} must be even")));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "n = {n} is below the minimum of {MIN_POINTS}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box length {length} must be positive"
            )));
        }
        let half = (n / 2) as i64;
        let modes: Vec<i64> = (0..n as i64)
            .map(|m| if m < half { m } else { m - n as i64 })
            .collect();
        let scale = 2.0 * PI / length;
        let wavenumbers: Vec<f64> = modes.iter().map(|&m| scale * m as f64).collect();
        let derivative_wavenumbers = modes
            .iter()
            .map(|&m| if m == -half { 0.0 } else { scale * m as f64 })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                length,
                dx: length / n as f64,
                modes,
                wavenumbers,
                derivative_wavenumbers,
                forward,
                inverse,
            }),
        })
    }

    /// Default box of side 2π.
    pub fn periodic(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI)
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    pub fn dx(&self) -> f64 {
        self.inner.dx
    }

    pub fn cell_volume(&self) -> f64 {
        self.inner.dx.powi(3)
    }

    pub fn volume(&self) -> f64 {
        self.inner.length.powi(3)
    }

    /// Total number of lattice points, n³.
    pub fn len(&self) -> usize {
        self.inner.n.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Wavenumbers along one axis, `(2π/L)·{0, 1, …, n/2−1, −n/2, …, −1}`.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumbers
    }

    pub(crate) fn derivative_wavenumbers(&self) -> &[f64] {
        &self.inner.derivative_wavenumbers
    }

    pub fn modes(&self) -> &[i64] {
        &self.inner.modes
    }

    /// Flat index of lattice point `(i, j, k)`; x varies fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.inner.n;
        i + n * (j + n * k)
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.inner.n;
        (idx % n, (idx / n) % n, idx / (n * n))
    }

    /// Physical coordinate of a lattice index along one axis.
    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 * self.inner.dx
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n
                && self.inner.length.to_bits() == other.inner.length.to_bits())
    }

    /// Unnormalised forward transform of real samples.
    pub fn forward(&self, data: &[f64]) -> Vec<Complex64> {
        assert_eq!(data.len(), self.len(), "sample count does not match grid");
        let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut buf, &self.inner.forward);
        buf
    }

    /// Inverse transform normalised by n³; imaginary parts are discarded.
    pub fn inverse(&self, mut coeffs: Vec<Complex64>) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.len(), "coefficient count does not match grid");
        self.transform(&mut coeffs, &self.inner.inverse);
        let norm = 1.0 / self.len() as f64;
        coeffs.into_iter().map(|c| c.re * norm).collect()
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.inner.n;
        let scratch_len = plan.get_inplace_scratch_len();

        // x lines are contiguous
        data.par_chunks_mut(n * n).for_each_init(
            || vec![Complex64::default(); scratch_len],
            |scratch, plane| plan.process_with_scratch(plane, scratch),
        );

        // y lines: stride n inside each z-plane
        data.par_chunks_mut(n * n).for_each_init(
            || (vec![Complex64::default(); n], vec![Complex64::default(); scratch_len]),
            |(line, scratch), plane| {
                for i in 0..n {
                    for j in 0..n {
                        line[j] = plane[i + n * j];
                    }
                    plan.process_with_scratch(line, scratch);
                    for j in 0..n {
                        plane[i + n * j] = line[j];
                    }
                }
            },
        );

        // z lines: stride n², gathered per y-row into contiguous buffers
        let plane = n * n;
        let rows: Vec<Vec<Complex64>> = {
            let src: &[Complex64] = data;
            (0..n)
                .into_par_iter()
                .map_init(
                    || vec![Complex64::default(); scratch_len],
                    |scratch, j| {
                        let mut lines = vec![Complex64::default(); n * n];
                        for i in 0..n {
                            let line = &mut lines[i * n..(i + 1) * n];
                            for (k, slot) in line.iter_mut().enumerate() {
                                *slot = src[i + n * j + plane * k];
                            }
                        }
                        plan.process_with_scratch(&mut lines, scratch);
                        lines
                    },
                )
                .collect()
        };
        for (j, lines) in rows.into_iter().enumerate() {
            for i in 0..n {
                for k in 0..n {
                    data[i + n * j + plane * k] = lines[i * n + k];
                }
            }
        }
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .field("dx", &self.inner.dx)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}
