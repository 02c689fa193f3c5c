//! Variable-density pressure solve for the inhomogeneous incompressible
//! system.

use crate::error::{Error, Result};
use crate::spectral::{divergence, gradient, inverse_laplacian_spectral, ScalarField, SpectralField, VectorField};

use super::state::{check_density_floor, SolverSettings};

/// Converged pressure together with solver diagnostics.
#[derive(Clone, Debug)]
pub struct PressureSolution {
    pub pressure: ScalarField,
    pub iterations: usize,
    /// `‖∇·(ρ⁻¹∇P) − S‖∞ / ‖S‖∞` at exit (0 when `S ≡ 0`).
    pub relative_residual: f64,
}

/// Source term `S = −(∇⊗∇):(u⊗u)` of the pressure equation.
pub fn pressure_source(u: &VectorField) -> ScalarField {
    let grid = u.grid().clone();
    let n = grid.n();
    let k = grid.derivative_wavenumbers().to_vec();
    let c = u.components();
    let mut acc = vec![rustfft::num_complex::Complex64::default(); grid.len()];
    for a in 0..3 {
        for b in a..3 {
            let prod = c[a].product(&c[b]).to_spectral();
            let weight = if a == b { 1.0 } else { 2.0 };
            for (idx, slot) in acc.iter_mut().enumerate() {
                let kk = [k[idx % n], k[(idx / n) % n], k[idx / (n * n)]];
                // −(i k_a)(i k_b) = k_a k_b
                *slot += prod.coeffs()[idx] * (weight * kk[a] * kk[b]);
            }
        }
    }
    SpectralField::from_coeffs(&grid, acc).into_physical()
}

/// Solve `∇·(ρ⁻¹∇P) = −(∇⊗∇):(u⊗u)` for zero-mean `P`.
///
/// Writes `ρ⁻¹ = α + β` with `α` the mean of `ρ⁻¹` and iterates
/// `P ← α⁻¹ Δ⁻¹ [S − ∇·(β∇P)]`, exact in one step when ρ is constant.
pub fn solve_pressure_ii(rho: &ScalarField, u: &VectorField, settings: &SolverSettings) -> Result<PressureSolution> {
    check_density_floor(rho, settings.rho_min)?;
    let source = pressure_source(u);
    let source_norm = source.max_abs();
    let grid = rho.grid();
    if source_norm == 0.0 {
        return Ok(PressureSolution { pressure: ScalarField::zeros(grid), iterations: 0, relative_residual: 0.0 });
    }
    let rho_inv = rho.map(|r| 1.0 / r).dealiased();
    let alpha = rho_inv.mean();
    let beta = rho_inv.map(|v| v - alpha);
    let variable = beta.max_abs() > 0.0;

    let mut pressure = ScalarField::zeros(grid);
    let mut iterations = 0;
    loop {
        let p_hat = pressure.to_spectral();
        let grad_p = gradient(&pressure);
        let correction = if variable {
            divergence(&grad_p.scale_by(&beta))
        } else {
            ScalarField::zeros(grid)
        };
        // ∇·(ρ⁻¹∇P) = αΔP + ∇·(β∇P)
        let lap = {
            let mut s = p_hat;
            let n = grid.n();
            let k = grid.wavenumbers();
            for (idx, c) in s.coeffs_mut().iter_mut().enumerate() {
                let (i, j, l) = (idx % n, (idx / n) % n, idx / (n * n));
                *c *= -(k[i] * k[i] + k[j] * k[j] + k[l] * k[l]);
            }
            s.into_physical()
        };
        let residual = lap
            .zip_map(&correction, |l, c| alpha * l + c)
            .zip_map(&source, |lhs, s| lhs - s)
            .max_abs()
            / source_norm;
        if residual <= settings.pressure_tolerance {
            return Ok(PressureSolution { pressure, iterations, relative_residual: residual });
        }
        if iterations >= settings.pressure_max_iter {
            return Err(Error::PressureNotConverged { iterations, residual });
        }
        let mut update = source.zip_map(&correction, |s, c| (s - c) / alpha).to_spectral();
        inverse_laplacian_spectral(&mut update);
        pressure = update.into_physical();
        iterations += 1;
    }
}
