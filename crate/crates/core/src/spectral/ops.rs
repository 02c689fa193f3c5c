use rustfft::num_complex::Complex64;

use super::field::{ScalarField, SpectralField, VectorField};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Relative tolerance on the mean of an inverse-Laplacian input.
pub const ZERO_MEAN_TOLERANCE: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn for_each_mode(grid: &Grid, coeffs: &mut [Complex64], mut f: impl FnMut(usize, usize, usize, &mut Complex64)) {
    let n = grid.n();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        f(idx % n, (idx / n) % n, idx / (n * n), c);
    }
}

/// Multiply by `i·k_axis` in place.
fn differentiate_spectral(spec: &mut SpectralField, axis: usize) {
    let grid = spec.grid().clone();
    let k = grid.derivative_wavenumbers();
    for_each_mode(&grid, spec.coeffs_mut(), |i, j, l, c| {
        let kk = match axis {
            0 => k[i],
            1 => k[j],
            _ => k[l],
        };
        *c *= I * kk;
    });
}

/// Partial derivative along `axis` (0 = x, 1 = y, 2 = z).
pub fn partial(s: &ScalarField, axis: usize) -> ScalarField {
    let mut spec = s.to_spectral();
    differentiate_spectral(&mut spec, axis);
    spec.into_physical()
}

pub fn gradient(s: &ScalarField) -> VectorField {
    let spec = s.to_spectral();
    let comps: Vec<ScalarField> = (0..3)
        .map(|axis| {
            let mut d = spec.clone();
            differentiate_spectral(&mut d, axis);
            d.into_physical()
        })
        .collect();
    let [x, y, z]: [ScalarField; 3] = comps.try_into().expect("three components");
    VectorField::new(x, y, z)
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let grid = v.grid().clone();
    let k = grid.derivative_wavenumbers();
    let [sx, sy, sz] = v.components().clone().map(|c| c.to_spectral());
    let mut out = vec![Complex64::default(); grid.len()];
    let n = grid.n();
    for (idx, o) in out.iter_mut().enumerate() {
        let (i, j, l) = (idx % n, (idx / n) % n, idx / (n * n));
        *o = I * (sx.coeffs()[idx] * k[i] + sy.coeffs()[idx] * k[j] + sz.coeffs()[idx] * k[l]);
    }
    SpectralField::from_coeffs(&grid, out).into_physical()
}

pub fn curl(v: &VectorField) -> VectorField {
    let grid = v.grid().clone();
    let k = grid.derivative_wavenumbers();
    let [sx, sy, sz] = v.components().clone().map(|c| c.to_spectral());
    let n = grid.n();
    let mut cx = vec![Complex64::default(); grid.len()];
    let mut cy = cx.clone();
    let mut cz = cx.clone();
    for idx in 0..grid.len() {
        let (kx, ky, kz) = (k[idx % n], k[(idx / n) % n], k[idx / (n * n)]);
        let (ax, ay, az) = (sx.coeffs()[idx], sy.coeffs()[idx], sz.coeffs()[idx]);
        cx[idx] = I * (az * ky - ay * kz);
        cy[idx] = I * (ax * kz - az * kx);
        cz[idx] = I * (ay * kx - ax * ky);
    }
    VectorField::new(
        SpectralField::from_coeffs(&grid, cx).into_physical(),
        SpectralField::from_coeffs(&grid, cy).into_physical(),
        SpectralField::from_coeffs(&grid, cz).into_physical(),
    )
}

/// Spectral Laplacian, `−|k|² ŝ`.
pub fn laplacian(s: &ScalarField) -> ScalarField {
    let mut spec = s.to_spectral();
    let grid = s.grid().clone();
    let k = grid.wavenumbers();
    for_each_mode(&grid, spec.coeffs_mut(), |i, j, l, c| {
        *c *= -(k[i] * k[i] + k[j] * k[j] + k[l] * k[l]);
    });
    spec.into_physical()
}

/// Divide by `−|k|²` with the mean mode zeroed, no mean check.
pub(crate) fn inverse_laplacian_spectral(spec: &mut SpectralField) {
    let grid = spec.grid().clone();
    let k = grid.wavenumbers();
    for_each_mode(&grid, spec.coeffs_mut(), |i, j, l, c| {
        let k2 = k[i] * k[i] + k[j] * k[j] + k[l] * k[l];
        if k2 == 0.0 {
            *c = Complex64::default();
        } else {
            *c /= -k2;
        }
    });
}

/// Solve `Δφ = s` for zero-mean `φ`. The input must itself have zero mean
/// to within [`ZERO_MEAN_TOLERANCE`] of its max norm.
pub fn inverse_laplacian_zero_mean(s: &ScalarField) -> Result<ScalarField> {
    let mean = s.mean();
    if mean.abs() > ZERO_MEAN_TOLERANCE * s.max_abs() {
        return Err(Error::NonZeroMean { mean });
    }
    let mut spec = s.to_spectral();
    inverse_laplacian_spectral(&mut spec);
    Ok(spec.into_physical())
}

/// 2/3-rule truncation of a spectral field.
pub fn dealias(f: SpectralField) -> SpectralField {
    f.dealiased()
}

/// `dx³ · Σ s`
pub fn volume_integral(s: &ScalarField) -> f64 {
    s.integral()
}

/// Remove the gradient part of `v` with a constant-coefficient projection.
pub fn leray_project(v: &VectorField) -> VectorField {
    let mut phi = divergence(v).to_spectral();
    inverse_laplacian_spectral(&mut phi);
    let g = gradient(&phi.into_physical());
    v - &g
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn grid(n: usize) -> Grid {
        Grid::periodic(n).unwrap()
    }

    fn abc(g: &Grid) -> VectorField {
        VectorField::from_fn(g, |x, y, z| {
            [z.sin() + y.cos(), x.sin() + z.cos(), y.sin() + x.cos()]
        })
    }

    fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
        (a - b).max_abs()
    }

    #[test]
    fn gradient_of_sine() {
        let g = grid(16);
        let s = ScalarField::from_fn(&g, |x, _, _| x.sin());
        let grad = gradient(&s);
        let expected = ScalarField::from_fn(&g, |x, _, _| x.cos());
        assert!(max_diff(grad.x(), &expected) <= 1e-12);
        assert!(grad.y().max_abs() <= 1e-12);
        assert!(grad.z().max_abs() <= 1e-12);
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = grid(8);
        let grad = gradient(&ScalarField::constant(&g, 3.5));
        assert!(grad.max_abs() <= 1e-12);
    }

    #[test]
    fn gradient_matches_closed_form() {
        let g = grid(32);
        let s = ScalarField::from_fn(&g, |x, y, _| (3.0 * x).sin() * (2.0 * y).cos());
        let grad = gradient(&s);
        let gx = ScalarField::from_fn(&g, |x, y, _| 3.0 * (3.0 * x).cos() * (2.0 * y).cos());
        let gy = ScalarField::from_fn(&g, |x, y, _| -2.0 * (3.0 * x).sin() * (2.0 * y).sin());
        assert!(max_diff(grad.x(), &gx) <= 1e-12);
        assert!(max_diff(grad.y(), &gy) <= 1e-12);
        assert!(grad.z().max_abs() <= 1e-12);
    }

    #[test]
    fn divergence_of_sines() {
        let g = grid(16);
        let v = VectorField::from_fn(&g, |x, y, z| [x.sin(), y.sin(), z.sin()]);
        let expected = ScalarField::from_fn(&g, |x, y, z| x.cos() + y.cos() + z.cos());
        assert!(max_diff(&divergence(&v), &expected) <= 1e-12);
    }

    #[test]
    fn abc_flow_is_solenoidal_and_beltrami() {
        let g = grid(16);
        let u = abc(&g);
        assert!(divergence(&u).max_abs() <= 1e-12);
        let w = curl(&u);
        assert!((&w - &u).max_abs() <= 1e-12);
    }

    #[test]
    fn curl_matches_finite_differences() {
        // v = (0, 0, sin x): curl v = (∂y v_z, −∂x v_z, 0) = (0, −cos x, 0)
        let g = grid(64);
        let v = VectorField::from_fn(&g, |x, _, _| [0.0, 0.0, x.sin()]);
        let w = curl(&v);
        let n = g.n();
        let h = g.dx();
        // centered second-order difference of v_z along x
        let vz = v.z().values();
        let mut fd = vec![0.0; g.len()];
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let ip = g.index((i + 1) % n, j, k);
                    let im = g.index((i + n - 1) % n, j, k);
                    fd[g.index(i, j, k)] = -(vz[ip] - vz[im]) / (2.0 * h);
                }
            }
        }
        let fd = ScalarField::from_values(&g, fd);
        // O(h²) truncation: h²/6 ≈ 1.6e-3
        assert!(max_diff(w.y(), &fd) < 2e-3);
        let exact = ScalarField::from_fn(&g, |x, _, _| -x.cos());
        assert!(max_diff(w.y(), &exact) <= 1e-12);
        assert!(w.x().max_abs() <= 1e-12 && w.z().max_abs() <= 1e-12);
    }

    #[test]
    fn volume_integrals() {
        let g = grid(16);
        let one = ScalarField::constant(&g, 1.0);
        assert!((volume_integral(&one) - (2.0 * PI).powi(3)).abs() <= 1e-10);
        let s = ScalarField::from_fn(&g, |x, _, _| x.sin());
        assert!(volume_integral(&s).abs() <= 1e-12);
        let u = abc(&g);
        let e = volume_integral(&u.norm_sq_pointwise());
        assert!((e - 3.0 * (2.0 * PI).powi(3)).abs() <= 1e-10 * e);
    }

    #[test]
    fn dealias_cutoff() {
        let g = grid(32);
        let mode12 = ScalarField::from_fn(&g, |x, _, _| (12.0 * x).cos());
        assert!(mode12.dealiased().max_abs() <= 1e-14);
        let mode10 = ScalarField::from_fn(&g, |x, _, _| (10.0 * x).cos());
        assert!(max_diff(&mode10.dealiased(), &mode10) <= 1e-13);
    }

    #[test]
    fn dealias_keeps_retained_shell_of_noise() {
        use rand::{Rng, SeedableRng};
        let g = grid(16);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let noise: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = ScalarField::from_values(&g, noise);
        let before = s.to_spectral();
        let after = dealias(before.clone());
        let n = g.n() as i64;
        for (idx, (a, b)) in before.coeffs().iter().zip(after.coeffs()).enumerate() {
            let (i, j, k) = g.unravel(idx);
            let keep = [i, j, k].iter().all(|&m| 3 * g.modes()[m].abs() < n);
            if keep {
                assert_eq!(a, b);
            } else {
                assert_eq!(b.norm(), 0.0);
            }
        }
    }

    #[test]
    fn inverse_laplacian_examples() {
        let g = grid(32);
        let s = ScalarField::from_fn(&g, |x, _, _| -x.sin());
        let phi = inverse_laplacian_zero_mean(&s).unwrap();
        assert!(max_diff(&phi, &ScalarField::from_fn(&g, |x, _, _| x.sin())) <= 1e-12);

        let zero = inverse_laplacian_zero_mean(&ScalarField::zeros(&g)).unwrap();
        assert_eq!(zero.max_abs(), 0.0);

        let s = ScalarField::from_fn(&g, |x, y, _| -13.0 * (3.0 * x).sin() * (2.0 * y).cos());
        let phi = inverse_laplacian_zero_mean(&s).unwrap();
        let expected = ScalarField::from_fn(&g, |x, y, _| (3.0 * x).sin() * (2.0 * y).cos());
        assert!(max_diff(&phi, &expected) <= 1e-12);
    }

    #[test]
    fn inverse_laplacian_rejects_mean() {
        let g = grid(8);
        let s = ScalarField::from_fn(&g, |x, _, _| 1.0 + x.sin());
        assert!(matches!(inverse_laplacian_zero_mean(&s), Err(Error::NonZeroMean { .. })));
    }

    #[test]
    fn leray_projection_removes_gradients() {
        let g = grid(16);
        let u = abc(&g);
        let phi = ScalarField::from_fn(&g, |x, y, z| (x + 2.0 * y).sin() * z.cos());
        let v = &u + &gradient(&phi);
        let p = leray_project(&v);
        assert!((&p - &u).max_abs() <= 1e-12);
    }
}
