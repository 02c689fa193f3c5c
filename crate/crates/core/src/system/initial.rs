//! Canonical initial conditions.
//!
//! All recipes use a density of the form `1 + ε·(…)` and, for the systems
//! carrying internal energy, a specific internal energy chosen so the
//! ideal-gas pressure starts uniform at `pressure` (except `Acoustic`,
//! which carries its own linear pressure perturbation). Coordinates in
//! the formulas are `2πx/L`, so every recipe is periodic on any box.
//!
//! | name          | velocity                                                        | B (mhd)                                               |
//! |---------------|-----------------------------------------------------------------|-------------------------------------------------------|
//! | `abc`         | `(A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)`     | `field_amplitude ·` the same ABC field               |
//! | `taylor-green`| `V (sin x cos y cos z, −cos x sin y cos z, 0)`                  | zero                                                  |
//! | `acoustic`    | `(ε c₀ sin x, 0, 0)` with `ρ = 1 + ε sin x`                     | uniform `(field_amplitude, 0, 0)`                     |
//! | `orszag-tang` | [`orszag_tang_velocity`]                                        | [`orszag_tang_field`]                                 |
//! | `random`      | curl of a seeded random trig vector potential, components ≤ `V` | same construction with another seed stream           |
//!
//! The `random` density is `1 + ε·S/ΣS` for a seeded series `S` whose
//! amplitudes decay like `|k|⁻²` up to `max_mode` per axis.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eos::Eos;
use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;

use crate::spectral::{curl, leray_project, Grid, ScalarField, VectorField};

use super::state::{SolverSettings, SystemKind, SystemState};

/// Strength of the out-of-plane coupling in the 3D Orszag–Tang extension.
pub const ORSZAG_TANG_COUPLING: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    #[default]
    Z,
}

impl Axis {
    fn pick(self, x: f64, y: f64, z: f64) -> f64 {
        match self {
            Axis::X => x,
            Axis::Y => y,
            Axis::Z => z,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    /// Arnold–Beltrami–Childress flow with `ρ = 1 + ε sin(axis)`.
    Abc { a: f64, b: f64, c: f64, density_amplitude: f64, density_axis: Axis, pressure: f64, field_amplitude: f64 },
    TaylorGreen { amplitude: f64, density_amplitude: f64, density_axis: Axis, pressure: f64 },
    /// Right-running linear sound wave on a uniform background.
    Acoustic { amplitude: f64, pressure: f64, field_amplitude: f64 },
    /// Three-dimensional Orszag–Tang-style vortex with `ρ = ρ₀(1 + δ sin(x + z))`
    /// and uniform pressure `p₀`. `None` takes the classical `ρ₀ = γ²`, `p₀ = γ`.
    OrszagTang {
        velocity_amplitude: f64,
        field_amplitude: f64,
        density_amplitude: f64,
        density: Option<f64>,
        pressure: Option<f64>,
    },
    Random { seed: u64, max_mode: u32, velocity_amplitude: f64, density_amplitude: f64, field_amplitude: f64, pressure: f64 },
}

impl InitialCondition {
    pub fn name(&self) -> &'static str {
        match self {
            InitialCondition::Abc { .. } => "abc",
            InitialCondition::TaylorGreen { .. } => "taylor-green",
            InitialCondition::Acoustic { .. } => "acoustic",
            InitialCondition::OrszagTang { .. } => "orszag-tang",
            InitialCondition::Random { .. } => "random",
        }
    }

    /// Unit ABC flow with density `1 + ε sin(axis)`.
    pub fn abc(density_amplitude: f64, density_axis: Axis) -> Self {
        InitialCondition::Abc {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            density_amplitude,
            density_axis,
            pressure: 1.0,
            field_amplitude: 0.0,
        }
    }

    pub fn orszag_tang() -> Self {
        InitialCondition::OrszagTang {
            velocity_amplitude: 1.0,
            field_amplitude: 1.0,
            density_amplitude: 0.2,
            density: None,
            pressure: None,
        }
    }

    /// Default recipe per system, used when a configuration names none.
    pub fn canonical(kind: SystemKind) -> Self {
        match kind {
            SystemKind::BaroEuler => Self::abc(0.3, Axis::X),
            SystemKind::IiEuler | SystemKind::CompEuler => Self::abc(0.3, Axis::Z),
            SystemKind::Mhd => Self::orszag_tang(),
        }
    }
}

pub fn abc_velocity(grid: &Grid, a: f64, b: f64, c: f64) -> VectorField {
    vector_fn(grid, |x, y, z| {
        [a * z.sin() + c * y.cos(), b * x.sin() + a * z.cos(), c * y.sin() + b * x.cos()]
    })
}

pub fn taylor_green_velocity(grid: &Grid, amplitude: f64) -> VectorField {
    vector_fn(grid, |x, y, z| {
        [
            amplitude * x.sin() * y.cos() * z.cos(),
            -amplitude * x.cos() * y.sin() * z.cos(),
            0.0,
        ]
    })
}

/// `V·(−sin y + ε sin z, sin x + ε sin z, ε(sin x + sin y))`, ε = [`ORSZAG_TANG_COUPLING`].
pub fn orszag_tang_velocity(grid: &Grid, amplitude: f64) -> VectorField {
    let eps = ORSZAG_TANG_COUPLING;
    vector_fn(grid, |x, y, z| {
        [
            amplitude * (-y.sin() + eps * z.sin()),
            amplitude * (x.sin() + eps * z.sin()),
            amplitude * eps * (x.sin() + y.sin()),
        ]
    })
}

/// `B₀·(−sin y + ε cos z, sin 2x + ε cos z, ε cos x)`; each component is
/// independent of its own coordinate, so the field is solenoidal.
pub fn orszag_tang_field(grid: &Grid, amplitude: f64) -> VectorField {
    let eps = ORSZAG_TANG_COUPLING;
    vector_fn(grid, |x, y, z| {
        [
            amplitude * (-y.sin() + eps * z.cos()),
            amplitude * ((2.0 * x).sin() + eps * z.cos()),
            amplitude * eps * x.cos(),
        ]
    })
}

/// Samples `f(ξ)` with `ξ = 2πx/L`, so recipes are periodic on any box.
fn scalar_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> f64) -> ScalarField {
    let c = 2.0 * PI / grid.length();
    ScalarField::from_fn(grid, |x, y, z| f(c * x, c * y, c * z))
}

fn vector_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> VectorField {
    let c = 2.0 * PI / grid.length();
    VectorField::from_fn(grid, |x, y, z| f(c * x, c * y, c * z))
}

/// Random trig series `Σ a cos(k·ξ + φ)` with integer wavenumbers up to
/// `max_mode` per axis and amplitudes decaying like `|k|⁻²`.
struct TrigSeries {
    terms: Vec<([i64; 3], f64, f64)>,
}

impl TrigSeries {
    fn random(rng: &mut ChaCha8Rng, max_mode: u32) -> Self {
        let m = max_mode as i64;
        let mut terms = Vec::new();
        for kx in -m..=m {
            for ky in -m..=m {
                for kz in 0..=m {
                    if kz == 0 && (ky < 0 || (ky == 0 && kx <= 0)) {
                        continue;
                    }
                    let k2 = (kx * kx + ky * ky + kz * kz) as f64;
                    let amp: f64 = rng.random_range(-1.0..1.0) / k2;
                    let phase: f64 = rng.random_range(0.0..2.0 * PI);
                    terms.push(([kx, ky, kz], amp, phase));
                }
            }
        }
        Self { terms }
    }

    /// Unnormalised spectral coefficients of the series on `grid`.
    fn coefficients(&self, grid: &Grid) -> Vec<Complex64> {
        let n = grid.n() as i64;
        let wrap = |k: i64| k.rem_euclid(n) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
        let weight = 0.5 * grid.len() as f64;
        for &([kx, ky, kz], a, p) in &self.terms {
            let c = Complex64::from_polar(weight * a, p);
            coeffs[grid.index(wrap(kx), wrap(ky), wrap(kz))] += c;
            coeffs[grid.index(wrap(-kx), wrap(-ky), wrap(-kz))] += c.conj();
        }
        coeffs
    }

    fn sample(&self, grid: &Grid) -> ScalarField {
        ScalarField::from_values(grid, grid.inverse(self.coefficients(grid)))
    }

    /// Grid-independent bound on the series.
    fn bound(&self) -> f64 {
        self.terms.iter().map(|(_, a, _)| a.abs()).sum()
    }

    /// Grid-independent bound on the ξ-gradient of the series.
    fn gradient_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|([kx, ky, kz], a, _)| a.abs() * ((kx * kx + ky * ky + kz * kz) as f64).sqrt())
            .sum()
    }
}

/// Curl of a random trig vector potential, scaled by a grid-independent
/// bound so `|u_i| ≤ amplitude`.
fn random_solenoidal(grid: &Grid, rng: &mut ChaCha8Rng, max_mode: u32, amplitude: f64) -> VectorField {
    let potential = [
        TrigSeries::random(rng, max_mode),
        TrigSeries::random(rng, max_mode),
        TrigSeries::random(rng, max_mode),
    ];
    let bound: f64 = potential.iter().map(TrigSeries::gradient_bound).sum();
    let scale = if bound > 0.0 { amplitude / bound } else { 0.0 };
    let a = VectorField::new(potential[0].sample(grid), potential[1].sample(grid), potential[2].sample(grid));
    // ∂/∂ξ = (L/2π) ∂/∂x
    curl(&a).scaled(scale * grid.length() / (2.0 * PI))
}

fn modulated_density(grid: &Grid, amplitude: f64, axis: Axis) -> ScalarField {
    scalar_fn(grid, |x, y, z| 1.0 + amplitude * axis.pick(x, y, z).sin())
}

/// Specific internal energy giving uniform ideal-gas pressure `p0`.
fn uniform_pressure_energy(rho: &ScalarField, eos: &Eos, p0: f64) -> ScalarField {
    rho.map(|r| p0 / ((eos.gamma() - 1.0) * r)).dealiased()
}

/// Build a validated state for `kind` from `ic`.
pub fn build_state(
    kind: SystemKind,
    ic: &InitialCondition,
    grid: &Grid,
    eos: Eos,
    settings: SolverSettings,
) -> Result<SystemState> {
    let (rho, u, e, b) = match *ic {
        InitialCondition::Abc { a, b, c, density_amplitude, density_axis, pressure, field_amplitude } => {
            let rho = modulated_density(grid, density_amplitude, density_axis);
            let u = abc_velocity(grid, a, b, c);
            let e = uniform_pressure_energy(&rho, &eos, pressure);
            let bf = u.scaled(field_amplitude);
            (rho, u, e, bf)
        }
        InitialCondition::TaylorGreen { amplitude, density_amplitude, density_axis, pressure } => {
            let rho = modulated_density(grid, density_amplitude, density_axis);
            let e = uniform_pressure_energy(&rho, &eos, pressure);
            (rho, taylor_green_velocity(grid, amplitude), e, VectorField::zeros(grid))
        }
        InitialCondition::Acoustic { amplitude, pressure, field_amplitude } => {
            if kind == SystemKind::IiEuler {
                return Err(Error::InvalidParameter(
                    "acoustic initial data needs a compressible system".into(),
                ));
            }
            let gamma = eos.gamma();
            let c0 = match eos {
                Eos::Polytropic { .. } => eos.sound_speed_sq(1.0, 0.0).sqrt(),
                Eos::IdealGas { .. } => (gamma * pressure).sqrt(),
            };
            let rho = scalar_fn(grid, |x, _, _| 1.0 + amplitude * x.sin());
            let u = vector_fn(grid, |x, _, _| [amplitude * c0 * x.sin(), 0.0, 0.0]);
            let e = scalar_fn(grid, |x, _, _| {
                let p = pressure * (1.0 + gamma * amplitude * x.sin());
                p / ((gamma - 1.0) * (1.0 + amplitude * x.sin()))
            })
            .dealiased();
            (rho, u, e, VectorField::constant(grid, [field_amplitude, 0.0, 0.0]))
        }
        InitialCondition::OrszagTang { velocity_amplitude, field_amplitude, density_amplitude, density, pressure } => {
            let gamma = eos.gamma();
            let rho0 = density.unwrap_or(gamma * gamma);
            let pressure = pressure.unwrap_or(gamma);
            let rho = scalar_fn(grid, |x, _, z| rho0 * (1.0 + density_amplitude * (x + z).sin()));
            let e = uniform_pressure_energy(&rho, &eos, pressure);
            (
                rho,
                orszag_tang_velocity(grid, velocity_amplitude),
                e,
                orszag_tang_field(grid, field_amplitude),
            )
        }
        InitialCondition::Random { seed, max_mode, velocity_amplitude, density_amplitude, field_amplitude, pressure } => {
            if max_mode == 0 || 3 * max_mode as usize >= grid.n() {
                return Err(Error::InvalidParameter(format!(
                    "random initial data needs 1 ≤ max_mode < n/3 (got {max_mode} with n = {})",
                    grid.n()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_solenoidal(grid, &mut rng, max_mode, velocity_amplitude);
            let series = TrigSeries::random(&mut rng, max_mode);
            let bound = series.bound();
            let rho = series.sample(grid).map(|v| 1.0 + density_amplitude * v / bound);
            let b = random_solenoidal(grid, &mut rng, max_mode, field_amplitude);
            let e = uniform_pressure_energy(&rho, &eos, pressure);
            (rho, u, e, b)
        }
    };
    let state = match kind {
        SystemKind::BaroEuler => SystemState::baro_euler(rho, u, eos)?,
        SystemKind::IiEuler => SystemState::ii_euler(rho, leray_project(&u))?,
        SystemKind::CompEuler => SystemState::comp_euler(rho, u, e, eos)?,
        SystemKind::Mhd => SystemState::mhd(rho, u, e, b, eos)?,
    };
    state.with_settings(settings)
}
