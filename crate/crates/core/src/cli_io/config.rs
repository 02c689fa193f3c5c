//! Run configuration in TOML.
//!
//! ```toml
//! [system]
//! kind = "ii-euler"        # baro-euler | ii-euler | comp-euler | mhd
//! gamma = 1.4              # default 2 (baro-euler) or 1.4
//! k = 1.0                  # baro-euler only, default 1
//!
//! [grid]
//! n = 32
//! length = 6.283185307179586   # default 2π
//!
//! [initial]
//! name = "abc"             # default depends on the system
//! density_amplitude = 0.3
//!
//! [time]
//! cfl = 0.25
//! t_end = 0.5
//! stride = 1
//! dt_max = 0.1
//! # dt = 0.01             # fixed step, overrides cfl
//!
//! [tolerances]
//! rho_min = 1e-6
//! pressure_tolerance = 1e-10
//! pressure_max_iter = 500
//!
//! [diagnostics]
//! # window = 0.5          # λ_H averaging window, default the whole run
//! ```
//!
//! Keys accepted under `[initial]`, by recipe (defaults in brackets):
//!
//! | name           | keys                                                                                                   |
//! |----------------|--------------------------------------------------------------------------------------------------------|
//! | `abc`          | `a`, `b`, `c` [1], `density_amplitude` [0.3], `density_axis` [z], `pressure` [1], `field_amplitude` [0] |
//! | `taylor-green` | `amplitude` [1], `density_amplitude` [0], `density_axis` [z], `pressure` [1]                           |
//! | `acoustic`     | `amplitude` [1e-3], `pressure` [1], `field_amplitude` [0]                                              |
//! | `orszag-tang`  | `velocity_amplitude` [1], `field_amplitude` [1], `density_amplitude` [0.2], `density` [γ²], `pressure` [γ] |
//! | `random`       | `seed` [0], `max_mode` [2], `velocity_amplitude` [1], `density_amplitude` [0.3], `field_amplitude` [1], `pressure` [1] |
//!
//! Without a name the system's canonical recipe is used and keys override
//! its parameters.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;

use crate::eos::Eos;
use crate::error::{Error, Result};
use crate::spectral::{Grid, MIN_POINTS};
use crate::system::initial::{Axis, InitialCondition};
use crate::system::{SolverSettings, SystemKind, DEFAULT_CFL};

pub const DEFAULT_T_END: f64 = 0.5;
pub const DEFAULT_DT_MAX: f64 = 0.1;
pub const DEFAULT_BAROTROPIC_GAMMA: f64 = 2.0;
pub const DEFAULT_IDEAL_GAS_GAMMA: f64 = 1.4;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    system: RawSystem,
    grid: RawGrid,
    #[serde(default)]
    initial: RawInitial,
    #[serde(default)]
    time: RawTime,
    #[serde(default)]
    tolerances: RawTolerances,
    #[serde(default)]
    diagnostics: RawDiagnostics,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    kind: String,
    gamma: Option<f64>,
    k: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n: i64,
    length: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    name: Option<String>,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
    amplitude: Option<f64>,
    velocity_amplitude: Option<f64>,
    density_amplitude: Option<f64>,
    density_axis: Option<Axis>,
    field_amplitude: Option<f64>,
    pressure: Option<f64>,
    density: Option<f64>,
    seed: Option<u64>,
    max_mode: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    cfl: Option<f64>,
    t_end: Option<f64>,
    stride: Option<i64>,
    dt_max: Option<f64>,
    dt: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    rho_min: Option<f64>,
    pressure_tolerance: Option<f64>,
    pressure_max_iter: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiagnostics {
    window: Option<f64>,
}

/// Validated run parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub system: SystemKind,
    pub eos: Eos,
    pub n: usize,
    pub length: f64,
    pub initial: InitialCondition,
    pub cfl: f64,
    pub t_end: f64,
    /// Report every `stride` steps (the final step always reports).
    pub stride: usize,
    pub dt_max: f64,
    /// Fixed step; `None` uses the CFL step.
    pub dt: Option<f64>,
    pub settings: SolverSettings,
    /// λ_H averaging window; `None` averages over the whole run.
    pub window: Option<f64>,
}

impl RunConfig {
    /// Defaults for `system` on an `n`-point grid.
    pub fn new(system: SystemKind, n: usize) -> Self {
        Self {
            system,
            eos: default_eos(system),
            n,
            length: 2.0 * PI,
            initial: InitialCondition::canonical(system),
            cfl: DEFAULT_CFL,
            t_end: DEFAULT_T_END,
            stride: 1,
            dt_max: DEFAULT_DT_MAX,
            dt: None,
            settings: SolverSettings::default(),
            window: None,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.length)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        raw.validate()
    }
}

fn default_eos(system: SystemKind) -> Eos {
    match system {
        SystemKind::BaroEuler => Eos::Polytropic { gamma: DEFAULT_BAROTROPIC_GAMMA, k: 1.0 },
        _ => Eos::IdealGas { gamma: DEFAULT_IDEAL_GAS_GAMMA },
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    RunConfig::from_toml_str(&text)
}

fn range(key: &str, message: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key}: {message}"))
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 { Ok(v) } else { Err(range(key, format!("must be positive (got {v})"))) }
}

fn finite(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() { Ok(v) } else { Err(range(key, format!("must be finite (got {v})"))) }
}

fn density_amplitude(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v.abs() < 1.0 { Ok(v) } else { Err(range(key, format!("|ε| < 1 required (got {v})"))) }
}

impl RawConfig {
    fn validate(self) -> Result<RunConfig> {
        let system: SystemKind = self.system.kind.parse().map_err(|_| {
            range("system.kind", format!("unknown system `{}` (expected baro-euler, ii-euler, comp-euler or mhd)", self.system.kind))
        })?;
        let gamma = self.system.gamma.unwrap_or(match system {
            SystemKind::BaroEuler => DEFAULT_BAROTROPIC_GAMMA,
            _ => DEFAULT_IDEAL_GAS_GAMMA,
        });
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(range("system.gamma", format!("γ > 1 required (got {gamma})")));
        }
        let eos = match system {
            SystemKind::BaroEuler => Eos::Polytropic { gamma, k: positive("system.k", self.system.k.unwrap_or(1.0))? },
            _ => {
                if self.system.k.is_some() {
                    return Err(range("system.k", "applies to baro-euler only"));
                }
                Eos::IdealGas { gamma }
            }
        };

        let n = self.grid.n;
        if n < MIN_POINTS as i64 || n % 2 != 0 {
            return Err(range("grid.n", format!("even and ≥ {MIN_POINTS} required (got {n})")));
        }
        let n = n as usize;
        let length = positive("grid.length", self.grid.length.unwrap_or(2.0 * PI))?;

        let initial = self.initial.build(system, n)?;

        let mut config = RunConfig::new(system, n);
        config.eos = eos;
        config.length = length;
        config.initial = initial;
        let t = self.time;
        if let Some(cfl) = t.cfl {
            if !(cfl > 0.0 && cfl <= 1.0) {
                return Err(range("time.cfl", format!("must lie in (0, 1] (got {cfl})")));
            }
            config.cfl = cfl;
        }
        if let Some(t_end) = t.t_end {
            if !(t_end.is_finite() && t_end >= 0.0) {
                return Err(range("time.t_end", format!("must be ≥ 0 (got {t_end})")));
            }
            config.t_end = t_end;
        }
        if let Some(stride) = t.stride {
            if stride < 1 {
                return Err(range("time.stride", format!("must be ≥ 1 (got {stride})")));
            }
            config.stride = stride as usize;
        }
        if let Some(dt_max) = t.dt_max {
            config.dt_max = positive("time.dt_max", dt_max)?;
        }
        config.dt = t.dt.map(|dt| positive("time.dt", dt)).transpose()?;

        let tol = self.tolerances;
        if let Some(v) = tol.rho_min {
            config.settings.rho_min = positive("tolerances.rho_min", v)?;
        }
        if let Some(v) = tol.pressure_tolerance {
            config.settings.pressure_tolerance = positive("tolerances.pressure_tolerance", v)?;
        }
        if let Some(v) = tol.pressure_max_iter {
            if v < 1 {
                return Err(range("tolerances.pressure_max_iter", format!("must be ≥ 1 (got {v})")));
            }
            config.settings.pressure_max_iter = v as usize;
        }
        config.window = self.diagnostics.window.map(|w| positive("diagnostics.window", w)).transpose()?;
        Ok(config)
    }
}

impl RawInitial {
    fn reject(&self, name: &str, keys: &[(&str, bool)]) -> Result<()> {
        match keys.iter().find(|(_, present)| *present) {
            Some((key, _)) => Err(range(&format!("initial.{key}"), format!("does not apply to `{name}`"))),
            None => Ok(()),
        }
    }

    fn build(self, system: SystemKind, n: usize) -> Result<InitialCondition> {
        let canonical = InitialCondition::canonical(system);
        let name = self.name.clone().unwrap_or_else(|| canonical.name().to_owned());
        let base = if canonical.name() == name { Some(canonical) } else { None };
        let f = |key: &str, v: Option<f64>, default: f64| v.map_or(Ok(default), |v| finite(&format!("initial.{key}"), v));
        let amp = |v: Option<f64>, default: f64| {
            v.map_or(Ok(default), |v| density_amplitude("initial.density_amplitude", v))
        };
        let pressure = |v: Option<f64>| v.map_or(Ok(1.0), |v| positive("initial.pressure", v));
        let ic = match name.as_str() {
            "abc" => {
                self.reject(&name, &[
                    ("density", self.density.is_some()),
                    ("amplitude", self.amplitude.is_some()),
                    ("velocity_amplitude", self.velocity_amplitude.is_some()),
                    ("seed", self.seed.is_some()),
                    ("max_mode", self.max_mode.is_some()),
                ])?;
                let (da, axis) = match base {
                    Some(InitialCondition::Abc { density_amplitude, density_axis, .. }) => (density_amplitude, density_axis),
                    _ => (0.3, Axis::Z),
                };
                InitialCondition::Abc {
                    a: f("a", self.a, 1.0)?,
                    b: f("b", self.b, 1.0)?,
                    c: f("c", self.c, 1.0)?,
                    density_amplitude: amp(self.density_amplitude, da)?,
                    density_axis: self.density_axis.unwrap_or(axis),
                    pressure: pressure(self.pressure)?,
                    field_amplitude: f("field_amplitude", self.field_amplitude, 0.0)?,
                }
            }
            "taylor-green" => {
                self.reject(&name, &[
                    ("density", self.density.is_some()),
                    ("a", self.a.is_some()),
                    ("b", self.b.is_some()),
                    ("c", self.c.is_some()),
                    ("velocity_amplitude", self.velocity_amplitude.is_some()),
                    ("field_amplitude", self.field_amplitude.is_some()),
                    ("seed", self.seed.is_some()),
                    ("max_mode", self.max_mode.is_some()),
                ])?;
                InitialCondition::TaylorGreen {
                    amplitude: f("amplitude", self.amplitude, 1.0)?,
                    density_amplitude: amp(self.density_amplitude, 0.0)?,
                    density_axis: self.density_axis.unwrap_or_default(),
                    pressure: pressure(self.pressure)?,
                }
            }
            "acoustic" => {
                self.reject(&name, &[
                    ("density", self.density.is_some()),
                    ("a", self.a.is_some()),
                    ("b", self.b.is_some()),
                    ("c", self.c.is_some()),
                    ("velocity_amplitude", self.velocity_amplitude.is_some()),
                    ("density_amplitude", self.density_amplitude.is_some()),
                    ("density_axis", self.density_axis.is_some()),
                    ("seed", self.seed.is_some()),
                    ("max_mode", self.max_mode.is_some()),
                ])?;
                if system == SystemKind::IiEuler {
                    return Err(range("initial.name", "`acoustic` needs a compressible system"));
                }
                InitialCondition::Acoustic {
                    amplitude: amp(self.amplitude, 1e-3).map_err(|_| range("initial.amplitude", "|ε| < 1 required"))?,
                    pressure: pressure(self.pressure)?,
                    field_amplitude: f("field_amplitude", self.field_amplitude, 0.0)?,
                }
            }
            "orszag-tang" => {
                self.reject(&name, &[
                    ("a", self.a.is_some()),
                    ("b", self.b.is_some()),
                    ("c", self.c.is_some()),
                    ("amplitude", self.amplitude.is_some()),
                    ("density_axis", self.density_axis.is_some()),
                    ("seed", self.seed.is_some()),
                    ("max_mode", self.max_mode.is_some()),
                ])?;
                InitialCondition::OrszagTang {
                    velocity_amplitude: f("velocity_amplitude", self.velocity_amplitude, 1.0)?,
                    field_amplitude: f("field_amplitude", self.field_amplitude, 1.0)?,
                    density_amplitude: amp(self.density_amplitude, 0.2)?,
                    density: self.density.map(|v| positive("initial.density", v)).transpose()?,
                    pressure: self.pressure.map(|v| positive("initial.pressure", v)).transpose()?,
                }
            }
            "random" => {
                self.reject(&name, &[
                    ("density", self.density.is_some()),
                    ("a", self.a.is_some()),
                    ("b", self.b.is_some()),
                    ("c", self.c.is_some()),
                    ("amplitude", self.amplitude.is_some()),
                    ("density_axis", self.density_axis.is_some()),
                ])?;
                let max_mode = self.max_mode.unwrap_or(2);
                if max_mode < 1 || 3 * max_mode >= n as i64 {
                    return Err(range("initial.max_mode", format!("1 ≤ max_mode < n/3 required (got {max_mode})")));
                }
                InitialCondition::Random {
                    seed: self.seed.unwrap_or(0),
                    max_mode: max_mode as u32,
                    velocity_amplitude: f("velocity_amplitude", self.velocity_amplitude, 1.0)?,
                    density_amplitude: amp(self.density_amplitude, 0.3)?,
                    field_amplitude: f("field_amplitude", self.field_amplitude, 1.0)?,
                    pressure: pressure(self.pressure)?,
                }
            }
            other => {
                return Err(range(
                    "initial.name",
                    format!("unknown recipe `{other}` (expected abc, taylor-green, acoustic, orszag-tang or random)"),
                ))
            }
        };
        Ok(ic)
    }
}
