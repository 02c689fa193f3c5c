use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eos::Eos;
use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField, VectorField};

/// Default density floor.
pub const DEFAULT_RHO_MIN: f64 = 1e-6;
/// Default relative residual target of the variable-density pressure solve.
pub const DEFAULT_PRESSURE_TOLERANCE: f64 = 1e-10;
/// Default iteration cap of the variable-density pressure solve.
pub const DEFAULT_PRESSURE_MAX_ITER: usize = 500;

/// The four flow systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    /// Barotropic compressible Euler.
    BaroEuler,
    /// Inhomogeneous incompressible Euler.
    IiEuler,
    /// Fully compressible Euler with internal energy.
    CompEuler,
    /// Ideal compressible MHD.
    Mhd,
}

impl SystemKind {
    pub const ALL: [SystemKind; 4] =
        [SystemKind::BaroEuler, SystemKind::IiEuler, SystemKind::CompEuler, SystemKind::Mhd];

    pub fn as_str(&self) -> &'static str {
        match self {
            SystemKind::BaroEuler => "baro-euler",
            SystemKind::IiEuler => "ii-euler",
            SystemKind::CompEuler => "comp-euler",
            SystemKind::Mhd => "mhd",
        }
    }

    pub fn has_internal_energy(&self) -> bool {
        matches!(self, SystemKind::CompEuler | SystemKind::Mhd)
    }

    pub fn has_magnetic_field(&self) -> bool {
        matches!(self, SystemKind::Mhd)
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown system `{s}`")))
    }
}

/// Floors and pressure-solver controls shared by every right-hand side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    pub rho_min: f64,
    pub pressure_tolerance: f64,
    pub pressure_max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            rho_min: DEFAULT_RHO_MIN,
            pressure_tolerance: DEFAULT_PRESSURE_TOLERANCE,
            pressure_max_iter: DEFAULT_PRESSURE_MAX_ITER,
        }
    }
}

/// Prognostic fields of one of the four systems.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemState {
    pub kind: SystemKind,
    pub rho: ScalarField,
    pub u: VectorField,
    /// Specific internal energy (comp-euler and mhd only).
    pub e: Option<ScalarField>,
    /// Magnetic field (mhd only).
    pub b: Option<VectorField>,
    pub t: f64,
    pub eos: Eos,
    pub settings: SolverSettings,
}

/// Instantaneous time derivatives of the prognostic fields, together with
/// the pressure used to produce them.
#[derive(Clone, Debug, PartialEq)]
pub struct Tendency {
    pub rho: ScalarField,
    pub u: VectorField,
    pub e: Option<ScalarField>,
    pub b: Option<VectorField>,
    pub pressure: ScalarField,
}

impl SystemState {
    pub fn baro_euler(rho: ScalarField, u: VectorField, eos: Eos) -> Result<Self> {
        Self::assemble(SystemKind::BaroEuler, rho, u, None, None, eos)
    }

    /// The equation of state is unused by the incompressible system; a
    /// placeholder ideal gas is stored.
    pub fn ii_euler(rho: ScalarField, u: VectorField) -> Result<Self> {
        Self::assemble(SystemKind::IiEuler, rho, u, None, None, Eos::IdealGas { gamma: 1.4 })
    }

    pub fn comp_euler(rho: ScalarField, u: VectorField, e: ScalarField, eos: Eos) -> Result<Self> {
        Self::assemble(SystemKind::CompEuler, rho, u, Some(e), None, eos)
    }

    pub fn mhd(rho: ScalarField, u: VectorField, e: ScalarField, b: VectorField, eos: Eos) -> Result<Self> {
        Self::assemble(SystemKind::Mhd, rho, u, Some(e), Some(b), eos)
    }

    fn assemble(
        kind: SystemKind,
        rho: ScalarField,
        u: VectorField,
        e: Option<ScalarField>,
        b: Option<VectorField>,
        eos: Eos,
    ) -> Result<Self> {
        let state = Self { kind, rho, u, e, b, t: 0.0, eos, settings: SolverSettings::default() };
        state.validate()?;
        Ok(state)
    }

    pub fn with_settings(mut self, settings: SolverSettings) -> Result<Self> {
        self.settings = settings;
        self.validate()?;
        Ok(self)
    }

    pub fn grid(&self) -> &Grid {
        self.rho.grid()
    }

    /// Check field presence, grids, finiteness, the density floor and
    /// non-negative internal energy.
    pub fn validate(&self) -> Result<()> {
        self.eos.validate()?;
        if self.kind.has_internal_energy() != self.e.is_some() {
            return Err(Error::SystemMismatch(format!(
                "{} {} an internal energy field",
                self.kind,
                if self.e.is_some() { "does not take" } else { "requires" }
            )));
        }
        if self.kind.has_magnetic_field() != self.b.is_some() {
            return Err(Error::SystemMismatch(format!(
                "{} {} a magnetic field",
                self.kind,
                if self.b.is_some() { "does not take" } else { "requires" }
            )));
        }
        if matches!(self.kind, SystemKind::BaroEuler) && !self.eos.is_barotropic() {
            return Err(Error::SystemMismatch("baro-euler requires a polytropic closure".into()));
        }
        if self.kind.has_internal_energy() && self.eos.is_barotropic() {
            return Err(Error::SystemMismatch(format!("{} requires an ideal-gas closure", self.kind)));
        }
        let grid = self.grid();
        let same = self.u.grid().same_as(grid)
            && self.e.as_ref().is_none_or(|e| e.grid().same_as(grid))
            && self.b.as_ref().is_none_or(|b| b.grid().same_as(grid));
        if !same {
            return Err(Error::SystemMismatch("fields live on different grids".into()));
        }
        self.rho.ensure_finite("rho")?;
        self.u.ensure_finite("u")?;
        if let Some(e) = &self.e {
            e.ensure_finite("e")?;
        }
        if let Some(b) = &self.b {
            b.ensure_finite("B")?;
        }
        check_density_floor(&self.rho, self.settings.rho_min)?;
        if let Some(e) = &self.e {
            check_energy(e)?;
        }
        Ok(())
    }

    /// Pointwise pressure from the equation of state. Not available for
    /// ii-euler, whose pressure comes from the elliptic solve.
    pub fn eos_pressure(&self) -> Result<ScalarField> {
        eos_pressure(self)
    }

    /// `self + factor · tendency`, time advanced by `factor`.
    pub fn advanced(&self, factor: f64, tendency: &Tendency) -> Self {
        let mut next = self.clone();
        next.rho.axpy(factor, &tendency.rho);
        next.u.axpy(factor, &tendency.u);
        if let (Some(e), Some(de)) = (next.e.as_mut(), tendency.e.as_ref()) {
            e.axpy(factor, de);
        }
        if let (Some(b), Some(db)) = (next.b.as_mut(), tendency.b.as_ref()) {
            b.axpy(factor, db);
        }
        next.t += factor;
        next
    }
}

impl Tendency {
    pub fn zeros_like(state: &SystemState) -> Self {
        let g = state.grid();
        Self {
            rho: ScalarField::zeros(g),
            u: VectorField::zeros(g),
            e: state.e.as_ref().map(|_| ScalarField::zeros(g)),
            b: state.b.as_ref().map(|_| VectorField::zeros(g)),
            pressure: ScalarField::zeros(g),
        }
    }

    /// `self += factor · other` on the prognostic parts.
    pub fn axpy(&mut self, factor: f64, other: &Tendency) {
        self.rho.axpy(factor, &other.rho);
        self.u.axpy(factor, &other.u);
        if let (Some(a), Some(b)) = (self.e.as_mut(), other.e.as_ref()) {
            a.axpy(factor, b);
        }
        if let (Some(a), Some(b)) = (self.b.as_mut(), other.b.as_ref()) {
            a.axpy(factor, b);
        }
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = self.rho.max_abs().max(self.u.max_abs());
        if let Some(e) = &self.e {
            m = m.max(e.max_abs());
        }
        if let Some(b) = &self.b {
            m = m.max(b.max_abs());
        }
        m
    }
}

pub(crate) fn check_density_floor(rho: &ScalarField, floor: f64) -> Result<()> {
    let idx = rho.argmin();
    let value = rho.values()[idx];
    if value < floor {
        let (i, j, k) = rho.grid().unravel(idx);
        return Err(Error::DensityFloor { value, floor, i, j, k });
    }
    Ok(())
}

pub(crate) fn check_energy(e: &ScalarField) -> Result<()> {
    let idx = e.argmin();
    let value = e.values()[idx];
    if value < 0.0 {
        let (i, j, k) = e.grid().unravel(idx);
        return Err(Error::NegativeEnergy { value, i, j, k });
    }
    Ok(())
}

/// Pressure from the equation of state, dealiased.
pub fn eos_pressure(state: &SystemState) -> Result<ScalarField> {
    check_density_floor(&state.rho, state.settings.rho_min)?;
    let p = match (&state.kind, &state.e) {
        (SystemKind::IiEuler, _) => {
            return Err(Error::SystemMismatch(
                "ii-euler pressure comes from the elliptic solve, not an equation of state".into(),
            ))
        }
        (SystemKind::BaroEuler, _) => state.rho.map(|r| state.eos.pressure(r, 0.0)),
        (_, Some(e)) => {
            check_energy(e)?;
            state.rho.zip_map(e, |r, e| state.eos.pressure(r, e))
        }
        (_, None) => unreachable!("validated state carries e"),
    };
    Ok(p.dealiased())
}
