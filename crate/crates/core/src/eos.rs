//! Equations of state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pressure closure.
///
/// The barotropic system uses `Polytropic` (`P = Kρ^γ`); the fully
/// compressible and MHD systems use `IdealGas` (`P = (γ−1)ρe`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Eos {
    Polytropic { gamma: f64, k: f64 },
    IdealGas { gamma: f64 },
}

impl Eos {
    pub fn polytropic(gamma: f64, k: f64) -> Result<Self> {
        let eos = Eos::Polytropic { gamma, k };
        eos.validate()?;
        Ok(eos)
    }

    pub fn ideal_gas(gamma: f64) -> Result<Self> {
        let eos = Eos::IdealGas { gamma };
        eos.validate()?;
        Ok(eos)
    }

    pub fn validate(&self) -> Result<()> {
        let gamma = self.gamma();
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidParameter(format!("γ > 1 required (got {gamma})")));
        }
        if let Eos::Polytropic { k, .. } = *self {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::InvalidParameter(format!("K > 0 required (got {k})")));
            }
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            Eos::Polytropic { gamma, .. } | Eos::IdealGas { gamma } => gamma,
        }
    }

    pub fn is_barotropic(&self) -> bool {
        matches!(self, Eos::Polytropic { .. })
    }

    /// Pointwise pressure. `e` is ignored by the polytropic closure.
    #[inline]
    pub fn pressure(&self, rho: f64, e: f64) -> f64 {
        match *self {
            Eos::Polytropic { gamma, k } => k * rho.powf(gamma),
            Eos::IdealGas { gamma } => (gamma - 1.0) * rho * e,
        }
    }

    /// Squared adiabatic sound speed, `∂P/∂ρ` at constant entropy.
    #[inline]
    pub fn sound_speed_sq(&self, rho: f64, e: f64) -> f64 {
        match *self {
            Eos::Polytropic { gamma, k } => gamma * k * rho.powf(gamma - 1.0),
            Eos::IdealGas { gamma } => gamma * (gamma - 1.0) * e,
        }
    }

    /// `Π(ρ) = ∫₀^ρ η⁻¹ P'(η) dη = γK/(γ−1) ρ^{γ−1}` for the polytropic closure.
    pub fn enthalpy_potential(&self, rho: f64) -> Option<f64> {
        match *self {
            Eos::Polytropic { gamma, k } => Some(gamma * k / (gamma - 1.0) * rho.powf(gamma - 1.0)),
            Eos::IdealGas { .. } => None,
        }
    }

    /// Internal energy per unit volume of a polytropic fluid, `Kρ^γ/(γ−1)`.
    pub fn barotropic_internal_energy(&self, rho: f64) -> Option<f64> {
        match *self {
            Eos::Polytropic { gamma, k } => Some(k * rho.powf(gamma) / (gamma - 1.0)),
            Eos::IdealGas { .. } => None,
        }
    }
}
