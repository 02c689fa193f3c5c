use crate::spectral::{curl, gradient, ScalarField, VectorField};
use crate::system::{SystemKind, SystemState};

/// `ρu`, dealiased.
pub fn momentum(state: &SystemState) -> VectorField {
    state.u.scale_by(&state.rho)
}

/// Helicity density of the system: `u·ω` for baro-euler, `(ρu)·∇×(ρu)`
/// for ii-euler and comp-euler, `ρu·B` for mhd.
pub fn helicity_density(state: &SystemState) -> ScalarField {
    match state.kind {
        SystemKind::BaroEuler => state.u.dot(&curl(&state.u)),
        SystemKind::IiEuler | SystemKind::CompEuler => {
            let m = momentum(state);
            m.dot(&curl(&m))
        }
        SystemKind::Mhd => momentum(state).dot(magnetic(state)),
    }
}

/// `q = ω·∇ρ`, or `q_c = B·∇ρ` for mhd.
pub fn potential_vorticity(state: &SystemState) -> ScalarField {
    let grad_rho = gradient(&state.rho);
    match state.kind {
        SystemKind::Mhd => magnetic(state).dot(&grad_rho),
        _ => curl(&state.u).dot(&grad_rho),
    }
}

pub(crate) fn magnetic(state: &SystemState) -> &VectorField {
    state.b.as_ref().expect("mhd state carries B")
}

/// Volume-integrated energies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Energies {
    /// `E₀ = ∫ ½ρ|u|² dV`
    pub kinetic: f64,
    /// Total fluid energy: `∫ ρ(½|u|² + e)` for comp-euler and mhd, kinetic
    /// plus `∫ Kρ^γ/(γ−1)` for baro-euler, absent for ii-euler.
    pub total: Option<f64>,
    /// `E_{0,B} = E + ∫ ½|B|²` (mhd only).
    pub magnetic_total: Option<f64>,
}

/// `½ρ|u|²`, dealiased.
pub fn kinetic_energy_density(state: &SystemState) -> ScalarField {
    state.u.dot(&state.u).product(&state.rho).scaled(0.5)
}

/// Conserved energy density of the system, dealiased (`ℰ₀`, `ℰ`, or `ℰ_B`).
pub fn energy_density(state: &SystemState) -> ScalarField {
    let kinetic = kinetic_energy_density(state);
    match state.kind {
        SystemKind::IiEuler => kinetic,
        SystemKind::BaroEuler => {
            let internal = state.rho.map(|r| state.eos.barotropic_internal_energy(r).unwrap_or(0.0)).dealiased();
            &kinetic + &internal
        }
        SystemKind::CompEuler | SystemKind::Mhd => {
            let e = state.e.as_ref().expect("state carries e");
            let fluid = &kinetic + &state.rho.product(e);
            match &state.b {
                Some(b) => &fluid + &b.dot(b).scaled(0.5),
                None => fluid,
            }
        }
    }
}

pub fn energies(state: &SystemState) -> Energies {
    let rho = state.rho.values();
    let cell = state.grid().cell_volume();
    let u2 = state.u.norm_sq_pointwise();
    let kinetic: f64 = rho.iter().zip(u2.values()).map(|(r, v)| 0.5 * r * v).sum::<f64>() * cell;
    let total = match state.kind {
        SystemKind::IiEuler => None,
        SystemKind::BaroEuler => {
            let internal: f64 =
                rho.iter().map(|&r| state.eos.barotropic_internal_energy(r).unwrap_or(0.0)).sum::<f64>() * cell;
            Some(kinetic + internal)
        }
        SystemKind::CompEuler | SystemKind::Mhd => {
            let e = state.e.as_ref().expect("state carries e").values();
            let internal: f64 = rho.iter().zip(e).map(|(r, e)| r * e).sum::<f64>() * cell;
            Some(kinetic + internal)
        }
    };
    let magnetic_total = state.b.as_ref().map(|b| {
        let b2 = b.norm_sq_pointwise().integral();
        total.unwrap_or(kinetic) + 0.5 * b2
    });
    Energies { kinetic, total, magnetic_total }
}

/// `Π(ρ)` of the polytropic closure, dealiased.
pub fn enthalpy_potential(state: &SystemState) -> Option<ScalarField> {
    state.eos.enthalpy_potential(1.0)?;
    Some(state.rho.map(|r| state.eos.enthalpy_potential(r).unwrap_or(0.0)).dealiased())
}

/// Helper for callers that need the helicity integral alone.
pub fn helicity(state: &SystemState) -> f64 {
    helicity_density(state).integral()
}

/// `‖q‖∞` on the grid.
pub fn potential_vorticity_maxnorm(state: &SystemState) -> f64 {
    potential_vorticity(state).max_abs()
}

