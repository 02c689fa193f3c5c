//! Right-hand sides of the four systems.
//!
//! Every nonlinear product is followed by 2/3-rule truncation, so
//! tendencies of band-limited states stay band-limited.

use crate::error::{Error, Result};
use crate::spectral::{curl, divergence, gradient, ScalarField, VectorField};

use super::pressure::solve_pressure_ii;
use super::state::{check_density_floor, check_energy, eos_pressure, SystemKind, SystemState, Tendency};

/// `u·∇f`, dealiased.
pub fn advect_scalar(u: &VectorField, f: &ScalarField) -> ScalarField {
    u.dot(&gradient(f))
}

/// `(u·∇)v`, dealiased.
pub fn advect_vector(u: &VectorField, v: &VectorField) -> VectorField {
    v.map_components(|c| advect_scalar(u, c))
}

/// `1/ρ`, dealiased.
pub fn inverse_density(rho: &ScalarField) -> ScalarField {
    rho.map(|r| 1.0 / r).dealiased()
}

/// Evaluate the tendency of whichever system `state` holds.
pub fn rhs(state: &SystemState) -> Result<Tendency> {
    match state.kind {
        SystemKind::BaroEuler => rhs_baro(state),
        SystemKind::IiEuler => rhs_ii(state),
        SystemKind::CompEuler => rhs_comp(state),
        SystemKind::Mhd => rhs_mhd(state),
    }
}

fn expect(state: &SystemState, kind: SystemKind) -> Result<()> {
    if state.kind != kind {
        return Err(Error::SystemMismatch(format!("expected a {kind} state, got {}", state.kind)));
    }
    Ok(())
}

/// `∂t u = −u·∇u − ρ⁻¹∇P`, `∂t ρ = −∇·(ρu)` with `P = Kρ^γ`.
pub fn rhs_baro(state: &SystemState) -> Result<Tendency> {
    expect(state, SystemKind::BaroEuler)?;
    let pressure = eos_pressure(state)?;
    let rho_inv = inverse_density(&state.rho);
    let du = &(-&advect_vector(&state.u, &state.u)) - &gradient(&pressure).scale_by(&rho_inv);
    let drho = -&divergence(&state.u.scale_by(&state.rho));
    Ok(Tendency { rho: drho, u: du, e: None, b: None, pressure })
}

/// `∂t ρ = −u·∇ρ`, `∂t u = −u·∇u − ρ⁻¹∇P` with `P` from the elliptic solve.
pub fn rhs_ii(state: &SystemState) -> Result<Tendency> {
    expect(state, SystemKind::IiEuler)?;
    let pressure = solve_pressure_ii(&state.rho, &state.u, &state.settings)?.pressure;
    let rho_inv = inverse_density(&state.rho);
    let du = &(-&advect_vector(&state.u, &state.u)) - &gradient(&pressure).scale_by(&rho_inv);
    let drho = -&advect_scalar(&state.u, &state.rho);
    Ok(Tendency { rho: drho, u: du, e: None, b: None, pressure })
}

/// Compressible Euler with internal energy:
/// `∂t e = −u·∇e − ρ⁻¹P ∇·u`, other equations as in the barotropic case.
pub fn rhs_comp(state: &SystemState) -> Result<Tendency> {
    expect(state, SystemKind::CompEuler)?;
    compressible(state, None)
}

/// Ideal MHD: the momentum equation gains `ρ⁻¹(∇×B)×B` and
/// `∂t B = ∇×(u×B)`, evaluated in curl form so `∇·∂t B` vanishes
/// spectrally.
pub fn rhs_mhd(state: &SystemState) -> Result<Tendency> {
    expect(state, SystemKind::Mhd)?;
    let b = state.b.as_ref().expect("validated mhd state carries B");
    compressible(state, Some(b))
}

fn compressible(state: &SystemState, b: Option<&VectorField>) -> Result<Tendency> {
    check_density_floor(&state.rho, state.settings.rho_min)?;
    let e = state.e.as_ref().expect("validated state carries e");
    check_energy(e)?;
    let u = &state.u;
    let pressure = eos_pressure(state)?;
    let rho_inv = inverse_density(&state.rho);
    let div_u = divergence(u);

    let force = match b {
        Some(b) => &curl(b).cross(b) - &gradient(&pressure),
        None => -&gradient(&pressure),
    };
    let du = &(-&advect_vector(u, u)) + &force.scale_by(&rho_inv);
    let drho = -&divergence(&u.scale_by(&state.rho));
    let de = &(-&advect_scalar(u, e)) - &rho_inv.product(&pressure).product(&div_u);
    let db = b.map(|b| curl(&u.cross(b)));
    Ok(Tendency { rho: drho, u: du, e: Some(de), b: db, pressure })
}
