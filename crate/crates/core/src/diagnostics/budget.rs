//! Local budget relations `∂t h + ∇·J = σ`, their integrated forms, and
//! the potential-vorticity and energy conservation laws.
//!
//! Time derivatives of diagnostic densities are composed by the product
//! rule from an exact tendency, so residuals carry spatial truncation
//! error only.

use crate::spectral::{curl, divergence, gradient, ScalarField, VectorField};
use crate::system::{SystemKind, SystemState, Tendency};

use super::densities::{enthalpy_potential, helicity_density, magnetic, momentum, potential_vorticity};

/// Flux and source of the helicity budget.
#[derive(Clone, Debug)]
pub struct FluxSource {
    pub flux: VectorField,
    pub source: ScalarField,
}

/// `∂t(ρu) = ρ ∂t u + u ∂t ρ`
fn momentum_tendency(state: &SystemState, tendency: &Tendency) -> VectorField {
    &tendency.u.scale_by(&state.rho) + &state.u.scale_by(&tendency.rho)
}

/// Per-system flux `J` and source `σ`:
///
/// * baro-euler: `J_π = h u + ω(Π − ½|u|²)`, `σ = 0`
/// * ii-euler: `J_ρ = h_ρ u + P ∇×(ρu) − ½ωρ²|u|²`, `σ_ρ = −qρ|u|²`
/// * comp-euler: `J_ρ` as above, `σ̃_ρ = σ_ρ − 2h_ρ ∇·u`
/// * mhd: `J_c = h_c u + B(P − ½ρ|u|²)`, `σ_c = −½q_c|u|² − h_c ∇·u`
///
/// The pressure is taken from `tendency`.
pub fn flux_and_source(state: &SystemState, tendency: &Tendency) -> FluxSource {
    let u = &state.u;
    let h = helicity_density(state);
    let u2 = u.dot(u);
    let advective = u.scale_by(&h);
    let grid = state.grid();
    match state.kind {
        SystemKind::BaroEuler => {
            let omega = curl(u);
            let pi = enthalpy_potential(state).expect("baro-euler has a polytropic closure");
            let flux = &advective + &omega.scale_by(&(&pi - &u2.scaled(0.5)));
            FluxSource { flux, source: ScalarField::zeros(grid) }
        }
        SystemKind::IiEuler | SystemKind::CompEuler => {
            let omega = curl(u);
            let m = momentum(state);
            let rho2_u2 = state.rho.product(&state.rho).product(&u2);
            let flux = &(&advective + &curl(&m).scale_by(&tendency.pressure)) - &omega.scale_by(&rho2_u2.scaled(0.5));
            let q = potential_vorticity(state);
            let mut source = -&q.product(&state.rho.product(&u2));
            if state.kind == SystemKind::CompEuler {
                source.axpy(-2.0, &h.product(&divergence(u)));
            }
            FluxSource { flux, source }
        }
        SystemKind::Mhd => {
            let b = magnetic(state);
            let weight = &tendency.pressure - &state.rho.product(&u2).scaled(0.5);
            let flux = &advective + &b.scale_by(&weight);
            let qc = potential_vorticity(state);
            let source = &(-&qc.product(&u2).scaled(0.5)) - &h.product(&divergence(u));
            FluxSource { flux, source }
        }
    }
}

/// `∂t h` composed from the tendency.
pub fn helicity_tendency(state: &SystemState, tendency: &Tendency) -> ScalarField {
    match state.kind {
        SystemKind::BaroEuler => {
            let omega = curl(&state.u);
            &tendency.u.dot(&omega) + &state.u.dot(&curl(&tendency.u))
        }
        SystemKind::IiEuler | SystemKind::CompEuler => {
            let m = momentum(state);
            let dm = momentum_tendency(state, tendency);
            &dm.dot(&curl(&m)) + &m.dot(&curl(&dm))
        }
        SystemKind::Mhd => {
            let m = momentum(state);
            let dm = momentum_tendency(state, tendency);
            let db = tendency.b.as_ref().expect("mhd tendency carries ∂t B");
            &dm.dot(magnetic(state)) + &m.dot(db)
        }
    }
}

/// `r = ∂t h + ∇·J − σ`
pub fn budget_residual(state: &SystemState, tendency: &Tendency) -> ScalarField {
    let FluxSource { flux, source } = flux_and_source(state, tendency);
    let dh = helicity_tendency(state, tendency);
    &(&dh + &divergence(&flux)) - &source
}

/// Both sides of the integrated helicity law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratedLaw {
    /// Right-hand side integral, free of any pressure evaluation.
    pub source: f64,
    /// `∫ ∂t h dV` from the exact tendency.
    pub direct: f64,
}

/// Pressure-free right side of `dH/dt`:
///
/// * baro-euler: `0`
/// * ii-euler: `−2∫qℰ₀`
/// * comp-euler: `−2∫qℰ₀ − 2∫h_ρ ∇·u`
/// * mhd: `−½∫q_c|u|² − ∫h_c ∇·u`
///
/// Takes the state alone, so neither the equation of state nor the
/// pressure solve can enter.
pub fn helicity_source_integral(state: &SystemState) -> f64 {
    let u = &state.u;
    let u2 = u.norm_sq_pointwise();
    let cell = state.grid().cell_volume();
    match state.kind {
        SystemKind::BaroEuler => 0.0,
        SystemKind::IiEuler | SystemKind::CompEuler => {
            let q = potential_vorticity(state);
            let rho = state.rho.values();
            // −2 q ℰ₀ = −q ρ |u|²
            let pv: f64 = q.values().iter().zip(rho).zip(u2.values()).map(|((q, r), v)| -q * r * v).sum();
            let mut total = pv * cell;
            if state.kind == SystemKind::CompEuler {
                let h = helicity_density(state);
                let div = divergence(u);
                total -= 2.0 * h.mul_pointwise(&div).integral();
            }
            total
        }
        SystemKind::Mhd => {
            let qc = potential_vorticity(state);
            let h = helicity_density(state);
            let div = divergence(u);
            -0.5 * qc.mul_pointwise(&u2).integral() - h.mul_pointwise(&div).integral()
        }
    }
}

pub fn integrated_law(state: &SystemState, tendency: &Tendency) -> IntegratedLaw {
    IntegratedLaw {
        source: helicity_source_integral(state),
        direct: helicity_tendency(state, tendency).integral(),
    }
}

/// Residual of the potential-vorticity law of the system:
///
/// * ii-euler: `Dq/Dt`
/// * baro-euler, comp-euler: `∂t q + ∇·(qu) + ∇·(ωρ ∇·u)`
/// * mhd: `∂t q_c + ∇·(u q_c) + ∇·(ρ (∇·u) B)`
pub fn pv_budget_residual(state: &SystemState, tendency: &Tendency) -> ScalarField {
    let u = &state.u;
    let grad_rho = gradient(&state.rho);
    let grad_drho = gradient(&tendency.rho);
    let q = potential_vorticity(state);
    match state.kind {
        SystemKind::IiEuler => {
            let omega = curl(u);
            let dq = &curl(&tendency.u).dot(&grad_rho) + &omega.dot(&grad_drho);
            &dq + &u.dot(&gradient(&q))
        }
        SystemKind::BaroEuler | SystemKind::CompEuler => {
            let omega = curl(u);
            let dq = &curl(&tendency.u).dot(&grad_rho) + &omega.dot(&grad_drho);
            let compression = omega.scale_by(&state.rho.product(&divergence(u)));
            &(&dq + &divergence(&u.scale_by(&q))) + &divergence(&compression)
        }
        SystemKind::Mhd => {
            let b = magnetic(state);
            let db = tendency.b.as_ref().expect("mhd tendency carries ∂t B");
            let dq = &db.dot(&grad_rho) + &b.dot(&grad_drho);
            let compression = b.scale_by(&state.rho.product(&divergence(u)));
            &(&dq + &divergence(&u.scale_by(&q))) + &divergence(&compression)
        }
    }
}

/// Residual of `∂t ℰ + ∇·{(ℰ + P)u + F_B} = 0`, with `F_B = ½|B|²u − (u·B)B`
/// for mhd and zero otherwise.
pub fn energy_budget_residual(state: &SystemState, tendency: &Tendency) -> ScalarField {
    let u = &state.u;
    let rho = &state.rho;
    let u2 = u.dot(u);
    let p = &tendency.pressure;
    // ∂t(½ρ|u|²) = ½ ∂tρ |u|² + ρ u·∂t u
    let d_kinetic = &tendency.rho.product(&u2).scaled(0.5) + &rho.product(&u.dot(&tendency.u));
    let density = super::densities::energy_density(state);
    let (d_energy, extra_flux) = match state.kind {
        SystemKind::IiEuler => (d_kinetic, None),
        SystemKind::BaroEuler => {
            // d(Kρ^γ/(γ−1))/dρ = Π(ρ)
            let pi = enthalpy_potential(state).expect("polytropic closure");
            (&d_kinetic + &pi.product(&tendency.rho), None)
        }
        SystemKind::CompEuler | SystemKind::Mhd => {
            let e = state.e.as_ref().expect("state carries e");
            let de = tendency.e.as_ref().expect("tendency carries ∂t e");
            let d_internal = &tendency.rho.product(e) + &rho.product(de);
            let d_fluid = &d_kinetic + &d_internal;
            match &state.b {
                Some(b) => {
                    let db = tendency.b.as_ref().expect("mhd tendency carries ∂t B");
                    let poynting = &u.scale_by(&b.dot(b).scaled(0.5)) - &b.scale_by(&u.dot(b));
                    (&d_fluid + &b.dot(db), Some(poynting))
                }
                None => (d_fluid, None),
            }
        }
    };
    let mut flux = u.scale_by(&(&density + p));
    if let Some(extra) = extra_flux {
        flux += &extra;
    }
    &d_energy + &divergence(&flux)
}

/// `ρω·∇P − u·(∇ρ×∇P) − ∇·{P ∇×(ρu)}`, which vanishes identically.
pub fn perfect_divergence_residual(rho: &ScalarField, u: &VectorField, p: &ScalarField) -> ScalarField {
    let omega = curl(u);
    let grad_p = gradient(p);
    let grad_rho = gradient(rho);
    let lhs = &omega.scale_by(rho).dot(&grad_p) - &u.dot(&grad_rho.cross(&grad_p));
    let m = u.scale_by(rho);
    &lhs - &divergence(&curl(&m).scale_by(p))
}
