//! Helicity densities, potential vorticities, energies, budget residuals,
//! integrated laws, growth bounds and the λ_H length scale.

mod bound;
mod budget;
mod densities;
mod report;

pub use bound::{growth_bound, growth_bound_check, lambda_h, BoundCheck, LambdaReport, GROWTH_BOUND_ROUNDING, GROWTH_BOUND_TOLERANCE};
pub use budget::{
    budget_residual, energy_budget_residual, flux_and_source, helicity_source_integral, helicity_tendency,
    integrated_law, perfect_divergence_residual, pv_budget_residual, FluxSource, IntegratedLaw,
};
pub use densities::{
    energies, energy_density, enthalpy_potential, helicity, helicity_density, kinetic_energy_density, momentum,
    potential_vorticity, potential_vorticity_maxnorm, Energies,
};
pub use report::{assess, assess_with_tendency, Assessment, BudgetReport, RunMeta, TimeSeries};
