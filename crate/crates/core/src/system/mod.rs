//! Prognostic state, equations of state, right-hand sides, the
//! variable-density pressure solve and explicit time stepping.

pub mod initial;
mod pressure;
mod rhs;
mod state;
mod stepper;

pub use pressure::{pressure_source, solve_pressure_ii, PressureSolution};
pub use rhs::{advect_scalar, advect_vector, inverse_density, rhs, rhs_baro, rhs_comp, rhs_ii, rhs_mhd};
pub use state::{
    eos_pressure, SolverSettings, SystemKind, SystemState, Tendency, DEFAULT_PRESSURE_MAX_ITER,
    DEFAULT_PRESSURE_TOLERANCE, DEFAULT_RHO_MIN,
};
pub use stepper::{cfl_dt, max_signal_speed, rk4, rk4_step, OdeState, DEFAULT_CFL};
