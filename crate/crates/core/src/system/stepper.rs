use crate::error::{Error, Result};
use crate::spectral::leray_project;

use super::rhs::rhs;
use super::state::{SystemKind, SystemState, Tendency};

/// Default CFL number.
pub const DEFAULT_CFL: f64 = 0.25;

/// A state that can be advanced along a rate by an explicit update.
pub trait OdeState: Clone {
    type Rate;

    /// `self + factor · rate`
    fn advanced(&self, factor: f64, rate: &Self::Rate) -> Self;

    /// `(k1 + 2k2 + 2k3 + k4)`
    fn rk4_combination(k1: Self::Rate, k2: &Self::Rate, k3: &Self::Rate, k4: &Self::Rate) -> Self::Rate;
}

impl OdeState for SystemState {
    type Rate = Tendency;

    fn advanced(&self, factor: f64, rate: &Tendency) -> Self {
        SystemState::advanced(self, factor, rate)
    }

    fn rk4_combination(mut k1: Tendency, k2: &Tendency, k3: &Tendency, k4: &Tendency) -> Tendency {
        k1.axpy(2.0, k2);
        k1.axpy(2.0, k3);
        k1.axpy(1.0, k4);
        k1
    }
}

/// Classical four-stage Runge–Kutta step for any [`OdeState`]. `rate` is
/// called with the 1-based stage index.
pub fn rk4<S: OdeState>(
    y: &S,
    dt: f64,
    mut rate: impl FnMut(usize, &S) -> Result<S::Rate>,
) -> Result<S> {
    let k1 = rate(1, y)?;
    let k2 = rate(2, &y.advanced(0.5 * dt, &k1))?;
    let k3 = rate(3, &y.advanced(0.5 * dt, &k2))?;
    let k4 = rate(4, &y.advanced(dt, &k3))?;
    Ok(y.advanced(dt / 6.0, &S::rk4_combination(k1, &k2, &k3, &k4)))
}

/// Advance `state` by one classical fourth-order Runge–Kutta step.
///
/// Floors are rechecked on every stage input; a violation aborts with
/// [`Error::Stage`] carrying the 1-based stage index, or index 5 when the
/// combined end-of-step state is invalid. The inhomogeneous
/// incompressible velocity is re-projected onto divergence-free fields
/// after the step.
pub fn rk4_step(state: &SystemState, dt: f64) -> Result<SystemState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("time step must be positive (got {dt})")));
    }
    let mut next = rk4(state, dt, |index, s| {
        s.validate()
            .and_then(|_| rhs(s))
            .map_err(|source| Error::Stage { stage: index, source: Box::new(source) })
    })?;
    next.t = state.t + dt;
    if next.kind == SystemKind::IiEuler {
        next.u = leray_project(&next.u);
    }
    next.validate()
        .map_err(|source| Error::Stage { stage: 5, source: Box::new(source) })?;
    Ok(next)
}

/// Largest signal speed `max(|u| + c + c_A)` over the grid.
pub fn max_signal_speed(state: &SystemState) -> f64 {
    let speed = state.u.magnitude();
    let rho = state.rho.values();
    let mut max = 0.0f64;
    for (idx, s) in speed.values().iter().enumerate() {
        let r = rho[idx];
        let c = match state.kind {
            SystemKind::IiEuler => 0.0,
            SystemKind::BaroEuler => state.eos.sound_speed_sq(r, 0.0).max(0.0).sqrt(),
            _ => {
                let e = state.e.as_ref().map_or(0.0, |e| e.values()[idx]);
                state.eos.sound_speed_sq(r, e).max(0.0).sqrt()
            }
        };
        let alfven = state.b.as_ref().map_or(0.0, |b| {
            let [bx, by, bz] = b.components();
            let b2 = bx.values()[idx].powi(2) + by.values()[idx].powi(2) + bz.values()[idx].powi(2);
            (b2 / r).sqrt()
        });
        max = max.max(s + c + alfven);
    }
    max
}

/// `dt = cfl·dx / max(|u| + c + c_A)`, or `dt_max` when nothing moves.
pub fn cfl_dt(state: &SystemState, cfl: f64, dt_max: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidParameter(format!("cfl must lie in (0, 1] (got {cfl})")));
    }
    let speed = max_signal_speed(state);
    if speed > 0.0 {
        Ok(cfl * state.grid().dx() / speed)
    } else {
        Ok(dt_max)
    }
}
