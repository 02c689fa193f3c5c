use crate::error::{Error, Result};
use crate::system::SystemKind;

use super::report::{BudgetReport, TimeSeries};

/// Relative slack of the growth-bound and λ_H checks.
pub const GROWTH_BOUND_TOLERANCE: f64 = 1e-8;

/// Rounding allowance on `|dH/dt|`, relative to `‖h‖∞·L³`, so a
/// degenerate zero bound still passes a rounding-level rate.
pub const GROWTH_BOUND_ROUNDING: f64 = 1e-13;

/// Right side of the helicity growth bound:
///
/// * ii-euler: `2‖q₀‖∞E₀`
/// * comp-euler: `2‖q‖∞E₀ + 2‖h_ρ‖∞∫|∇·u|`
///
/// `None` for systems without a bound.
pub fn growth_bound(
    kind: SystemKind,
    q0_maxnorm: f64,
    q_maxnorm: f64,
    e0: f64,
    h_maxnorm: f64,
    divu_l1: f64,
) -> Option<f64> {
    match kind {
        SystemKind::IiEuler => Some(2.0 * q0_maxnorm * e0),
        SystemKind::CompEuler => Some(2.0 * q_maxnorm * e0 + 2.0 * h_maxnorm * divu_l1),
        SystemKind::BaroEuler | SystemKind::Mhd => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub bound: f64,
    /// `bound − |dH/dt|`
    pub margin: f64,
    pub passed: bool,
}

/// Checks `|dH/dt| ≤ bound` with `|dH/dt|` the larger of the source and
/// direct evaluations. For comp-euler the bound uses the report's own
/// `‖q‖∞`; `q0_maxnorm` enters for ii-euler only. `volume` is `L³`.
pub fn growth_bound_check(report: &BudgetReport, q0_maxnorm: f64, h_maxnorm: f64, volume: f64) -> Option<BoundCheck> {
    let bound = growth_bound(report.system, q0_maxnorm, report.q_maxnorm, report.e0, h_maxnorm, report.divu_l1)?;
    let margin = bound - report.abs_dhdt();
    let slack = GROWTH_BOUND_TOLERANCE * bound + GROWTH_BOUND_ROUNDING * h_maxnorm * volume;
    let passed = margin >= -slack;
    Some(BoundCheck { bound, margin, passed })
}

/// λ_H post-processing of a time series.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaReport {
    pub system: SystemKind,
    /// Averaging window `T`.
    pub window: f64,
    pub samples: usize,
    pub mean_abs_dhdt: f64,
    /// `ϱ₀ = L⁻³∫ρ` at `t = 0`.
    pub varrho0: f64,
    /// `E₀` at `t = 0`.
    pub e0: f64,
    pub q0_maxnorm: f64,
    pub lambda_inv: f64,
    pub lambda_inv_bound: f64,
    /// Only ii-euler is held to the bound.
    pub bound_checked: bool,
    pub passed: bool,
}

impl LambdaReport {
    pub fn ratio(&self) -> f64 {
        if self.lambda_inv_bound > 0.0 {
            self.lambda_inv / self.lambda_inv_bound
        } else if self.lambda_inv == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// `λ_H⁻¹ = (⟨|dH/dt|⟩/(ϱ₀^{1/2}E₀^{3/2}))^{2/7}` against
/// `(4/(E₀ϱ₀))^{1/7}‖q₀‖∞^{2/7}`.
///
/// `⟨·⟩` is the trapezoid average of `|dHdt_source|` over reports with
/// `t ≤ t₀ + window` (all reports when `window` is `None`). `E₀`, `ϱ₀`
/// are read from the first report and `q0_maxnorm` defaults to its `‖q‖∞`.
pub fn lambda_h(series: &TimeSeries, q0_maxnorm: Option<f64>, window: Option<f64>) -> Result<LambdaReport> {
    let first = series.reports.first().ok_or(Error::EmptySeries)?;
    let t0 = first.t;
    let end = window.map_or(f64::INFINITY, |w| t0 + w);
    let used: Vec<&BudgetReport> = series.reports.iter().take_while(|r| r.t <= end).collect();
    let span = used.last().map_or(0.0, |r| r.t - t0);
    let mean_abs_dhdt = if used.len() < 2 || span <= 0.0 {
        first.dhdt_source.abs()
    } else {
        let area: f64 =
            used.windows(2).map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].dhdt_source.abs() + w[1].dhdt_source.abs())).sum();
        area / span
    };
    let volume = series.meta.length.powi(3);
    let varrho0 = first.mass / volume;
    let e0 = first.e0;
    let q0 = q0_maxnorm.unwrap_or(first.q_maxnorm);
    let lambda_inv = if mean_abs_dhdt == 0.0 {
        0.0
    } else {
        (mean_abs_dhdt / (varrho0.sqrt() * e0.powf(1.5))).powf(2.0 / 7.0)
    };
    let lambda_inv_bound = (4.0 / (e0 * varrho0)).powf(1.0 / 7.0) * q0.powf(2.0 / 7.0);
    let bound_checked = series.meta.system == SystemKind::IiEuler;
    let passed = !bound_checked || lambda_inv <= lambda_inv_bound * (1.0 + GROWTH_BOUND_TOLERANCE);
    Ok(LambdaReport {
        system: series.meta.system,
        window: span,
        samples: used.len(),
        mean_abs_dhdt,
        varrho0,
        e0,
        q0_maxnorm: q0,
        lambda_inv,
        lambda_inv_bound,
        bound_checked,
        passed,
    })
}
