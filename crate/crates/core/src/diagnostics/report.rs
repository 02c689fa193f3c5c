use crate::error::Result;
use crate::spectral::{divergence, gradient};
use crate::system::{rhs, SystemKind, SystemState, Tendency};

use super::bound::growth_bound;
use super::budget::{budget_residual, integrated_law};
use super::densities::{energies, helicity_density, potential_vorticity};

/// Per-output-step diagnostics record.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetReport {
    pub system: SystemKind,
    pub t: f64,
    /// System helicity: `H`, `H_ρ` or `H_c`.
    pub helicity: f64,
    pub e0: f64,
    pub e: Option<f64>,
    pub e0b: Option<f64>,
    pub dhdt_source: f64,
    pub dhdt_direct: f64,
    /// Centered time difference of `helicity`, filled by [`TimeSeries::fill_series_derivative`].
    pub dhdt_series: Option<f64>,
    pub q_maxnorm: f64,
    pub residual_maxnorm: f64,
    pub residual_l2: f64,
    /// Growth bound for ii-euler and comp-euler.
    pub bound_rhs: Option<f64>,
    pub divu_l1: f64,
    pub mass: f64,
}

impl BudgetReport {
    /// `max(|dHdt_source|, |dHdt_direct|)`
    pub fn abs_dhdt(&self) -> f64 {
        self.dhdt_source.abs().max(self.dhdt_direct.abs())
    }
}

/// A report together with the state quantities that the checks need but
/// the CSV does not carry.
#[derive(Clone, Debug, PartialEq)]
pub struct Assessment {
    pub report: BudgetReport,
    /// `‖h‖∞` of the system helicity density.
    pub h_maxnorm: f64,
    /// `‖∇·B‖∞ / ‖∇B‖∞` (mhd only).
    pub div_b_ratio: Option<f64>,
}

/// Evaluates the right-hand side and assembles the report. `q0_maxnorm`
/// is the initial `‖q‖∞` entering the ii-euler bound; `None` uses the
/// current value.
pub fn assess(state: &SystemState, q0_maxnorm: Option<f64>) -> Result<Assessment> {
    state.validate()?;
    let tendency = rhs(state)?;
    Ok(assess_with_tendency(state, &tendency, q0_maxnorm))
}

pub fn assess_with_tendency(state: &SystemState, tendency: &Tendency, q0_maxnorm: Option<f64>) -> Assessment {
    let h = helicity_density(state);
    let q_maxnorm = potential_vorticity(state).max_abs();
    let energy = energies(state);
    let residual = budget_residual(state, tendency);
    let law = integrated_law(state, tendency);
    let divu_l1 = divergence(&state.u).l1_norm();
    let h_maxnorm = h.max_abs();
    let bound_rhs = growth_bound(state.kind, q0_maxnorm.unwrap_or(q_maxnorm), q_maxnorm, energy.kinetic, h_maxnorm, divu_l1);
    let report = BudgetReport {
        system: state.kind,
        t: state.t,
        helicity: h.integral(),
        e0: energy.kinetic,
        e: energy.total,
        e0b: energy.magnetic_total,
        dhdt_source: law.source,
        dhdt_direct: law.direct,
        dhdt_series: None,
        q_maxnorm,
        residual_maxnorm: residual.max_abs(),
        residual_l2: residual.l2_norm(),
        bound_rhs,
        divu_l1,
        mass: state.rho.integral(),
    };
    let div_b_ratio = state.b.as_ref().map(|b| {
        let grad = b.components().iter().map(|c| gradient(c).max_abs()).fold(0.0, f64::max);
        let div = divergence(b).max_abs();
        if grad > 0.0 { div / grad } else { div }
    });
    Assessment { report, h_maxnorm, div_b_ratio }
}

/// Run metadata carried alongside the reports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunMeta {
    pub system: SystemKind,
    pub n: usize,
    pub length: f64,
}

/// Ordered reports of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub meta: RunMeta,
    pub reports: Vec<BudgetReport>,
}

impl TimeSeries {
    pub fn new(meta: RunMeta) -> Self {
        Self { meta, reports: Vec::new() }
    }

    pub fn push(&mut self, report: BudgetReport) {
        self.reports.push(report);
    }

    pub fn len(&self) -> usize {
        self.reports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reports.is_empty()
    }

    /// Fills `dhdt_series` by centered differences of `H`, one-sided at the
    /// ends. Left empty for fewer than two reports.
    pub fn fill_series_derivative(&mut self) {
        let n = self.reports.len();
        if n < 2 {
            return;
        }
        let t: Vec<f64> = self.reports.iter().map(|r| r.t).collect();
        let h: Vec<f64> = self.reports.iter().map(|r| r.helicity).collect();
        for i in 0..n {
            let (a, b) = match i {
                0 => (0, 1),
                i if i == n - 1 => (n - 2, n - 1),
                i => (i - 1, i + 1),
            };
            let dt = t[b] - t[a];
            self.reports[i].dhdt_series = (dt > 0.0).then(|| (h[b] - h[a]) / dt);
        }
    }
}
