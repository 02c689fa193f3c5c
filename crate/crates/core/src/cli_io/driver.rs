//! Run orchestration: initial state, time loop, per-step checks.

use std::fmt;

use crate::diagnostics::{
    assess, assess_with_tendency, energy_budget_residual, growth_bound_check, lambda_h, pv_budget_residual,
    Assessment, BudgetReport, LambdaReport, RunMeta, TimeSeries, GROWTH_BOUND_ROUNDING,
};
use crate::error::{Error, Result};
use crate::system::initial::build_state;
use crate::system::{cfl_dt, rhs, rk4_step, SystemKind, SystemState};

use super::config::RunConfig;

/// `‖q(t)‖∞ ≤ ‖q₀‖∞(1 + ERTEL_TOLERANCE)` for ii-euler.
pub const ERTEL_TOLERANCE: f64 = 1e-4;
/// `|dHdt_source − dHdt_direct| ≤ INTEGRATED_LAW_TOLERANCE · scale`.
pub const INTEGRATED_LAW_TOLERANCE: f64 = 1e-6;
/// `‖∇·B‖∞ ≤ DIV_B_TOLERANCE · ‖∇B‖∞`.
pub const DIV_B_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    GrowthBound,
    LambdaBound,
    Ertel,
    IntegratedLaw,
    DivergenceFreeField,
}

impl CheckKind {
    /// Bound failures always fail a run; the rest only under `--strict`.
    pub fn is_violation(&self) -> bool {
        matches!(self, CheckKind::GrowthBound | CheckKind::LambdaBound)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::GrowthBound => "growth-bound",
            CheckKind::LambdaBound => "lambda-bound",
            CheckKind::Ertel => "ertel",
            CheckKind::IntegratedLaw => "integrated-law",
            CheckKind::DivergenceFreeField => "div-b",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Warning {
    pub kind: CheckKind,
    pub t: f64,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] t = {:.6}: {}", self.kind, self.t, self.message)
    }
}

/// Checks one assessment against the run-wide initial values.
pub fn check_assessment(a: &Assessment, q0_maxnorm: f64, volume: f64) -> Vec<Warning> {
    let r = &a.report;
    let mut out = Vec::new();
    let warn = |kind, message: String| Warning { kind, t: r.t, message };
    if let Some(check) = growth_bound_check(r, q0_maxnorm, a.h_maxnorm, volume) {
        if !check.passed {
            out.push(warn(
                CheckKind::GrowthBound,
                format!("|dH/dt| = {:.6e} exceeds bound {:.6e}", r.abs_dhdt(), check.bound),
            ));
        }
    }
    if r.system == SystemKind::IiEuler && r.q_maxnorm > q0_maxnorm * (1.0 + ERTEL_TOLERANCE) {
        out.push(warn(CheckKind::Ertel, format!("‖q‖∞ = {:.6e} grew past ‖q₀‖∞ = {:.6e}", r.q_maxnorm, q0_maxnorm)));
    }
    let gap = (r.dhdt_source - r.dhdt_direct).abs();
    let scale = (2.0 * q0_maxnorm * r.e0).max(r.abs_dhdt());
    let allowed = INTEGRATED_LAW_TOLERANCE * scale + GROWTH_BOUND_ROUNDING * a.h_maxnorm * volume;
    if gap > allowed {
        out.push(warn(
            CheckKind::IntegratedLaw,
            format!("source {:.6e} and direct {:.6e} differ by {gap:.3e}", r.dhdt_source, r.dhdt_direct),
        ));
    }
    if let Some(ratio) = a.div_b_ratio {
        if ratio > DIV_B_TOLERANCE {
            out.push(warn(CheckKind::DivergenceFreeField, format!("‖∇·B‖∞/‖∇B‖∞ = {ratio:.3e}")));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub series: TimeSeries,
    pub final_state: SystemState,
    pub steps: usize,
    pub lambda: LambdaReport,
    pub warnings: Vec<Warning>,
}

impl RunOutcome {
    pub fn has_violation(&self) -> bool {
        self.warnings.iter().any(|w| w.kind.is_violation())
    }
}

/// A run that stopped early. `series` holds every report produced before
/// the fault and `state` the last good state, if any.
#[derive(Debug)]
pub struct RunAbort {
    pub series: TimeSeries,
    pub state: Option<SystemState>,
    pub warnings: Vec<Warning>,
    pub error: Error,
}

impl fmt::Display for RunAbort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "run aborted after {} reports: {}", self.series.len(), self.error)
    }
}

impl std::error::Error for RunAbort {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

pub fn run_meta(config: &RunConfig) -> RunMeta {
    RunMeta { system: config.system, n: config.n, length: config.length }
}

pub fn initial_state(config: &RunConfig) -> Result<SystemState> {
    let grid = config.grid()?;
    build_state(config.system, &config.initial, &grid, config.eos, config.settings)
}

fn step_size(config: &RunConfig, state: &SystemState) -> Result<f64> {
    match config.dt {
        Some(dt) => Ok(dt),
        None => cfl_dt(state, config.cfl, config.dt_max),
    }
}

/// Steps from `t = 0` to `t_end`, reporting at `t = 0`, every `stride`
/// steps and at the final step.
pub fn run(config: &RunConfig) -> std::result::Result<RunOutcome, Box<RunAbort>> {
    run_with(config, |_| Ok(()))
}

/// As [`run`], handing each report to `observer` as soon as it exists.
pub fn run_with(
    config: &RunConfig,
    mut observer: impl FnMut(&BudgetReport) -> Result<()>,
) -> std::result::Result<RunOutcome, Box<RunAbort>> {
    let mut series = TimeSeries::new(run_meta(config));
    let mut warnings = Vec::new();
    let abort = |series: TimeSeries, state: Option<SystemState>, warnings: Vec<Warning>, error: Error| {
        Box::new(RunAbort { series, state, warnings, error })
    };
    let mut state = match initial_state(config) {
        Ok(s) => s,
        Err(e) => return Err(abort(series, None, warnings, e)),
    };
    let volume = config.length.powi(3);

    let first = match assess(&state, None) {
        Ok(a) => a,
        Err(e) => return Err(abort(series, Some(state), warnings, e)),
    };
    let q0 = first.report.q_maxnorm;
    warnings.extend(check_assessment(&first, q0, volume));
    if let Err(e) = observer(&first.report) {
        return Err(abort(series, Some(state), warnings, e));
    }
    series.push(first.report);

    let t_end = config.t_end;
    let end_slack = 1e-12 * t_end.max(1.0);
    let mut steps = 0usize;
    while t_end - state.t > end_slack {
        let step = step_size(config, &state).and_then(|dt| {
            let dt = dt.min(t_end - state.t);
            let target = if t_end - (state.t + dt) <= end_slack { t_end } else { state.t + dt };
            let mut next = rk4_step(&state, dt)?;
            next.t = target;
            Ok(next)
        });
        let next = match step {
            Ok(s) => s,
            Err(e) => return Err(abort(series, Some(state), warnings, e)),
        };
        state = next;
        steps += 1;
        let last = t_end - state.t <= end_slack;
        if steps.is_multiple_of(config.stride) || last {
            let assessed = rhs(&state).map(|tendency| assess_with_tendency(&state, &tendency, Some(q0)));
            let a = match assessed {
                Ok(a) => a,
                Err(e) => return Err(abort(series, Some(state), warnings, e)),
            };
            warnings.extend(check_assessment(&a, q0, volume));
            if let Err(e) = observer(&a.report) {
                return Err(abort(series, Some(state), warnings, e));
            }
            series.push(a.report);
        }
    }

    series.fill_series_derivative();
    let lambda = match lambda_h(&series, Some(q0), config.window) {
        Ok(l) => l,
        Err(e) => return Err(abort(series, Some(state), warnings, e)),
    };
    if !lambda.passed {
        warnings.push(Warning {
            kind: CheckKind::LambdaBound,
            t: state.t,
            message: format!("λ_H⁻¹ = {:.6e} exceeds {:.6e}", lambda.lambda_inv, lambda.lambda_inv_bound),
        });
    }
    Ok(RunOutcome { series, final_state: state, steps, lambda, warnings })
}

/// Single-state budget evaluation without time stepping.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetSummary {
    pub assessment: Assessment,
    pub pv_residual_maxnorm: f64,
    pub energy_residual_maxnorm: f64,
    pub warnings: Vec<Warning>,
}

pub fn budget(config: &RunConfig) -> Result<BudgetSummary> {
    let state = initial_state(config)?;
    let tendency = rhs(&state)?;
    let assessment = assess_with_tendency(&state, &tendency, None);
    let warnings = check_assessment(&assessment, assessment.report.q_maxnorm, config.length.powi(3));
    Ok(BudgetSummary {
        pv_residual_maxnorm: pv_budget_residual(&state, &tendency).max_abs(),
        energy_residual_maxnorm: energy_budget_residual(&state, &tendency).max_abs(),
        assessment,
        warnings,
    })
}

impl fmt::Display for BudgetSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.assessment.report;
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), |v| format!("{v:.10e}"));
        writeln!(f, "system            {}", r.system)?;
        writeln!(f, "t                 {:.10e}", r.t)?;
        writeln!(f, "H                 {:.10e}", r.helicity)?;
        writeln!(f, "E0                {:.10e}", r.e0)?;
        writeln!(f, "E                 {}", opt(r.e))?;
        writeln!(f, "E0B               {}", opt(r.e0b))?;
        writeln!(f, "dHdt_source       {:.10e}", r.dhdt_source)?;
        writeln!(f, "dHdt_direct       {:.10e}", r.dhdt_direct)?;
        writeln!(f, "q_maxnorm         {:.10e}", r.q_maxnorm)?;
        writeln!(f, "h_maxnorm         {:.10e}", self.assessment.h_maxnorm)?;
        writeln!(f, "helicity residual {:.10e} (max), {:.10e} (L2)", r.residual_maxnorm, r.residual_l2)?;
        writeln!(f, "pv residual       {:.10e}", self.pv_residual_maxnorm)?;
        writeln!(f, "energy residual   {:.10e}", self.energy_residual_maxnorm)?;
        writeln!(f, "bound_rhs         {}", opt(r.bound_rhs))?;
        writeln!(f, "divu_l1           {:.10e}", r.divu_l1)?;
        writeln!(f, "div B ratio       {}", opt(self.assessment.div_b_ratio))?;
        write!(f, "mass              {:.10e}", r.mass)
    }
}
