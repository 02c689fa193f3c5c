//! Configuration, run orchestration and on-disk formats.

mod config;
mod driver;
mod output;

pub use config::{
    load_config, RunConfig, DEFAULT_BAROTROPIC_GAMMA, DEFAULT_DT_MAX, DEFAULT_IDEAL_GAS_GAMMA, DEFAULT_T_END,
};
pub use driver::{
    budget, check_assessment, initial_state, run, run_meta, run_with, BudgetSummary, CheckKind, RunAbort,
    RunOutcome, Warning, DIV_B_TOLERANCE, ERTEL_TOLERANCE, INTEGRATED_LAW_TOLERANCE,
};
pub use output::{
    format_lambda_report, format_timeseries, lambda_summary, parse_timeseries, read_timeseries, timeseries_header,
    timeseries_row, write_lambda_report, write_timeseries, Snapshot, TimeSeriesWriter, CSV_COLUMNS,
    SNAPSHOT_MAGIC, SNAPSHOT_VERSION, TIMESERIES_MAGIC, TIMESERIES_VERSION,
};
