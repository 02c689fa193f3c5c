use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use helibudget_core::cli_io::{
    budget, lambda_summary, load_config, read_timeseries, run_meta, run_with, write_lambda_report, RunConfig,
    Snapshot, TimeSeriesWriter, Warning,
};
use helibudget_core::diagnostics::lambda_h;
use helibudget_core::oracle::{verify_catalogue, Identity, IdentityId, DEFAULT_MODE_BUDGET, VERIFY_GRID_SIZES};
use helibudget_core::Error;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FAULT: u8 = 3;

/// Helicity, potential-vorticity and energy budgets on a periodic box.
#[derive(Parser, Debug)]
#[command(name = "helibudget", version)]
struct Cli {
    /// Directory for CSV, snapshot and report files.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Exit 1 on any invariant warning, not only bound violations.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate a configuration and write `<name>.csv` and `<name>.snap`.
    Run { config: PathBuf },
    /// Check the identity catalogue on manufactured fields.
    Verify {
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        /// Restrict to one identity (repeatable).
        #[arg(long = "identity")]
        identities: Vec<IdentityId>,
    },
    /// Evaluate the budgets on the initial state only.
    Budget { config: PathBuf },
    /// λ_H post-processing of a time-series CSV; writes `<name>.lambda.txt`.
    Report {
        csv: PathBuf,
        /// Averaging window (default: the whole series).
        #[arg(long)]
        window: Option<f64>,
    },
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::InvalidGrid(_)
        | Error::Malformed { .. }
        | Error::UnknownIdentity(_)
        | Error::SystemMismatch(_) => EXIT_USAGE,
        _ => EXIT_FAULT,
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "run".to_owned(), |s| s.to_string_lossy().into_owned())
}

fn report_warnings(warnings: &[Warning], strict: bool) -> u8 {
    for w in warnings {
        eprintln!("warning: {w}");
    }
    if warnings.iter().any(|w| w.kind.is_violation()) || (strict && !warnings.is_empty()) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn load(path: &Path) -> Result<RunConfig, u8> {
    load_config(path).map_err(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

fn ensure_dir(dir: &Path) -> Result<(), u8> {
    std::fs::create_dir_all(dir).map_err(|e| {
        eprintln!("error: cannot create {}: {e}", dir.display());
        EXIT_FAULT
    })
}

fn cmd_run(cli: &Cli, config_path: &Path) -> Result<u8, u8> {
    let config = load(config_path)?;
    ensure_dir(&cli.output_dir)?;
    let name = stem(config_path);
    let csv = cli.output_dir.join(format!("{name}.csv"));
    let snap = cli.output_dir.join(format!("{name}.snap"));
    let fail = |e: Error| {
        eprintln!("error: {e}");
        exit_code(&e)
    };
    let mut writer = TimeSeriesWriter::create(&csv, &run_meta(&config)).map_err(fail)?;
    let result = run_with(&config, |r| writer.append(r));
    writer.finish().map_err(fail)?;
    match result {
        Ok(out) => {
            Snapshot::from_state(&out.final_state).write(&snap).map_err(fail)?;
            println!(
                "{}: {} steps to t = {}, {} reports -> {}",
                config.system,
                out.steps,
                out.final_state.t,
                out.series.len(),
                csv.display()
            );
            print!("{}", lambda_summary(&out.lambda));
            Ok(report_warnings(&out.warnings, cli.strict))
        }
        Err(abort) => {
            if let Some(state) = &abort.state {
                Snapshot::from_state(state).write(&snap).map_err(fail)?;
            }
            for w in &abort.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("error: {abort}");
            eprintln!("partial series ({} reports) in {}", abort.series.len(), csv.display());
            Err(exit_code(&abort.error))
        }
    }
}

fn cmd_verify(seeds: usize, identities: &[IdentityId]) -> u8 {
    let selected: Vec<IdentityId> = if identities.is_empty() { IdentityId::ALL.to_vec() } else { identities.to_vec() };
    let catalogue: Vec<&dyn Identity> = selected.iter().map(|id| id as &dyn Identity).collect();
    let report = verify_catalogue(seeds, &catalogue, DEFAULT_MODE_BUDGET, &VERIFY_GRID_SIZES);
    print!("{report}");
    let failures = report.failures().count();
    if failures == 0 {
        println!("all {} checks passed", report.rows.len());
        EXIT_OK
    } else {
        println!("{failures} of {} checks failed", report.rows.len());
        EXIT_VIOLATION
    }
}

fn cmd_budget(cli: &Cli, config_path: &Path) -> Result<u8, u8> {
    let config = load(config_path)?;
    let summary = budget(&config).map_err(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })?;
    println!("{summary}");
    Ok(report_warnings(&summary.warnings, cli.strict))
}

fn cmd_report(cli: &Cli, csv: &Path, window: Option<f64>) -> Result<u8, u8> {
    let fail = |e: Error| {
        eprintln!("error: {e}");
        exit_code(&e)
    };
    if let Some(w) = window {
        if !(w.is_finite() && w > 0.0) {
            eprintln!("error: --window must be positive (got {w})");
            return Err(EXIT_USAGE);
        }
    }
    let series = read_timeseries(csv).map_err(fail)?;
    let report = lambda_h(&series, None, window).map_err(|e| match e {
        Error::EmptySeries => {
            eprintln!("error: {}: no data rows", csv.display());
            EXIT_USAGE
        }
        e => fail(e),
    })?;
    ensure_dir(&cli.output_dir)?;
    let out = cli.output_dir.join(format!("{}.lambda.txt", stem(csv)));
    write_lambda_report(&report, &out).map_err(fail)?;
    print!("{}", lambda_summary(&report));
    println!("written to {}", out.display());
    Ok(if report.passed { EXIT_OK } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAULT);
        }
    }
    let code = match &cli.command {
        Command::Run { config } => cmd_run(&cli, config),
        Command::Verify { seeds, identities } => Ok(cmd_verify(*seeds, identities)),
        Command::Budget { config } => cmd_budget(&cli, config),
        Command::Report { csv, window } => cmd_report(&cli, csv, *window),
    };
    ExitCode::from(code.unwrap_or_else(|c| c))
}
