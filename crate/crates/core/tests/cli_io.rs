use std::f64::consts::PI;
use std::path::Path;

use helibudget_core::cli_io::{
    format_lambda_report, format_timeseries, parse_timeseries, read_timeseries, run, write_timeseries, CheckKind,
    RunConfig, Snapshot, TimeSeriesWriter, CSV_COLUMNS,
};
use helibudget_core::diagnostics::{lambda_h, BudgetReport, RunMeta, TimeSeries};
use helibudget_core::system::initial::{Axis, InitialCondition};
use helibudget_core::system::{initial::build_state, SolverSettings};
use helibudget_core::{load_config, Eos, Error, Grid, SystemKind};

fn config(text: &str) -> helibudget_core::Result<RunConfig> {
    RunConfig::from_toml_str(text)
}

fn config_err(text: &str) -> String {
    match config(text) {
        Err(Error::Config(m)) => m,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn minimal_config_fills_defaults() {
    let c = config("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n").unwrap();
    assert_eq!(c.system, SystemKind::IiEuler);
    assert_eq!(c.n, 32);
    assert_eq!(c.length, 2.0 * PI);
    assert_eq!(c.cfl, 0.25);
    assert_eq!(c.t_end, 0.5);
    assert_eq!(c.stride, 1);
    assert_eq!(c.dt, None);
    assert_eq!(c.window, None);
    assert_eq!(c.settings, SolverSettings::default());
    assert_eq!(c.initial, InitialCondition::canonical(SystemKind::IiEuler));
    assert_eq!(c, RunConfig::new(SystemKind::IiEuler, 32));
}

#[test]
fn gamma_below_one_is_rejected() {
    let m = config_err("[system]\nkind = \"comp-euler\"\ngamma = 0.9\n[grid]\nn = 32\n");
    assert!(m.contains("γ > 1 required"), "{m}");
    assert!(m.contains("system.gamma"), "{m}");
}

#[test]
fn unknown_keys_are_rejected() {
    let m = config_err("[system]\nkind = \"ii-euler\"\nviscosity = 0.01\n[grid]\nn = 32\n");
    assert!(m.contains("viscosity"), "{m}");
    let m = config_err("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[physics]\nviscosity = 0.01\n");
    assert!(m.contains("physics"), "{m}");
}

#[test]
fn parse_errors_carry_line_numbers() {
    let m = config_err("[system]\nkind = \"ii-euler\"\n[grid]\nn = = 32\n");
    assert!(m.contains("line 4"), "{m}");
}

#[test]
fn range_errors_name_the_key() {
    let cases = [
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 33\n", "grid.n"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 4\n", "grid.n"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\nlength = -1.0\n", "grid.length"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[time]\ncfl = 1.5\n", "time.cfl"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[time]\nstride = 0\n", "time.stride"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[time]\nt_end = -1.0\n", "time.t_end"),
        ("[system]\nkind = \"ii-euler\"\nk = 2.0\n[grid]\nn = 32\n", "system.k"),
        ("[system]\nkind = \"baro-euler\"\nk = 0.0\n[grid]\nn = 32\n", "system.k"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[initial]\ndensity_amplitude = 1.2\n", "initial.density_amplitude"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[initial]\nname = \"random\"\nmax_mode = 11\n", "initial.max_mode"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[initial]\nname = \"abc\"\nseed = 3\n", "initial.seed"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[initial]\nname = \"acoustic\"\n", "initial.name"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[initial]\nname = \"vortex\"\n", "initial.name"),
        ("[system]\nkind = \"stokes\"\n[grid]\nn = 32\n", "system.kind"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[tolerances]\npressure_max_iter = 0\n", "tolerances.pressure_max_iter"),
        ("[system]\nkind = \"ii-euler\"\n[grid]\nn = 32\n[diagnostics]\nwindow = 0.0\n", "diagnostics.window"),
    ];
    for (text, key) in cases {
        let m = config_err(text);
        assert!(m.starts_with(key), "{key}: {m}");
    }
}

#[test]
fn initial_keys_override_the_canonical_recipe() {
    let c = config(
        "[system]\nkind = \"baro-euler\"\nk = 1.0\ngamma = 2.0\n[grid]\nn = 32\n\
         [initial]\ndensity_amplitude = 0.2\n[time]\nt_end = 0.25\nstride = 4\ndt = 0.01\n",
    )
    .unwrap();
    assert_eq!(c.eos, Eos::Polytropic { gamma: 2.0, k: 1.0 });
    assert_eq!(c.initial, InitialCondition::abc(0.2, Axis::X));
    assert_eq!((c.t_end, c.stride, c.dt), (0.25, 4, Some(0.01)));

    let c = config(
        "[system]\nkind = \"mhd\"\n[grid]\nn = 16\n[initial]\nname = \"random\"\nseed = 7\nmax_mode = 3\n",
    )
    .unwrap();
    assert_eq!(c.eos, Eos::IdealGas { gamma: 1.4 });
    assert!(matches!(c.initial, InitialCondition::Random { seed: 7, max_mode: 3, .. }));
}

#[test]
fn load_config_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "[system]\nkind = \"mhd\"\n[grid]\nn = 16\n").unwrap();
    let c = load_config(&path).unwrap();
    assert_eq!(c.system, SystemKind::Mhd);
    assert!(matches!(load_config(dir.path().join("missing.toml")), Err(Error::Config(_))));
}

#[test]
fn zero_end_time_gives_one_report() {
    let mut c = RunConfig::new(SystemKind::IiEuler, 16);
    c.t_end = 0.0;
    let out = run(&c).unwrap();
    assert_eq!(out.steps, 0);
    assert_eq!(out.series.len(), 1);
    assert_eq!(out.series.reports[0].t, 0.0);
    assert_eq!(out.final_state.t, 0.0);
}

fn zero_report(system: SystemKind) -> BudgetReport {
    BudgetReport {
        system,
        t: 0.0,
        helicity: 0.0,
        e0: 0.0,
        e: None,
        e0b: None,
        dhdt_source: 0.0,
        dhdt_direct: 0.0,
        dhdt_series: None,
        q_maxnorm: 0.0,
        residual_maxnorm: 0.0,
        residual_l2: 0.0,
        bound_rhs: None,
        divu_l1: 0.0,
        mass: 0.0,
    }
}

#[test]
fn single_zero_report_writes_one_row() {
    let meta = RunMeta { system: SystemKind::BaroEuler, n: 16, length: 2.0 * PI };
    let mut series = TimeSeries::new(meta);
    series.push(zero_report(SystemKind::BaroEuler));
    let text = format_timeseries(&series);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("# helibudget-timeseries v1 system=baro-euler n=16 L="));
    assert_eq!(lines[1], CSV_COLUMNS.join(","));
    assert_eq!(lines[1], "t,H,E0,E,E0B,dHdt_source,dHdt_direct,q_maxnorm,residual_maxnorm,residual_l2,bound_rhs,divu_l1,mass");
    let z = "0.0000000000000000e0";
    assert_eq!(lines[2], [z, z, z, "", "", z, z, z, z, z, "", z, z].join(","));
}

#[test]
fn numbers_have_seventeen_significant_digits() {
    let mut r = zero_report(SystemKind::IiEuler);
    r.helicity = 0.1;
    let row = helibudget_core::cli_io::timeseries_row(&r);
    let cell = row.split(',').nth(1).unwrap();
    assert_eq!(cell, "1.0000000000000001e-1");
    let mantissa = cell.split('e').next().unwrap().replace('.', "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn csv_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let mut c = RunConfig::new(SystemKind::CompEuler, 16);
    c.t_end = 0.05;
    let out = run(&c).unwrap();
    write_timeseries(&out.series, &path).unwrap();
    let back = read_timeseries(&path).unwrap();
    assert_eq!(back.meta, out.series.meta);
    let mut expected = out.series.clone();
    for r in &mut expected.reports {
        r.dhdt_series = None;
    }
    assert_eq!(back, expected);
    assert!(back.reports.iter().all(|r| r.e.is_some() && r.e0b.is_none() && r.bound_rhs.is_some()));
}

#[test]
fn streamed_and_batch_csv_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream.csv");
    let mut c = RunConfig::new(SystemKind::Mhd, 16);
    c.t_end = 0.02;
    let meta = helibudget_core::cli_io::run_meta(&c);
    let mut writer = TimeSeriesWriter::create(&path, &meta).unwrap();
    let out = helibudget_core::cli_io::run_with(&c, |r| writer.append(r)).unwrap();
    writer.finish().unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), format_timeseries(&out.series));
}

#[test]
fn hundred_steps_give_hundred_and_one_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let mut c = RunConfig::new(SystemKind::BaroEuler, 16);
    c.dt = Some(0.001);
    c.t_end = 0.1;
    let out = run(&c).unwrap();
    assert_eq!(out.steps, 100);
    write_timeseries(&out.series, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2 + 101);
    assert_eq!(out.series.reports.last().unwrap().t, 0.1);

    c.stride = 30;
    let out = run(&c).unwrap();
    let times: Vec<f64> = out.series.reports.iter().map(|r| r.t).collect();
    assert_eq!(times.len(), 5);
    assert_eq!(times[4], 0.1);
}

#[test]
fn malformed_csv_reports_the_line() {
    let p = Path::new("bad.csv");
    let good = "# helibudget-timeseries v1 system=ii-euler n=16 L=6.2831853071795862e0\n\
                t,H,E0,E,E0B,dHdt_source,dHdt_direct,q_maxnorm,residual_maxnorm,residual_l2,bound_rhs,divu_l1,mass\n";
    assert!(parse_timeseries(good, p).unwrap().is_empty());
    let cases = [
        (String::new(), "line 1"),
        ("t,H\n".to_owned(), "line 1"),
        ("# helibudget-timeseries v2 system=ii-euler n=16 L=1\n".to_owned(), "line 1"),
        (good.replace("bound_rhs,", ""), "line 2"),
        (format!("{good}0,1,2,,,3,4,5,6,7,,8,9\n0,1,2,,,x,4,5,6,7,,8,9\n"), "line 4"),
        (format!("{good}0,1,2\n"), "line 3"),
        (format!("{good}0,,2,,,3,4,5,6,7,,8,9\n"), "line 3"),
    ];
    for (text, line) in cases {
        match parse_timeseries(&text, p) {
            Err(Error::Malformed { message, .. }) => assert!(message.starts_with(line), "{message}"),
            other => panic!("expected malformed, got {other:?}"),
        }
    }
}

#[test]
fn snapshot_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::periodic(16).unwrap();
    for kind in SystemKind::ALL {
        let ic = InitialCondition::Random {
            seed: 3,
            max_mode: 4,
            velocity_amplitude: 1.0,
            density_amplitude: 0.3,
            field_amplitude: 1.0,
            pressure: 1.0,
        };
        let eos = match kind {
            SystemKind::BaroEuler => Eos::Polytropic { gamma: 5.0 / 3.0, k: 0.7 },
            _ => Eos::IdealGas { gamma: 1.4 },
        };
        let mut state = build_state(kind, &ic, &grid, eos, SolverSettings::default()).unwrap();
        state.t = 0.1 + 0.2;
        let snap = Snapshot::from_state(&state);
        assert_eq!(snap.payload.len(), grid.len() * snap.fields.len());
        let path = dir.path().join(format!("{kind}.snap"));
        snap.write(&path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let header = snap.header();
        assert_eq!(bytes.len(), header.len() + 8 * snap.payload.len());
        assert!(header.ends_with(&format!("count = {}\nEND\n", snap.payload.len())));
        let back = Snapshot::read(&path).unwrap();
        assert_eq!(back, snap);
        let restored = back.to_state(SolverSettings::default()).unwrap();
        assert_eq!(restored, state);
        let bits = |s: &Snapshot| s.payload.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&snap));
        assert_eq!(back.t.to_bits(), state.t.to_bits());
    }
}

#[test]
fn truncated_snapshot_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::periodic(8).unwrap();
    let state = build_state(
        SystemKind::IiEuler,
        &InitialCondition::canonical(SystemKind::IiEuler),
        &grid,
        Eos::IdealGas { gamma: 1.4 },
        SolverSettings::default(),
    )
    .unwrap();
    let mut bytes = Snapshot::from_state(&state).to_bytes();
    bytes.truncate(bytes.len() - 3);
    let path = dir.path().join("cut.snap");
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(Snapshot::read(&path), Err(Error::Malformed { .. })));
    std::fs::write(&path, b"helibudget-snapshot v1\nsystem = mhd\n").unwrap();
    assert!(matches!(Snapshot::read(&path), Err(Error::Malformed { .. })));
}

#[test]
fn lambda_report_is_key_value() {
    let meta = RunMeta { system: SystemKind::IiEuler, n: 16, length: 2.0 * PI };
    let mut series = TimeSeries::new(meta);
    for i in 0..3 {
        let mut r = zero_report(SystemKind::IiEuler);
        r.t = i as f64 * 0.1;
        r.e0 = 1.0;
        r.q_maxnorm = 1.0;
        r.mass = meta.length.powi(3);
        series.push(r);
    }
    let report = lambda_h(&series, None, None).unwrap();
    assert_eq!(report.lambda_inv, 0.0);
    assert!(report.passed);
    let text = format_lambda_report(&report);
    for line in text.lines() {
        let (k, v) = line.split_once(" = ").unwrap();
        assert!(!k.is_empty() && !v.is_empty());
    }
    assert!(text.contains("verdict = pass"));
    assert!(text.contains("samples = 3"));
}

#[test]
fn reference_ii_run_passes_every_check() {
    let mut c = RunConfig::new(SystemKind::IiEuler, 16);
    c.t_end = 0.1;
    let out = run(&c).unwrap();
    assert!(out.warnings.is_empty(), "{:?}", out.warnings);
    assert!(out.lambda.bound_checked && out.lambda.passed);
}

#[test]
fn density_floor_aborts_with_partial_series() {
    let mut c = RunConfig::new(SystemKind::CompEuler, 16);
    c.initial = InitialCondition::Abc {
        a: 1.0,
        b: 1.0,
        c: 1.0,
        density_amplitude: 0.3,
        density_axis: Axis::Z,
        pressure: 1.0,
        field_amplitude: 0.0,
    };
    c.settings.rho_min = 0.6999;
    c.t_end = 1.0;
    let abort = run(&c).unwrap_err();
    assert!(abort.error.is_runtime_fault(), "{}", abort.error);
    assert!(!abort.series.is_empty());
    assert!(abort.state.is_some());
}

#[test]
fn violations_are_bound_failures_only() {
    assert!(CheckKind::GrowthBound.is_violation());
    assert!(CheckKind::LambdaBound.is_violation());
    assert!(!CheckKind::Ertel.is_violation());
    assert!(!CheckKind::IntegratedLaw.is_violation());
    assert!(!CheckKind::DivergenceFreeField.is_violation());
}
