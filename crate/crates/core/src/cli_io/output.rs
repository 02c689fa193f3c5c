//! Time-series CSV, binary snapshots and the λ_H key-value report.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::diagnostics::{BudgetReport, LambdaReport, RunMeta, TimeSeries};
use crate::eos::Eos;
use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField, VectorField};
use crate::system::{SolverSettings, SystemKind, SystemState};

pub const TIMESERIES_MAGIC: &str = "helibudget-timeseries";
pub const TIMESERIES_VERSION: u32 = 1;
pub const CSV_COLUMNS: [&str; 13] = [
    "t",
    "H",
    "E0",
    "E",
    "E0B",
    "dHdt_source",
    "dHdt_direct",
    "q_maxnorm",
    "residual_maxnorm",
    "residual_l2",
    "bound_rhs",
    "divu_l1",
    "mass",
];

pub const SNAPSHOT_MAGIC: &str = "helibudget-snapshot";
pub const SNAPSHOT_VERSION: u32 = 1;
const SNAPSHOT_END: &str = "END";

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source: e }
}

fn malformed(path: &Path, line: usize, message: impl std::fmt::Display) -> Error {
    Error::Malformed { path: path.to_path_buf(), message: format!("line {line}: {message}") }
}

/// 17 significant digits, which round-trips every finite `f64`.
fn number(v: f64) -> String {
    format!("{v:.16e}")
}

fn optional(v: Option<f64>) -> String {
    v.map(number).unwrap_or_default()
}

pub fn timeseries_header(meta: &RunMeta) -> String {
    format!(
        "# {TIMESERIES_MAGIC} v{TIMESERIES_VERSION} system={} n={} L={}\n{}\n",
        meta.system,
        meta.n,
        number(meta.length),
        CSV_COLUMNS.join(",")
    )
}

pub fn timeseries_row(r: &BudgetReport) -> String {
    let cells = [
        number(r.t),
        number(r.helicity),
        number(r.e0),
        optional(r.e),
        optional(r.e0b),
        number(r.dhdt_source),
        number(r.dhdt_direct),
        number(r.q_maxnorm),
        number(r.residual_maxnorm),
        number(r.residual_l2),
        optional(r.bound_rhs),
        number(r.divu_l1),
        number(r.mass),
    ];
    let mut row = cells.join(",");
    row.push('\n');
    row
}

pub fn format_timeseries(series: &TimeSeries) -> String {
    let mut out = timeseries_header(&series.meta);
    for r in &series.reports {
        out.push_str(&timeseries_row(r));
    }
    out
}

pub fn write_timeseries(series: &TimeSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_timeseries(series)).map_err(|e| io_error(path, e))
}

pub fn read_timeseries(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_timeseries(&text, path)
}

/// Parses CSV text; `path` only labels errors.
pub fn parse_timeseries(text: &str, path: &Path) -> Result<TimeSeries> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, comment) = lines.next().ok_or_else(|| malformed(path, 1, "empty file"))?;
    let meta = parse_meta(comment).map_err(|m| malformed(path, 1, m))?;
    let (_, header) = lines.next().ok_or_else(|| malformed(path, 2, "missing column header"))?;
    if header.trim_end() != CSV_COLUMNS.join(",") {
        return Err(malformed(path, 2, format!("unexpected columns `{header}`")));
    }
    let mut series = TimeSeries::new(meta);
    for (line, text) in lines {
        if text.trim().is_empty() {
            continue;
        }
        let report = parse_row(text, meta.system).map_err(|m| malformed(path, line, m))?;
        series.push(report);
    }
    Ok(series)
}

fn parse_meta(line: &str) -> std::result::Result<RunMeta, String> {
    let rest = line
        .strip_prefix("# ")
        .and_then(|l| l.strip_prefix(TIMESERIES_MAGIC))
        .ok_or_else(|| format!("expected `# {TIMESERIES_MAGIC} v{TIMESERIES_VERSION} ...`"))?;
    let mut words = rest.split_whitespace();
    let version = words.next().unwrap_or("");
    if version != format!("v{TIMESERIES_VERSION}") {
        return Err(format!("unsupported schema version `{version}`"));
    }
    let (mut system, mut n, mut length) = (None, None, None);
    for word in words {
        let (key, value) = word.split_once('=').ok_or_else(|| format!("expected key=value, got `{word}`"))?;
        match key {
            "system" => system = Some(value.parse::<SystemKind>().map_err(|e| e.to_string())?),
            "n" => n = Some(value.parse::<usize>().map_err(|_| format!("bad n `{value}`"))?),
            "L" => length = Some(value.parse::<f64>().map_err(|_| format!("bad L `{value}`"))?),
            _ => return Err(format!("unknown key `{key}`")),
        }
    }
    match (system, n, length) {
        (Some(system), Some(n), Some(length)) => Ok(RunMeta { system, n, length }),
        _ => Err("header needs system, n and L".into()),
    }
}

fn parse_row(line: &str, system: SystemKind) -> std::result::Result<BudgetReport, String> {
    let cells: Vec<&str> = line.split(',').collect();
    if cells.len() != CSV_COLUMNS.len() {
        return Err(format!("expected {} cells, found {}", CSV_COLUMNS.len(), cells.len()));
    }
    let opt = |i: usize| -> std::result::Result<Option<f64>, String> {
        let cell = cells[i].trim();
        if cell.is_empty() {
            return Ok(None);
        }
        cell.parse::<f64>().map(Some).map_err(|_| format!("column {}: not a number `{cell}`", CSV_COLUMNS[i]))
    };
    let req = |i: usize| -> std::result::Result<f64, String> {
        opt(i)?.ok_or_else(|| format!("column {}: empty", CSV_COLUMNS[i]))
    };
    Ok(BudgetReport {
        system,
        t: req(0)?,
        helicity: req(1)?,
        e0: req(2)?,
        e: opt(3)?,
        e0b: opt(4)?,
        dhdt_source: req(5)?,
        dhdt_direct: req(6)?,
        dhdt_series: None,
        q_maxnorm: req(7)?,
        residual_maxnorm: req(8)?,
        residual_l2: req(9)?,
        bound_rhs: opt(10)?,
        divu_l1: req(11)?,
        mass: req(12)?,
    })
}

/// Streams rows to a CSV file as they are produced.
pub struct TimeSeriesWriter {
    path: PathBuf,
    file: fs::File,
}

impl TimeSeriesWriter {
    pub fn create(path: impl AsRef<Path>, meta: &RunMeta) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
        file.write_all(timeseries_header(meta).as_bytes()).map_err(|e| io_error(&path, e))?;
        Ok(Self { path, file })
    }

    pub fn append(&mut self, report: &BudgetReport) -> Result<()> {
        self.file.write_all(timeseries_row(report).as_bytes()).map_err(|e| io_error(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.file.flush().map_err(|e| io_error(&self.path, e))
    }
}

/// Raw field dump with a self-describing text header.
///
/// ```text
/// helibudget-snapshot v1
/// system = mhd
/// n = 32
/// L = 6.283185307179586
/// t = 0.5
/// eos = ideal-gas 1.4
/// fields = rho,ux,uy,uz,e,bx,by,bz
/// byte_order = little-endian
/// element = f64
/// count = 262144
/// END
/// ```
///
/// followed by `count` little-endian `f64`, fields in header order, each
/// x-fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub system: SystemKind,
    pub n: usize,
    pub length: f64,
    pub t: f64,
    pub eos: Eos,
    pub fields: Vec<String>,
    pub payload: Vec<f64>,
}

fn field_names(kind: SystemKind) -> Vec<String> {
    let mut names = vec!["rho", "ux", "uy", "uz"];
    if kind.has_internal_energy() {
        names.push("e");
    }
    if kind.has_magnetic_field() {
        names.extend(["bx", "by", "bz"]);
    }
    names.into_iter().map(String::from).collect()
}

fn eos_text(eos: &Eos) -> String {
    match *eos {
        Eos::Polytropic { gamma, k } => format!("polytropic {gamma:?} {k:?}"),
        Eos::IdealGas { gamma } => format!("ideal-gas {gamma:?}"),
    }
}

fn parse_eos(text: &str) -> std::result::Result<Eos, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| format!("bad eos parameter `{s}`"));
    match words.as_slice() {
        ["polytropic", g, k] => Ok(Eos::Polytropic { gamma: num(g)?, k: num(k)? }),
        ["ideal-gas", g] => Ok(Eos::IdealGas { gamma: num(g)? }),
        _ => Err(format!("bad eos `{text}`")),
    }
}

impl Snapshot {
    pub fn from_state(state: &SystemState) -> Self {
        let grid = state.grid();
        let mut payload = Vec::with_capacity(grid.len() * 8);
        payload.extend_from_slice(state.rho.values());
        for c in state.u.components() {
            payload.extend_from_slice(c.values());
        }
        if let Some(e) = &state.e {
            payload.extend_from_slice(e.values());
        }
        if let Some(b) = &state.b {
            for c in b.components() {
                payload.extend_from_slice(c.values());
            }
        }
        Self {
            system: state.kind,
            n: grid.n(),
            length: grid.length(),
            t: state.t,
            eos: state.eos,
            fields: field_names(state.kind),
            payload,
        }
    }

    pub fn to_state(&self, settings: SolverSettings) -> Result<SystemState> {
        let bad = |m: String| Error::InvalidParameter(format!("snapshot: {m}"));
        if self.fields != field_names(self.system) {
            return Err(bad(format!("fields {:?} do not match {}", self.fields, self.system)));
        }
        let grid = Grid::new(self.n, self.length)?;
        let len = grid.len();
        if self.payload.len() != len * self.fields.len() {
            return Err(bad(format!("payload has {} values, expected {}", self.payload.len(), len * self.fields.len())));
        }
        let mut chunks = self.payload.chunks_exact(len).map(|c| ScalarField::from_values(&grid, c.to_vec()));
        let mut next = || chunks.next().expect("payload length checked");
        let rho = next();
        let u = VectorField::new(next(), next(), next());
        let e = self.system.has_internal_energy().then(&mut next);
        let b = self.system.has_magnetic_field().then(|| VectorField::new(next(), next(), next()));
        let state = SystemState { kind: self.system, rho, u, e, b, t: self.t, eos: self.eos, settings };
        state.validate()?;
        Ok(state)
    }

    pub fn header(&self) -> String {
        let mut h = String::new();
        let _ = writeln!(h, "{SNAPSHOT_MAGIC} v{SNAPSHOT_VERSION}");
        let _ = writeln!(h, "system = {}", self.system);
        let _ = writeln!(h, "n = {}", self.n);
        let _ = writeln!(h, "L = {:?}", self.length);
        let _ = writeln!(h, "t = {:?}", self.t);
        let _ = writeln!(h, "eos = {}", eos_text(&self.eos));
        let _ = writeln!(h, "fields = {}", self.fields.join(","));
        let _ = writeln!(h, "byte_order = little-endian");
        let _ = writeln!(h, "element = f64");
        let _ = writeln!(h, "count = {}", self.payload.len());
        let _ = writeln!(h, "{SNAPSHOT_END}");
        h
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let header = self.header();
        let mut out = Vec::with_capacity(header.len() + 8 * self.payload.len());
        out.extend_from_slice(header.as_bytes());
        for v in &self.payload {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| io_error(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| io_error(path, e))?;
        Self::read_from(BufReader::new(file), path)
    }

    /// `path` only labels errors.
    pub fn read_from(mut reader: impl BufRead, path: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        let mut line_no = 0;
        loop {
            let mut line = String::new();
            line_no += 1;
            let read = reader.read_line(&mut line).map_err(|e| io_error(path, e))?;
            if read == 0 {
                return Err(malformed(path, line_no, "header not terminated by END"));
            }
            let line = line.trim_end_matches(['\n', '\r']);
            if line_no == 1 {
                if line != format!("{SNAPSHOT_MAGIC} v{SNAPSHOT_VERSION}") {
                    return Err(malformed(path, 1, format!("expected `{SNAPSHOT_MAGIC} v{SNAPSHOT_VERSION}`")));
                }
                continue;
            }
            if line == SNAPSHOT_END {
                break;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| malformed(path, line_no, format!("expected key = value, got `{line}`")))?;
            entries.push((line_no, key.trim().to_owned(), value.trim().to_owned()));
        }
        let get = |key: &str| -> Result<(usize, &str)> {
            entries
                .iter()
                .find(|(_, k, _)| k == key)
                .map(|(l, _, v)| (*l, v.as_str()))
                .ok_or_else(|| malformed(path, line_no, format!("missing header key `{key}`")))
        };
        let num = |key: &str| -> Result<f64> {
            let (l, v) = get(key)?;
            v.parse().map_err(|_| malformed(path, l, format!("{key}: not a number `{v}`")))
        };
        let int = |key: &str| -> Result<usize> {
            let (l, v) = get(key)?;
            v.parse().map_err(|_| malformed(path, l, format!("{key}: not an integer `{v}`")))
        };
        let (l, system) = get("system")?;
        let system: SystemKind = system.parse().map_err(|e: Error| malformed(path, l, e))?;
        let (l, eos) = get("eos")?;
        let eos = parse_eos(eos).map_err(|m| malformed(path, l, m))?;
        let (l, order) = get("byte_order")?;
        if order != "little-endian" {
            return Err(malformed(path, l, format!("unsupported byte order `{order}`")));
        }
        let (l, element) = get("element")?;
        if element != "f64" {
            return Err(malformed(path, l, format!("unsupported element type `{element}`")));
        }
        let fields: Vec<String> = get("fields")?.1.split(',').map(|s| s.trim().to_owned()).collect();
        let count = int("count")?;
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes).map_err(|e| io_error(path, e))?;
        if bytes.len() != 8 * count {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                message: format!("payload is {} bytes, header declares {count} values ({} bytes)", bytes.len(), 8 * count),
            });
        }
        let payload =
            bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
        Ok(Self { system, n: int("n")?, length: num("L")?, t: num("t")?, eos, fields, payload })
    }
}

/// Key-value rendering of a λ_H report, one `key = value` per line.
pub fn format_lambda_report(report: &LambdaReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system = {}", report.system);
    let _ = writeln!(out, "window = {}", number(report.window));
    let _ = writeln!(out, "samples = {}", report.samples);
    let _ = writeln!(out, "mean_abs_dhdt = {}", number(report.mean_abs_dhdt));
    let _ = writeln!(out, "varrho0 = {}", number(report.varrho0));
    let _ = writeln!(out, "e0 = {}", number(report.e0));
    let _ = writeln!(out, "q0_maxnorm = {}", number(report.q0_maxnorm));
    let _ = writeln!(out, "lambda_inv = {}", number(report.lambda_inv));
    let _ = writeln!(out, "lambda_inv_bound = {}", number(report.lambda_inv_bound));
    let _ = writeln!(out, "ratio = {}", number(report.ratio()));
    let _ = writeln!(out, "bound_checked = {}", report.bound_checked);
    let _ = writeln!(out, "verdict = {}", if report.passed { "pass" } else { "fail" });
    out
}

pub fn write_lambda_report(report: &LambdaReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_lambda_report(report)).map_err(|e| io_error(path, e))
}

pub fn lambda_summary(report: &LambdaReport) -> String {
    let verdict = match (report.bound_checked, report.passed) {
        (false, _) => "not checked for this system",
        (true, true) => "pass",
        (true, false) => "FAIL",
    };
    format!(
        "{}: {} samples over {:.6}, <|dH/dt|> = {:.6e}\n  λ_H⁻¹ = {:.6e}, bound = {:.6e}, ratio = {:.6}\n  verdict: {verdict}\n",
        report.system,
        report.samples,
        report.window,
        report.mean_abs_dhdt,
        report.lambda_inv,
        report.lambda_inv_bound,
        report.ratio(),
    )
}
