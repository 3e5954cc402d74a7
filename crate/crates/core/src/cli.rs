//! Command-line front end.
//!
//! Output is assembled in memory and written only once the whole command has
//! succeeded, so a failing invocation never leaves a partial file behind.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::inequivalence::DEFAULT_TIE_TOL;
use crate::analysis::mixed::{F123_QUOTED_NOTE, MIXED_COLUMNS};
use crate::analysis::table::{format_sig12, write_csv_rows};
use crate::analysis::{
    default_grid, emit_table, find_inequivalence_pairs, maccone_family, mixed_state_study, parse_grid,
    parse_quantities, sample_correlators, scan_family, SampleTarget, ScanRecord, TableFormat,
};
use crate::correlators::{mi_tripartite, mp_tripartite, named_basis, named_observable, pcc_tripartite};
use crate::density::{validate_density, DensityMatrix3Q};
use crate::dynamics::{esd_time, esd_trajectory, TrajectoryPoint};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::{closed_form_measures, measure_report, MeasureReport};
use crate::states::{amplitudes_from_pairs, FamilyKind, PureState3Q, State3Q, StateFamily};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Command-line GHZ amplitudes within this of unit norm are rescaled.
pub const CLI_GHZ_NORM_SLACK: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "tricorr", version, about = "Three-qubit entanglement measures and statistical correlators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Json => TableFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Named family: generalized-ghz, generalized-w, x-family, ghz-y, ghz-w-mixture.
    #[arg(long, conflicts_with = "state_file", required_unless_present = "state_file")]
    pub family: Option<String>,
    /// Family parameter as name=value; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE", requires = "family")]
    pub params: Vec<String>,
    /// JSON file with 8 amplitudes or an 8x8 density matrix of [re, im] pairs.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Destination file, or `-` for standard output.
    #[arg(long, default_value = "-")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence fill, GMC and related measures of one state (JSON).
    Measures {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// PCC, MI and MP of one state (JSON).
    Correlators {
        #[command(flatten)]
        state: StateArgs,
        /// Observable for the PCC: X, Y, Z, P0, P1, Pplus; repeatable.
        #[arg(long, default_values_t = ["X".to_string()])]
        observable: Vec<String>,
        /// Product basis for MI and MP: X, Y, Z; repeatable.
        #[arg(long, default_values_t = ["X".to_string()])]
        basis: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep a family parameter and record quantities.
    Scan {
        #[arg(long)]
        family: String,
        /// start:stop:step; defaults to 400 points per unit of the parameter.
        #[arg(long)]
        grid: Option<String>,
        /// Comma-separated quantity ids, e.g. F123,C_GMC,C123_plus,I123_Z.
        #[arg(long, default_value = "F123,C_GMC")]
        quantities: String,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Pairs of x-family states that GMC and CF rank differently.
    Inequivalence {
        #[arg(long, default_value = "0:0.95:0.05")]
        grid: String,
        /// Values closer than this count as equal.
        #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Decay of genuine entanglement under amplitude damping.
    Esd {
        #[arg(long)]
        y: f64,
        #[arg(long, default_value_t = 2.0)]
        tmax: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Sum of two tripartite PCCs across a family sweep.
    Maccone {
        #[arg(long)]
        family: String,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value = "X")]
        obs1: String,
        #[arg(long, default_value = "P1")]
        obs2: String,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Correlators of the GHZ/W mixture next to their closed forms.
    Mixed {
        #[arg(long, default_value = "0:1:0.0025")]
        grid: String,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Finite-shot estimate of a correlator with bootstrap errors (JSON).
    Sample {
        #[command(flatten)]
        state: StateArgs,
        /// Estimate the PCC for this observable.
        #[arg(long, group = "target")]
        observable: Option<String>,
        /// Estimate the MI in this basis.
        #[arg(long, group = "target")]
        mi_basis: Option<String>,
        /// Estimate the MP in this basis.
        #[arg(long, group = "target")]
        mp_basis: Option<String>,
        #[arg(long)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check a state file and print the validation report (JSON).
    Validate {
        #[arg(long)]
        state_file: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::InvalidInput(_) | Error::UnknownLabel { .. } | Error::OutOfDomain { .. } | Error::UnsupportedFamily(_) => {
            EXIT_USAGE
        }
        _ => EXIT_NUMERIC,
    }
}

fn error_json(kind: &str, message: &str, extra: Option<Value>) -> String {
    let mut obj = json!({ "error": { "kind": kind, "message": message } });
    if let Some(extra) = extra {
        obj["error"]["report"] = extra;
    }
    obj.to_string()
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim(), None));
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let report = match &err {
                Error::InvalidDensity(r) => serde_json::to_value(r).ok(),
                _ => None,
            };
            eprintln!("{}", error_json(err.kind(), &err.to_string(), report));
            exit_code(&err)
        }
    }
}

fn write_output(dest: &str, bytes: &[u8]) -> Result<()> {
    if dest == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()?;
    } else {
        fs::write(dest, bytes).map_err(|e| Error::Io(format!("{dest}: {e}")))?;
    }
    Ok(())
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Runs one subcommand.
pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Measures { state, out } => {
            let resolved = resolve_state(state)?;
            let report = measure_report(&resolved.state.density())?;
            let mut v = json!({
                "state": resolved.describe(),
                "pure": resolved.state.is_pure(),
            });
            merge(&mut v, measures_json(&report));
            if let Some(family) = &resolved.family {
                if let Ok(closed) = closed_form_measures(family) {
                    v["closed_form"] = measures_json(&closed);
                }
            }
            write_output(&out.output, &json_bytes(&v))
        }
        Command::Correlators {
            state,
            observable,
            basis,
            out,
        } => {
            let resolved = resolve_state(state)?;
            let rho = resolved.state.density();
            let mut pcc = serde_json::Map::new();
            for label in observable {
                pcc.insert(label.clone(), to_value(&pcc_tripartite(&rho, &named_observable(label)?)));
            }
            let mut mi = serde_json::Map::new();
            let mut mp = serde_json::Map::new();
            for label in basis {
                let b = named_basis(label)?;
                mi.insert(label.clone(), to_value(&mi_tripartite(&rho, &b)?));
                mp.insert(label.clone(), json!(mp_tripartite(&rho, &b)?));
            }
            let v = json!({
                "state": resolved.describe(),
                "pure": resolved.state.is_pure(),
                "pcc": pcc,
                "mi": mi,
                "mp": mp,
            });
            write_output(&out.output, &json_bytes(&v))
        }
        Command::Scan {
            family,
            grid,
            quantities,
            table,
        } => {
            let kind: FamilyKind = family.parse()?;
            let grid = match grid {
                Some(g) => parse_grid(g)?,
                None => default_grid(kind),
            };
            let qs = parse_quantities(quantities)?;
            if qs.is_empty() {
                return Err(Error::InvalidInput("no quantities requested".into()));
            }
            let records = scan_family(kind, &grid, &qs)?;
            let mut buf = Vec::new();
            emit_table(&records, table.format.into(), &mut buf)?;
            write_output(&table.out.output, &buf)
        }
        Command::Inequivalence { grid, tie_tol, table } => {
            if tie_tol.is_nan() || *tie_tol < 0.0 {
                return Err(Error::InvalidInput(format!("tie tolerance must be ≥ 0, got {tie_tol}")));
            }
            let pairs = find_inequivalence_pairs(&parse_grid(grid)?, *tie_tol)?;
            let buf = match table.format {
                Format::Json => json_bytes(&to_value(&pairs)),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let csv_err = |e: csv::Error| Error::Io(e.to_string());
                    w.write_record(["a1", "a2", "gmc1", "gmc2", "cf1", "cf2", "kind"]).map_err(csv_err)?;
                    for p in &pairs {
                        let v = p.values;
                        let mut row: Vec<String> =
                            [v.a1, v.a2, v.gmc1, v.gmc2, v.cf1, v.cf2].iter().map(|&x| format_sig12(x)).collect();
                        row.push(to_value(&p.kind).as_str().unwrap_or_default().to_owned());
                        w.write_record(&row).map_err(csv_err)?;
                    }
                    w.into_inner().map_err(|e| Error::Io(e.to_string()))?
                }
            };
            write_output(&table.out.output, &buf)
        }
        Command::Esd { y, tmax, steps, table } => {
            let points = esd_trajectory(*y, *tmax, *steps)?;
            let buf = match table.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_csv_rows(&mut buf, &TrajectoryPoint::COLUMNS, points.iter().map(|p| p.values().to_vec()))?;
                    buf
                }
                Format::Json => json_bytes(&json!({
                    "y": y,
                    "esd_time": esd_time(*y)?,
                    "trajectory": points,
                })),
            };
            write_output(&table.out.output, &buf)
        }
        Command::Maccone {
            family,
            grid,
            obs1,
            obs2,
            table,
        } => {
            let kind: FamilyKind = family.parse()?;
            let grid = match grid {
                Some(g) => parse_grid(g)?,
                None => default_grid(kind),
            };
            let (o1, o2) = (named_observable(obs1)?, named_observable(obs2)?);
            let mut records = Vec::with_capacity(grid.len());
            for &value in &grid {
                let r = maccone_family(kind, value, &o1, &o2)?;
                let mut rec = ScanRecord::new(kind.scan_parameter(), value);
                rec.insert("maccone_sum", r.sum)?;
                rec.insert(format!("C123_{obs1}"), r.terms[0].tripartite)?;
                rec.insert(format!("C123_{obs2}"), r.terms[1].tripartite)?;
                rec.insert("raw_sum", r.raw_sum)?;
                rec.insert("continuity_resolved_cuts", r.continuity_resolved.len() as f64)?;
                records.push(rec);
            }
            let mut buf = Vec::new();
            emit_table(&records, table.format.into(), &mut buf)?;
            write_output(&table.out.output, &buf)
        }
        Command::Mixed { grid, table } => {
            let records = mixed_state_study(&parse_grid(grid)?)?;
            let buf = match table.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    emit_table(&records, TableFormat::Csv, &mut buf)?;
                    buf
                }
                Format::Json => json_bytes(&json!({
                    "columns": MIXED_COLUMNS,
                    "notes": { "F123_quoted": F123_QUOTED_NOTE },
                    "records": records,
                })),
            };
            write_output(&table.out.output, &buf)
        }
        Command::Sample {
            state,
            observable,
            mi_basis,
            mp_basis,
            shots,
            seed,
            out,
        } => {
            let target = match (observable, mi_basis, mp_basis) {
                (Some(o), _, _) => SampleTarget::Pcc(named_observable(o)?),
                (_, Some(b), _) => SampleTarget::Mi(named_basis(b)?),
                (_, _, Some(b)) => SampleTarget::Mp(named_basis(b)?),
                _ => SampleTarget::Pcc(named_observable("X")?),
            };
            let resolved = resolve_state(state)?;
            let est = sample_correlators(&resolved.state.density(), &target, *shots, *seed)?;
            let mut v = json!({ "state": resolved.describe() });
            merge(&mut v, to_value(&est));
            write_output(&out.output, &json_bytes(&v))
        }
        Command::Validate { state_file, out } => {
            let raw = read_state_json(state_file)?;
            let (kind, report) = match classify_state_json(&raw)? {
                StateJson::Amplitudes(pairs) => {
                    let psi = PureState3Q::new(amplitudes_from_pairs(&pairs)?)?;
                    ("amplitudes", validate_density(psi.to_density().matrix()))
                }
                StateJson::Density(m) => ("density", validate_density(&m)),
            };
            let v = json!({ "path": state_file, "kind": kind, "report": report });
            if !report.passed {
                return Err(Error::InvalidDensity(report));
            }
            write_output(&out.output, &json_bytes(&v))
        }
    }
}

fn merge(target: &mut Value, extra: Value) {
    if let (Some(t), Value::Object(e)) = (target.as_object_mut(), extra) {
        t.extend(e);
    }
}

fn measures_json(r: &MeasureReport) -> Value {
    let mut v = json!({
        "F123": r.concurrence_fill,
        "C_GMC": r.gmc,
        "edges": {
            "D2_1": r.edges.d1_23,
            "D2_2": r.edges.d2_13,
            "D2_3": r.edges.d3_12,
        },
        "edge_kind": to_value(&r.edge_kind),
    });
    if let Some(g) = r.global_measure {
        v["G123"] = json!(g);
    }
    if let Some(t) = r.tangle {
        v["tau123"] = json!(t);
    }
    v
}

/// A state taken from the command line, with its provenance.
pub struct ResolvedState {
    pub state: State3Q,
    pub family: Option<StateFamily>,
    pub path: Option<PathBuf>,
    /// Norm of command-line GHZ amplitudes before rescaling.
    pub input_norm: Option<f64>,
}

impl ResolvedState {
    fn describe(&self) -> Value {
        let mut v = match (&self.family, &self.path) {
            (Some(f), _) => to_value(f),
            (None, Some(p)) => json!({ "file": p }),
            (None, None) => Value::Null,
        };
        if let Some(n) = self.input_norm {
            v["input_norm"] = json!(n);
        }
        v
    }
}

/// Parses `name=value` pairs.
pub fn parse_params(params: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for p in params {
        let (name, value) = p
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("parameter `{p}` must look like name=value")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("parameter `{p}`: `{value}` is not a number")))?;
        if out.insert(name.trim().to_owned(), value).is_some() {
            return Err(Error::InvalidInput(format!("parameter `{name}` given twice")));
        }
    }
    Ok(out)
}

pub fn resolve_state(args: &StateArgs) -> Result<ResolvedState> {
    if let Some(path) = &args.state_file {
        return Ok(ResolvedState {
            state: load_state_file(path)?,
            family: None,
            path: Some(path.clone()),
            input_norm: None,
        });
    }
    let kind: FamilyKind = args
        .family
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("either --family or --state-file is required".into()))?
        .parse()?;
    let mut params = parse_params(&args.params)?;
    let mut input_norm = None;
    if kind == FamilyKind::GeneralizedGhz {
        if let (Some(&a), Some(&b)) = (params.get("a"), params.get("b")) {
            let n = (a * a + b * b).sqrt();
            if n > 0.0 && (n - 1.0).abs() <= CLI_GHZ_NORM_SLACK && n != 1.0 {
                params.insert("a".into(), a / n);
                params.insert("b".into(), b / n);
                input_norm = Some(n);
            }
        }
    }
    let family = StateFamily::from_params(kind, &params)?;
    Ok(ResolvedState {
        state: family.state()?,
        family: Some(family),
        path: None,
        input_norm,
    })
}

enum StateJson {
    Amplitudes(Vec<[f64; 2]>),
    Density(ComplexMatrix),
}

fn read_state_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn pair(v: &Value) -> Option<[f64; 2]> {
    let arr = v.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    Some([arr[0].as_f64()?, arr[1].as_f64()?])
}

fn classify_state_json(v: &Value) -> Result<StateJson> {
    let body = match v {
        Value::Object(map) => {
            if let Some(a) = map.get("amplitudes") {
                return pairs_list(a).map(StateJson::Amplitudes);
            }
            if let Some(d) = map.get("density") {
                return density_matrix(d).map(StateJson::Density);
            }
            return Err(Error::InvalidInput(
                "state object needs an `amplitudes` or `density` key".into(),
            ));
        }
        other => other,
    };
    let rows = body
        .as_array()
        .ok_or_else(|| Error::InvalidInput("state must be a JSON array or object".into()))?;
    let is_matrix = rows.first().and_then(Value::as_array).and_then(|r| r.first()).is_some_and(Value::is_array);
    if is_matrix {
        density_matrix(body).map(StateJson::Density)
    } else {
        pairs_list(body).map(StateJson::Amplitudes)
    }
}

fn pairs_list(v: &Value) -> Result<Vec<[f64; 2]>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("amplitudes must be an array of [re, im] pairs".into()))?;
    arr.iter()
        .map(|x| pair(x).ok_or_else(|| Error::InvalidInput(format!("`{x}` is not a [re, im] pair"))))
        .collect()
}

fn density_matrix(v: &Value) -> Result<ComplexMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("density must be an array of rows".into()))?;
    let mut data = Vec::with_capacity(64);
    for row in rows {
        let entries = pairs_list(row)?;
        if entries.len() != rows.len() {
            return Err(Error::Dimension(format!(
                "density row has {} entries, expected {}",
                entries.len(),
                rows.len()
            )));
        }
        data.extend(entries.iter().map(|[re, im]| num_complex::Complex64::new(*re, *im)));
    }
    ComplexMatrix::new(rows.len(), rows.len(), data)
}

/// Reads a JSON state: 8 `[re, im]` amplitudes (pure) or an 8×8 matrix of
/// pairs (density). Either may sit under an `amplitudes` or `density` key.
/// Amplitudes are not renormalized.
pub fn load_state_file(path: &Path) -> Result<State3Q> {
    match classify_state_json(&read_state_json(path)?)? {
        StateJson::Amplitudes(pairs) => Ok(State3Q::Pure(PureState3Q::new(amplitudes_from_pairs(&pairs)?)?)),
        StateJson::Density(m) => Ok(State3Q::Mixed(DensityMatrix3Q::new(m)?)),
    }
}
