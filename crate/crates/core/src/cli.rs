//! Command-line front-end.
//!
//! Inputs are CSV files whose header selects the kind:
//!
//! | header   | kind                                   |
//! |----------|----------------------------------------|
//! | `x`, `value`, `v` | plain sequence                |
//! | `t,v`    | event sequence                         |
//! | `t,x`    | uniformly sampled signal               |
//!
//! `--as` overrides the detection; a single-column file read `--as signal`
//! takes its grid from `--t0` and `--dt`. Reports go to stdout (or
//! `--output`) as JSON with 12 significant digits, or CSV.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Number, Value};

use crate::analysis::{heisenberg_check, misalignment};
use crate::decomposition::{jordan_continuous, jordan_discrete, DiscreteJordan};
use crate::duality::{dual_report, monotonicity_measure, FunctionalWeights};
use crate::error::Error;
use crate::events::EventSequence;
use crate::norms::{alexiewicz_norm, discrepancy_fast, sup_norm, total_variation, NormKind};
use crate::sampling::{IfMode, SamplerConfig, Scheme, Signal};
use crate::Rational64;

/// Spacing tolerance for `t,x` signal files.
pub const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "discnorm",
    version,
    about = "Discrepancy norm toolkit for event sequences"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Absolute tolerance for inequality checks.
    #[arg(long, global = true, env = "DISC_TOL", default_value_t = 1e-9)]
    pub tol: f64,

    /// Force the input kind instead of detecting it from the header.
    #[arg(long = "as", global = true, value_enum)]
    pub input_kind: Option<InputKind>,

    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridArgs {
    /// Start time for single-column signals.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub t0: f64,

    /// Sample spacing for single-column signals.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub dt: f64,
}

impl Default for GridArgs {
    fn default() -> Self {
        Self { t0: 0.0, dt: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Sequence,
    Events,
    Signal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// discrepancy
    D,
    /// Alexiewicz
    A,
    /// total variation
    Tv,
    /// p-norm, needs --p
    P,
    /// sup norm
    Sup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Sod,
    If,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IfModeArg {
    Carry,
    Reset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeMode {
    Discrete,
    Continuous,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of a sequence (or of an event sequence's values).
    Norm {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::D)]
        kind: KindArg,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Encode a signal into an event sequence.
    Sample {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SchemeArg::Sod)]
        scheme: SchemeArg,
        #[arg(long)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = IfModeArg::Carry)]
        if_mode: IfModeArg,
    },
    /// Jordan-type decomposition.
    Decompose {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DecomposeMode::Discrete)]
        mode: DecomposeMode,
    },
    /// Dual norms of the functional given by a weight sequence.
    Dual { input: PathBuf },
    /// Monotonicity measure of a weight sequence.
    Monotonicity { input: PathBuf },
    /// Misalignment profile.
    Misalign {
        input: PathBuf,
        /// Largest shift; defaults to the sequence length.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Check the discrepancy/variation inequality for a {-1,0,1} sequence.
    CheckHeisenberg { input: PathBuf },
    /// Quasi-isometry check for a pair of signals.
    Quasi {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, value_enum, default_value_t = SchemeArg::Sod)]
        scheme: SchemeArg,
        #[arg(long)]
        theta: f64,
    },
}

/// Parsed input file.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Sequence(Vec<f64>),
    Events(EventSequence),
    Signal(Signal<f64>),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Domain(_) => "domain_error",
            CliError::Io { .. } => "io_error",
            CliError::Parse { .. } => "parse_error",
            CliError::Usage(_) => "usage_error",
        }
    }
}

fn parse_err(line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

/// Reads and validates an input file.
pub fn parse_sequence(
    path: &Path,
    kind: Option<InputKind>,
    grid: GridArgs,
) -> Result<Input, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text, kind, grid)
}

fn parse_number(field: &str, line: u64) -> Result<f64, CliError> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("not finite: {field:?}")));
    }
    Ok(v)
}

/// Parses CSV text; see the module docs for the accepted layouts.
pub fn parse_str(text: &str, kind: Option<InputKind>, grid: GridArgs) -> Result<Input, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: Vec<String> = record.iter().map(str::to_owned).collect();
        records.push((line, fields));
    }

    let numeric = |fields: &[String]| fields.iter().all(|f| f.parse::<f64>().is_ok());
    let (detected, headerless) = match records.first() {
        None => (None, true),
        Some((_, fields)) if numeric(fields) => (None, true),
        Some((line, fields)) => {
            let lower: Vec<String> = fields.iter().map(|h| h.to_ascii_lowercase()).collect();
            let refs: Vec<&str> = lower.iter().map(String::as_str).collect();
            let kind = match refs.as_slice() {
                ["x"] | ["value"] | ["v"] => InputKind::Sequence,
                ["t", "v"] => InputKind::Events,
                ["t", "x"] => InputKind::Signal,
                _ => {
                    return Err(parse_err(
                        *line,
                        format!("unrecognized header {:?}", fields.join(",")),
                    ))
                }
            };
            (Some(kind), false)
        }
    };
    let header_width = if headerless {
        None
    } else {
        Some(records.remove(0).1.len())
    };
    let mut rows: Vec<(u64, Vec<f64>)> = Vec::with_capacity(records.len());
    for (line, fields) in records {
        let values = fields
            .iter()
            .map(|f| parse_number(f, line))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((line, values));
    }
    // a bare row of numbers reads as one sequence
    if headerless && rows.len() == 1 && rows[0].1.len() > 1 && kind != Some(InputKind::Events) {
        let (line, values) = rows.remove(0);
        rows = values.into_iter().map(|v| (line, vec![v])).collect();
    }
    let columns = header_width
        .or(rows.first().map(|(_, v)| v.len()))
        .unwrap_or(1);
    if let Some((line, _)) = rows.iter().find(|(_, v)| v.len() != columns) {
        return Err(parse_err(*line, "rows have different numbers of fields"));
    }
    let kind = kind.or(detected).unwrap_or(InputKind::Sequence);

    match kind {
        InputKind::Sequence => {
            if columns > 1 {
                return Err(parse_err(1, "a sequence needs a single column"));
            }
            Ok(Input::Sequence(
                rows.into_iter().map(|(_, v)| v[0]).collect(),
            ))
        }
        InputKind::Events => {
            if columns != 2 {
                return Err(parse_err(1, "events need columns t,v"));
            }
            let mut events = EventSequence::empty();
            for (line, v) in rows {
                let (t, value) = (v[0], v[1]);
                if value.fract() != 0.0 || value.abs() > 2f64.powi(53) {
                    return Err(parse_err(line, "event values must be integers"));
                }
                events
                    .push(t, value as i64)
                    .map_err(|_| parse_err(line, "event times must not decrease"))?;
            }
            Ok(Input::Events(events))
        }
        InputKind::Signal => {
            if columns == 1 {
                let samples = rows.into_iter().map(|(_, v)| v[0]).collect();
                return Ok(Input::Signal(Signal::new(grid.t0, grid.dt, samples)?));
            }
            if columns != 2 {
                return Err(parse_err(1, "signals need columns t,x or a single column"));
            }
            if rows.is_empty() {
                return Err(parse_err(1, "signal has no samples"));
            }
            let t0 = rows[0].1[0];
            let dt = if rows.len() > 1 {
                rows[1].1[0] - t0
            } else {
                grid.dt
            };
            for (i, (line, v)) in rows.iter().enumerate() {
                if (v[0] - (t0 + dt * i as f64)).abs() > GRID_TOLERANCE {
                    return Err(parse_err(*line, "sample times are not uniformly spaced"));
                }
            }
            let samples = rows.into_iter().map(|(_, v)| v[1]).collect();
            Ok(Input::Signal(Signal::new(t0, dt, samples)?))
        }
    }
}

/// Writes an input back in the layout [`parse_str`] reads.
pub fn serialize_input(input: &Input) -> String {
    let mut out = String::new();
    match input {
        Input::Sequence(xs) => {
            out.push_str("x\n");
            for x in xs {
                out.push_str(&format!("{x:?}\n"));
            }
        }
        Input::Events(eta) => {
            out.push_str("t,v\n");
            for e in eta.events() {
                out.push_str(&format!("{:?},{}\n", e.time, e.value));
            }
        }
        Input::Signal(s) => {
            out.push_str("t,x\n");
            for (i, x) in s.samples().iter().enumerate() {
                out.push_str(&format!("{:?},{x:?}\n", s.time(i)));
            }
        }
    }
    out
}

/// Rounds to 12 significant digits; integral values become JSON integers.
pub fn format_number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded.fract() == 0.0 && rounded.abs() < 1e15 {
        Value::Number(Number::from(rounded as i64))
    } else {
        Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    }
}

/// Applies [`format_number`] to every float in a JSON tree.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => format_number(n.as_f64().expect("f64 number")),
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, canonicalize(v)))
                .collect::<Map<_, _>>(),
        ),
        other => other,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn q(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Integer view of a sequence when every entry is a small integer.
fn as_integers(xs: &[f64]) -> Option<Vec<i64>> {
    const LIMIT: f64 = 1e12;
    xs.iter()
        .map(|&x| (x.fract() == 0.0 && x.abs() <= LIMIT).then_some(x as i64))
        .collect()
}

fn sequence_of(input: Input) -> Result<Vec<f64>, CliError> {
    match input {
        Input::Sequence(xs) => Ok(xs),
        Input::Events(eta) => Ok(eta.values().into_iter().map(|v| v as f64).collect()),
        Input::Signal(s) => Ok(s.samples().to_vec()),
    }
}

fn signal_of(input: Input, grid: GridArgs) -> Result<Signal<f64>, CliError> {
    match input {
        Input::Signal(s) => Ok(s),
        Input::Sequence(xs) => Ok(Signal::new(grid.t0, grid.dt, xs)?),
        Input::Events(_) => Err(CliError::Usage("expected a signal, got events".into())),
    }
}

fn scheme_of(s: SchemeArg) -> Scheme {
    match s {
        SchemeArg::Sod => Scheme::Sod,
        SchemeArg::If => Scheme::If,
    }
}

fn jordan_value(j: &DiscreteJordan<Rational64>) -> Value {
    json!({
        "alpha": q(j.alpha),
        "r": q(j.r),
        "chi1": j.chi1.iter().map(|&x| q(x)).collect::<Vec<_>>(),
        "chi2": j.chi2.iter().map(|&x| q(x)).collect::<Vec<_>>(),
    })
}

/// Output of a command before formatting.
enum Report {
    Json(Value),
    Events(EventSequence),
}

fn execute(cfg: &CliConfig) -> Result<Report, CliError> {
    let read = |path: &Path| parse_sequence(path, cfg.input_kind, cfg.grid);
    let report = match &cfg.command {
        Command::Norm { input, kind, p } => {
            let xs = sequence_of(read(input)?)?;
            let value = match (kind, as_integers(&xs)) {
                (KindArg::D, Some(ints)) => discrepancy_fast(&ints) as f64,
                (KindArg::A, Some(ints)) => alexiewicz_norm(&ints) as f64,
                (KindArg::Tv, Some(ints)) => total_variation(&ints)? as f64,
                (KindArg::Sup, Some(ints)) => sup_norm(&ints) as f64,
                (KindArg::D, None) => NormKind::Discrepancy.evaluate(&xs)?,
                (KindArg::A, None) => NormKind::Alexiewicz.evaluate(&xs)?,
                (KindArg::Tv, None) => NormKind::TotalVariation.evaluate(&xs)?,
                (KindArg::Sup, None) => NormKind::Sup.evaluate(&xs)?,
                (KindArg::P, _) => {
                    let p = p.ok_or_else(|| CliError::Usage("--kind p needs --p".into()))?;
                    NormKind::P(p).evaluate(&xs)?
                }
            };
            Report::Json(json!({ "value": value }))
        }
        Command::Sample {
            input,
            scheme,
            theta,
            if_mode,
        } => {
            let signal = signal_of(read(input)?, cfg.grid)?;
            let mode = match if_mode {
                IfModeArg::Carry => IfMode::Carry,
                IfModeArg::Reset => IfMode::Reset,
            };
            let sampler = SamplerConfig::new(scheme_of(*scheme), *theta)?.with_if_mode(mode);
            Report::Events(sampler.encode(&signal)?)
        }
        Command::Decompose { input, mode } => match mode {
            DecomposeMode::Discrete => {
                let xs = sequence_of(read(input)?)?;
                match as_integers(&xs) {
                    Some(ints) => {
                        let exact: Vec<Rational64> =
                            ints.into_iter().map(Rational64::from_integer).collect();
                        Report::Json(jordan_value(&jordan_discrete(&exact)))
                    }
                    None => Report::Json(to_value(&jordan_discrete(&xs))),
                }
            }
            DecomposeMode::Continuous => {
                let signal = signal_of(read(input)?, cfg.grid)?;
                Report::Json(to_value(&jordan_continuous(&signal)?))
            }
        },
        Command::Dual { input } => {
            let xs = sequence_of(read(input)?)?;
            match as_integers(&xs) {
                Some(ints) => {
                    let f = FunctionalWeights::from_values(
                        ints.into_iter().map(Rational64::from_integer).collect(),
                    )?;
                    let r = dual_report(&f)?;
                    Report::Json(json!({
                        "dual_d": q(r.dual_d),
                        "bv": q(r.bv),
                        "dual_a": q(r.dual_a),
                        "mu_mon": r.mu_mon.map(q),
                        "witness": r.witness,
                    }))
                }
                None => Report::Json(to_value(&dual_report(&FunctionalWeights::from_values(
                    xs,
                )?)?)),
            }
        }
        Command::Monotonicity { input } => {
            let xs = sequence_of(read(input)?)?;
            let mu = match as_integers(&xs) {
                Some(ints) => q(monotonicity_measure(&FunctionalWeights::from_values(
                    ints.into_iter().map(Rational64::from_integer).collect(),
                )?)?),
                None => monotonicity_measure(&FunctionalWeights::from_values(xs)?)?,
            };
            Report::Json(json!({ "mu_mon": mu }))
        }
        Command::Misalign { input, k_max } => {
            let xs = sequence_of(read(input)?)?;
            let k_max = k_max.unwrap_or(xs.len());
            Report::Json(to_value(&misalignment(&xs, k_max)))
        }
        Command::CheckHeisenberg { input } => {
            let xs = sequence_of(read(input)?)?;
            let ints = as_integers(&xs).ok_or_else(|| {
                let index = xs.iter().position(|x| x.fract() != 0.0).unwrap_or(0);
                CliError::Domain(Error::NotTernary { index })
            })?;
            let r = heisenberg_check(&ints)?;
            let mut v = to_value(&r);
            v["holds"] = Value::Bool((r.l1 as f64) <= (r.disc * r.bv) as f64 + cfg.tol);
            Report::Json(v)
        }
        Command::Quasi {
            f,
            g,
            scheme,
            theta,
        } => {
            let f = signal_of(read(f)?, cfg.grid)?;
            let g = signal_of(read(g)?, cfg.grid)?;
            let sampler = SamplerConfig::new(scheme_of(*scheme), *theta)?;
            let r = crate::sampling::quasi_isometry_check_with_tol(&f, &g, &sampler, cfg.tol)?;
            Report::Json(to_value(&r))
        }
    };
    Ok(report)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(report: Report, format: Format) -> String {
    match (report, format) {
        (Report::Events(eta), Format::Json) => {
            let v = canonicalize(to_value(&eta));
            format!("{v}\n")
        }
        (Report::Events(eta), Format::Csv) => {
            let mut out = String::from("t,v\n");
            for e in eta.events() {
                out.push_str(&format!(
                    "{},{}\n",
                    csv_cell(&format_number(e.time)),
                    e.value
                ));
            }
            out
        }
        (Report::Json(v), Format::Json) => format!("{}\n", canonicalize(v)),
        (Report::Json(v), Format::Csv) => {
            let v = canonicalize(v);
            let obj = v.as_object().cloned().unwrap_or_default();
            // profiles export as one row per shift
            if let (Some(Value::Array(ks)), Some(Value::Array(ds))) =
                (obj.get("k_values"), obj.get("deltas"))
            {
                let mut out = String::from("k,delta\n");
                for (k, d) in ks.iter().zip(ds) {
                    out.push_str(&format!("{},{}\n", csv_cell(k), csv_cell(d)));
                }
                return out;
            }
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let cells: Vec<String> = obj.values().map(csv_cell).collect();
            format!("{}\n{}\n", keys.join(","), cells.join(","))
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run(cfg: &CliConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = execute(cfg).and_then(|report| {
        let text = render(report, cfg.format);
        match &cfg.output {
            Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            }),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = match cfg.format {
                Format::Json => writeln!(
                    stderr,
                    "{}",
                    json!({ "error": { "code": e.code(), "message": e.to_string() } })
                ),
                Format::Csv => writeln!(stderr, "error: {e}"),
            };
            e.exit_code()
        }
    }
}
