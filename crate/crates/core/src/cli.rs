//! The `altosc` command line.
//!
//! Every command emits one document, either JSON
//! `{"command", "params", "rows", "meta"}` or CSV with a header line that
//! mirrors `rows`. Floats use the shortest representation that round-trips,
//! so identical invocations give byte-identical output.
//!
//! Exit codes: 0 success, 2 invalid input or unwritable output, 3 a
//! numerical-accuracy failure (including any failed `verify` check).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::contraction::{self, DEFAULT_GRID_POINTS};
use crate::model::{self, Geometry, ModelParams, QuantumState};
use crate::oracle::{self, coordinate_extent, flat_r_max, VerifyOptions};
use crate::par::Execution;
use crate::wavefunctions::{self, RadialKind};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;

/// Default sample count of `wavefn`.
pub const DEFAULT_SAMPLES: usize = 201;

#[derive(Debug, Parser)]
#[command(name = "altosc", version, about = "Alternative oscillator on the D-sphere and two-sheeted hyperboloid")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact levels with N = 2n_r + L up to --nmax, sorted by energy.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Samples one quasiradial function on a uniform grid.
    Wavefn {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Number of samples, endpoints included.
        #[arg(long = "grid-points", default_value_t = DEFAULT_SAMPLES)]
        grid_points: usize,
        /// Upper end of the coordinate range.
        #[arg(long = "coord-max")]
        coord_max: Option<f64>,
        /// Sample the flat oscillator limit in r instead.
        #[arg(long)]
        flat: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runs every oracle on one state.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Coarse finite-volume cell count.
        #[arg(long = "grid-points")]
        grid_points: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Energy and wavefunction convergence to the flat oscillator.
    Contract {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Comma-separated, strictly increasing r0 values.
        #[arg(long, value_delimiter = ',', default_values_t = [4.0, 8.0, 16.0, 32.0])]
        radii: Vec<f64>,
        /// Quadrature nodes of the L2 distance.
        #[arg(long = "grid-points", default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        /// Upper end r_max of the L2 distance.
        #[arg(long = "coord-max")]
        coord_max: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Largest bound n_r per L and the total count (hyperboloid).
    BoundCount {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GeometryArg {
    Sphere,
    Hyperboloid,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Sphere => Geometry::Sphere,
            GeometryArg::Hyperboloid => Geometry::Hyperboloid,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryArg,
    #[arg(long)]
    pub dim: u32,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long)]
    pub omega: f64,
}

impl ModelArgs {
    fn params(&self) -> crate::Result<ModelParams> {
        ModelParams::new(self.geometry.into(), self.dim, self.radius, self.omega)
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, default_value_t = 0)]
    pub nr: u32,
    #[arg(long = "L", default_value_t = 0)]
    pub l: u32,
}

impl StateArgs {
    fn state(&self) -> QuantumState {
        QuantumState::new(self.nr, self.l)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Float(x) if x.is_finite() => s.serialize_f64(*x),
            Cell::Float(x) => s.serialize_str(&format_float(*x)),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Null => s.serialize_none(),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Shortest round-trip decimal, as JSON writes it; `NaN`/`inf`/`-inf` otherwise.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        serde_json::to_string(&x).expect("finite floats serialize")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

struct Row<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            seq.serialize_element(&Row(&self.columns, row))?;
        }
        seq.end()
    }
}

/// The emitted document of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Document {
    pub command: &'static str,
    pub params: Value,
    pub rows: Table,
    pub meta: Value,
}

impl Document {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("document serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = self.rows.columns.join(",");
                s.push('\n');
                for row in &self.rows.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

/// A computed document plus whether every accuracy check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: Document,
    pub passed: bool,
}

fn params_json(m: &ModelArgs) -> Value {
    json!({ "geometry": Geometry::from(m.geometry), "dim": m.dim, "radius": m.radius, "omega": m.omega })
}

fn spectrum(m: &ModelArgs, nmax: u32) -> crate::Result<Outcome> {
    let params = m.params()?;
    let mut t = Table::new(&["n_r", "L", "N", "nu", "epsilon", "energy"]);
    for e in model::spectrum_table(&params, nmax)? {
        t.push(vec![
            e.state.n_r.into(),
            e.state.l.into(),
            e.state.principal().into(),
            e.spectral.nu.into(),
            e.spectral.epsilon.into(),
            e.spectral.energy.into(),
        ]);
    }
    let meta = json!({ "nmax": nmax, "consistency_tol": model::CONSISTENCY_TOL });
    Ok(Outcome { document: Document { command: "spectrum", params: params_json(m), rows: t, meta }, passed: true })
}

fn wavefn(m: &ModelArgs, state: QuantumState, points: usize, coord_max: Option<f64>, flat: bool) -> crate::Result<Outcome> {
    let params = m.params()?;
    if points < 2 {
        return Err(Error::domain(format!("wavefn needs at least 2 grid points, got {points}")));
    }
    let kind = if flat { RadialKind::FlatR } else { RadialKind::for_geometry(params.geometry()) };
    let top = match (coord_max, kind) {
        (Some(x), _) => x,
        (None, RadialKind::SphereChi) => std::f64::consts::PI,
        (None, RadialKind::HyperboloidTau) => coordinate_extent(&params, state)?,
        (None, RadialKind::FlatR) => flat_r_max(params.dim(), params.omega(), state),
    };
    if !(top > 0.0 && top.is_finite()) {
        return Err(Error::domain(format!("coord-max must be finite and > 0, got {top}")));
    }
    let last = (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|i| if i + 1 == points { top } else { top * i as f64 / last }).collect();
    let sample = wavefunctions::sample(&params, state, kind, &grid, Execution::Parallel)?;
    let mut t = Table::new(&["coordinate", "value"]);
    for (x, v) in sample.grid.iter().zip(&sample.values) {
        t.push(vec![(*x).into(), (*v).into()]);
    }
    let coordinate = match kind {
        RadialKind::SphereChi => "chi",
        RadialKind::HyperboloidTau => "tau",
        RadialKind::FlatR => "r",
    };
    let meta = json!({ "n_r": state.n_r, "L": state.l, "coordinate": coordinate, "grid_points": points, "coord_max": top });
    Ok(Outcome { document: Document { command: "wavefn", params: params_json(m), rows: t, meta }, passed: true })
}

fn verify(m: &ModelArgs, state: QuantumState, grid_points: Option<usize>) -> crate::Result<Outcome> {
    let params = m.params()?;
    let options = VerifyOptions { fd_points: grid_points, ..VerifyOptions::default() };
    let report = oracle::verify_state(&params, state, &options)?;
    let mut t = Table::new(&["check", "value", "reference", "error", "tolerance", "pass"]);
    for c in &report.checks {
        t.push(vec![c.label.as_str().into(), c.value.into(), c.reference.into(), c.error.into(), c.tolerance.into(), c.pass.into()]);
    }
    let floats = |v: &[f64]| Value::Array(v.iter().map(|&x| float_value(x)).collect());
    let meta = json!({
        "n_r": state.n_r,
        "L": state.l,
        "eigenvalues": floats(&report.eigenvalues),
        "extrapolated": floats(&report.extrapolated),
        "quadratures": report.quadratures.iter().map(|(k, v)| (k.clone(), float_value(*v))).collect::<serde_json::Map<_, _>>(),
        "residuals": report.residuals.iter().map(|(k, v)| (k.clone(), float_value(*v))).collect::<serde_json::Map<_, _>>(),
        "grid": report.grid_meta,
        "options": options,
        "passed": report.passed(),
    });
    Ok(Outcome { passed: report.passed(), document: Document { command: "verify", params: params_json(m), rows: t, meta } })
}

fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(format_float(x)), Value::Number)
}

fn contract(
    m: &ModelArgs,
    state: QuantumState,
    radii: &[f64],
    grid_points: usize,
    coord_max: Option<f64>,
) -> crate::Result<Outcome> {
    // Fail fast on the shared parameters before touching any radius.
    m.params()?;
    let study = contraction::wavefunction_contraction(
        m.geometry.into(),
        m.dim,
        m.omega,
        state,
        radii,
        coord_max,
        grid_points,
        Execution::Parallel,
    )?;
    let mut t = Table::new(&["r0", "energy", "energy_error", "l2_error"]);
    for i in 0..study.radii.len() {
        t.push(vec![
            study.radii[i].into(),
            study.energies[i].into(),
            study.energy_errors[i].into(),
            study.l2_errors[i].into(),
        ]);
    }
    let meta = json!({
        "n_r": state.n_r,
        "L": state.l,
        "flat_energy": study.flat_energy(),
        "energy_slope": study.energy_slope(),
        "l2_slope": study.l2_slope(),
        "r_max": coord_max.unwrap_or_else(|| flat_r_max(m.dim, m.omega, state)),
        "grid_points": grid_points,
        "bound_state_max": study.bound_state_max,
    });
    Ok(Outcome { document: Document { command: "contract", params: params_json(m), rows: t, meta }, passed: true })
}

fn bound_count(m: &ModelArgs) -> crate::Result<Outcome> {
    let params = m.params()?;
    if params.geometry() == Geometry::Sphere {
        return Err(Error::Usage("every sphere state is bound; bound-count needs --geometry hyperboloid".into()));
    }
    let channels = model::bound_channels(&params)?;
    let mut t = Table::new(&["L", "max_n_r", "count"]);
    for &(l, max) in &channels {
        t.push(vec![l.into(), max.into(), (u64::from(max) + 1).into()]);
    }
    let total = model::bound_state_count(&params)?;
    let meta = json!({ "total": total, "channels": channels.len() });
    Ok(Outcome { document: Document { command: "bound-count", params: params_json(m), rows: t, meta }, passed: true })
}

/// Computes the document of a parsed command without writing it.
pub fn execute(command: &Command) -> crate::Result<Outcome> {
    match command {
        Command::Spectrum { model, nmax, .. } => spectrum(model, *nmax),
        Command::Wavefn { model, state, grid_points, coord_max, flat, .. } => {
            wavefn(model, state.state(), *grid_points, *coord_max, *flat)
        }
        Command::Verify { model, state, grid_points, .. } => verify(model, state.state(), *grid_points),
        Command::Contract { model, state, radii, grid_points, coord_max, .. } => {
            contract(model, state.state(), radii, *grid_points, *coord_max)
        }
        Command::BoundCount { model, .. } => bound_count(model),
    }
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Spectrum { out, .. }
        | Command::Wavefn { out, .. }
        | Command::Verify { out, .. }
        | Command::Contract { out, .. }
        | Command::BoundCount { out, .. } => out,
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) | Error::Accuracy(_) => EXIT_ACCURACY,
        Error::Domain(_) | Error::InfinitePotential(_) | Error::NotBound { .. } | Error::Usage(_) => EXIT_VALIDATION,
    }
}

/// Runs a parsed command, writes its document, and returns the exit code.
/// Diagnostics go to `stderr` as a single line.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let out = output_args(&cli.command);
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "altosc: {e}");
            return exit_code(&e);
        }
    };
    let text = outcome.document.render(out.format);
    let written = match &out.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "altosc: {msg}");
        return EXIT_VALIDATION;
    }
    if outcome.passed {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "altosc: verification failed");
        EXIT_ACCURACY
    }
}

/// Parses `args` (program name first) and runs. Parse errors exit 2 and
/// `--help`/`--version` exit 0, printing to the matching stream.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let line = text.lines().next().unwrap_or("invalid arguments");
                let _ = writeln!(stderr, "altosc: {}", line.trim_start_matches("error: "));
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            code
        }
    }
}
