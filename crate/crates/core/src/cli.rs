//! The `kcone` command line.
//!
//! Exit codes: 0 success, 1 a reported check failed, 2 malformed input
//! (JSON schema, unreadable file, bad flags), 3 a domain violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::comparison::{
    bg_ratio_reports, space_annulus_volume, AnalyticSpace, AnnulusSpec, Method, MC_SIGMAS,
};
use crate::cone::ConeSpace;
use crate::dirspace::DirectionSpace;
use crate::error::{Error, Result};
use crate::glue::GluedSpace;
use crate::spaceform::Curvature;
use crate::spec::{parse_cone_point, parse_direction, parse_direction_space, parse_plane_point, parse_space, Space};
use crate::suite::{run_suite, SuiteConfig};
use crate::tube::{tube_volume_exact, tube_volume_expansion, union_volume_mc, BallChain};

pub const DEFAULT_SEED: u64 = 20_240_611;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kcone", version, about = "Distances, volumes and comparison checks on κ-cones and their gluings")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Master seed for every Monte-Carlo estimate
    #[arg(long, global = true, env = "KCONE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the result here instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format (tables default to csv, lemma-suite to json)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Absolute quadrature tolerance for cone volumes
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Mc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate sn_κ(t)
    Sn {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        /// Comma-separated arguments
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Distance between two points of any space
    Dist(DistArgs),
    /// Quotient distance in a glued cone or polygon, with a refinement table
    GluedDist(DistArgs),
    /// Ball volumes around the base point
    Volume {
        /// Space JSON, inline or a file path
        #[arg(long)]
        space: String,
        /// Comma-separated radii
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        #[arg(long, value_enum, default_value = "exact")]
        method: MethodArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Volume ratios of a space against a cone model
    BgReport {
        /// Space JSON (cone, glued or round_sphere), inline or a file path
        #[arg(long)]
        space: String,
        /// Model direction space JSON; defaults to the space's own
        #[arg(long)]
        sigma: Option<String>,
        /// Model curvature; defaults to the space's own
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<f64>,
        /// R1,R2,R3 with 0 ≤ R1 < R2 < R3; repeat for more triples
        #[arg(long, required = true)]
        radii: Vec<String>,
        #[arg(long, value_enum, default_value = "exact")]
        method: MethodArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Ball-chain volume: exact, second-order expansion and Monte-Carlo
    TubeCheck {
        /// JSON {"n", "epsilon", "gaps": [...]} or {"n", "epsilon", "centers": [[...], ...]}, inline or a file path
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Run the invariant battery
    LemmaSuite {
        #[arg(long, default_value_t = SuiteConfig::default().samples)]
        samples: u64,
        /// Sampled pairs per bi-Lipschitz configuration
        #[arg(long, default_value_t = SuiteConfig::default().pairs)]
        pairs: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    /// Space JSON, inline or a file path
    #[arg(long)]
    space: String,
    /// `apex` or `t,direction` for cones, `x:y` for polygons
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    /// Boundary net spacing of the first row
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Rows, halving the spacing each time
    #[arg(long, default_value_t = 1)]
    refine: u32,
}

/// An input or usage problem, reported with exit code 2.
#[derive(Debug)]
struct InputError(String);

enum Failure {
    Input(InputError),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(m) => Failure::Input(InputError(m)),
            other => Failure::Domain(other),
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

/// One output cell; numbers keep Rust's shortest round-trip form.
#[derive(Debug, Clone)]
enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().zip(row).map(|(h, c)| (h.to_string(), c.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
                s.push('\n');
                s
            }
        }
    }
}

struct Outcome {
    text: String,
    pass: bool,
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    let outcome = match execute(cli) {
        Ok(o) => o,
        Err(Failure::Input(InputError(msg))) => {
            eprintln!("kcone: input error: {msg}");
            return EXIT_SCHEMA;
        }
        Err(Failure::Domain(e)) => {
            eprintln!("kcone: {e}");
            return EXIT_DOMAIN;
        }
    };
    let written = match &cli.run.output {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("kcone: cannot write output: {msg}");
        return EXIT_SCHEMA;
    }
    if outcome.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Inline JSON if the argument looks like an object, otherwise a file path.
fn read_json_arg(arg: &str) -> std::result::Result<String, InputError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| InputError(format!("cannot read `{arg}`: {e}")))
    }
}

fn load_space(arg: &str, tolerance: Option<f64>) -> std::result::Result<Space, Failure> {
    let space = parse_space(&read_json_arg(arg)?)?;
    let Some(tol) = tolerance else { return Ok(space) };
    Ok(match space {
        Space::Cone(c) => Space::Cone(c.with_tolerance(tol)?),
        Space::Glued(g) => {
            let cone = g.cone().clone().with_tolerance(tol)?;
            let phi = g.phi().clone();
            // the space was accepted once, so only the admissibility check can fail
            Space::Glued(GluedSpace::new(cone.clone(), phi.clone()).or_else(|_| GluedSpace::new_non_admissible(cone, phi))?)
        }
        other => other,
    })
}

fn method_of(arg: MethodArg, samples: u64, seed: u64) -> Method {
    match arg {
        MethodArg::Exact => Method::Exact,
        MethodArg::Mc => Method::MonteCarlo { samples, seed },
    }
}

fn execute(cli: &Cli) -> std::result::Result<Outcome, Failure> {
    let run = &cli.run;
    if let Some(tol) = run.tolerance {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(InputError(format!("--tolerance must be positive, got {tol}")).into());
        }
    }
    let table_format = run.format.unwrap_or(Format::Csv);
    let table = |t: Table, pass: bool| Outcome { text: t.render(table_format), pass };
    match &cli.command {
        Command::Sn { kappa, t } => {
            let kappa = Curvature::new(*kappa)?;
            let mut out = Table::new(&["kappa", "t", "value", "method", "error"]);
            for &t in t {
                let v = kappa.sn(t)?;
                out.push(vec![
                    Cell::Num(kappa.value()),
                    Cell::Num(t),
                    Cell::Num(v),
                    Cell::Text(kappa.sn_method(t).into()),
                    Cell::Num(4.0 * f64::EPSILON * v.abs()),
                ]);
            }
            Ok(table(out, true))
        }
        Command::Dist(args) => Ok(table(distance_table(args, run.tolerance, false)?, true)),
        Command::GluedDist(args) => Ok(table(distance_table(args, run.tolerance, true)?, true)),
        Command::Volume { space, radii, method, samples } => {
            let space = load_space(space, run.tolerance)?;
            let s = space.pointed()?;
            let method = method_of(*method, *samples, run.seed);
            let mut out = Table::new(&["radius", "value", "method", "error", "samples"]);
            for &r in radii {
                let v = space_annulus_volume(s, AnnulusSpec::ball(r)?, method)?;
                out.push(vec![
                    Cell::Num(r),
                    Cell::Num(v.value),
                    Cell::Text(v.method().into()),
                    Cell::Num(v.error_value()),
                    Cell::Int(v.samples()),
                ]);
            }
            Ok(table(out, true))
        }
        Command::BgReport { space, sigma, kappa, radii, method, samples } => {
            let space = load_space(space, run.tolerance)?;
            let (own_sigma, own_kappa) = own_model(&space)?;
            let sigma = match sigma {
                Some(text) => parse_direction_space(&read_json_arg(text)?)?,
                None => own_sigma,
            };
            let kappa = match kappa {
                Some(k) => Curvature::new(*k)?,
                None => own_kappa,
            };
            let triples = radii.iter().map(|r| parse_triple(r)).collect::<std::result::Result<Vec<_>, _>>()?;
            let reports = bg_ratio_reports(space.pointed()?, &triples, &sigma, kappa, method_of(*method, *samples, run.seed))?;
            let mut out = Table::new(&[
                "form",
                "r1",
                "r2",
                "r3",
                "space_ratio",
                "model_ratio",
                "margin",
                "method",
                "error",
                "status",
            ]);
            let mut pass = true;
            for rep in &reports {
                for row in &rep.rows {
                    pass &= row.pass();
                    let mut cells = vec![Cell::Text(row.form.name().into())];
                    cells.extend(row.radii.iter().map(|&r| Cell::Num(r)));
                    cells.extend([
                        Cell::Num(row.space_ratio),
                        Cell::Num(row.model_ratio),
                        Cell::Num(row.margin),
                        Cell::Text(row.method.into()),
                        Cell::Num(row.error),
                        Cell::Text(if row.pass() { "pass" } else { "fail" }.into()),
                    ]);
                    out.push(cells);
                }
                for row in &rep.omitted {
                    let mut cells = vec![Cell::Text(row.form.name().into())];
                    cells.extend(row.radii.iter().map(|&r| Cell::Num(r)));
                    cells.extend([
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Text(method.name().into()),
                        Cell::Empty,
                        Cell::Text(row.reason.into()),
                    ]);
                    out.push(cells);
                }
            }
            Ok(table(out, pass))
        }
        Command::TubeCheck { input, samples } => {
            let (out, pass) = tube_check(&read_json_arg(input)?, *samples, run.seed)?;
            Ok(table(out, pass))
        }
        Command::LemmaSuite { samples, pairs } => {
            if *samples == 0 || *pairs == 0 {
                return Err(InputError("--samples and --pairs must be positive".into()).into());
            }
            let report = run_suite(&SuiteConfig { seed: run.seed, samples: *samples, pairs: *pairs });
            let text = match run.format.unwrap_or(Format::Json) {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            Ok(Outcome { text, pass: report.pass })
        }
    }
}

impl MethodArg {
    fn name(&self) -> &'static str {
        match self {
            MethodArg::Exact => "exact",
            MethodArg::Mc => "mc",
        }
    }
}

fn own_model(space: &Space) -> Result<(DirectionSpace, Curvature)> {
    match space {
        Space::Cone(c) => Ok((c.sigma().clone(), c.kappa())),
        Space::Glued(g) => Ok((g.cone().sigma().clone(), g.cone().kappa())),
        Space::Analytic(a @ AnalyticSpace::RoundSphere { .. }) => Ok((a.directions(), a.curvature())),
        other => Err(Error::Unsupported(format!("no comparison model for a {} space", other.kind_name()))),
    }
}

fn parse_triple(text: &str) -> std::result::Result<[f64; 3], InputError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| InputError(format!("--radii `{text}`: {e}")))?;
    parts.try_into().map_err(|_| InputError(format!("--radii `{text}` must be R1,R2,R3")))
}

fn distance_table(args: &DistArgs, tolerance: Option<f64>, glued_only: bool) -> std::result::Result<Table, Failure> {
    if !(args.eps > 0.0 && args.eps.is_finite()) {
        return Err(InputError(format!("--eps must be positive, got {}", args.eps)).into());
    }
    if args.refine == 0 {
        return Err(InputError("--refine must be at least 1".into()).into());
    }
    let space = load_space(&args.space, tolerance)?;
    let mut out = Table::new(&["eps", "distance", "method", "error", "crossings", "nodes"]);
    let graph_rows = |out: &mut Table, f: &dyn Fn(f64) -> Result<crate::glue::GluedDistance>| -> Result<()> {
        let mut eps = args.eps;
        for _ in 0..args.refine {
            let d = f(eps)?;
            out.push(vec![
                Cell::Num(eps),
                Cell::Num(d.value),
                Cell::Text("graph".into()),
                Cell::Num(d.error_bound),
                Cell::Int(d.crossings as u64),
                Cell::Int(d.nodes as u64),
            ]);
            eps /= 2.0;
        }
        Ok(())
    };
    match &space {
        Space::Glued(g) => {
            let (x, y) = (parse_cone_point(g.cone(), &args.from)?, parse_cone_point(g.cone(), &args.to)?);
            graph_rows(&mut out, &|eps| g.distance(&x, &y, eps))?;
        }
        Space::Polygon(p) => {
            let (x, y) = (parse_plane_point(&args.from)?, parse_plane_point(&args.to)?);
            graph_rows(&mut out, &|eps| p.distance(x, y, eps))?;
        }
        other if glued_only => {
            return Err(Error::Unsupported(format!("glued-dist needs a glued or polygon space, got {}", other.kind_name())).into())
        }
        Space::Cone(c) => {
            let d = cone_distance(c, &args.from, &args.to)?;
            out.push(exact_row(d));
        }
        Space::Direction(s) => {
            let d = s.distance(&parse_direction(s, &args.from)?, &parse_direction(s, &args.to)?)?;
            out.push(exact_row(d));
        }
        Space::Analytic(_) => return Err(Error::Unsupported("distances on round_sphere spaces".into()).into()),
    }
    Ok(out)
}

fn cone_distance(c: &ConeSpace, from: &str, to: &str) -> Result<f64> {
    c.distance(&parse_cone_point(c, from)?, &parse_cone_point(c, to)?)
}

fn exact_row(d: f64) -> Vec<Cell> {
    vec![Cell::Empty, Cell::Num(d), Cell::Text("exact".into()), Cell::Num(0.0), Cell::Int(0), Cell::Int(0)]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TubeInput {
    n: usize,
    epsilon: f64,
    #[serde(default)]
    gaps: Option<Vec<f64>>,
    #[serde(default)]
    centers: Option<Vec<Vec<f64>>>,
}

/// Area of the union of two ε-disks with centers `d` apart.
fn two_disk_area(eps: f64, d: f64) -> f64 {
    let lens = 2.0 * eps * eps * (d / (2.0 * eps)).acos() - 0.5 * d * (4.0 * eps * eps - d * d).sqrt();
    2.0 * std::f64::consts::PI * eps * eps - lens
}

fn tube_check(json: &str, samples: u64, seed: u64) -> std::result::Result<(Table, bool), Failure> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let input: TubeInput = serde_path_to_error::deserialize(de)
        .map_err(|e| InputError(format!("at `{}`: {}", e.path(), e.inner())))?;
    let mut out = Table::new(&["method", "value", "error"]);
    let row = |m: &str, v: f64, e: f64| vec![Cell::Text(m.into()), Cell::Num(v), Cell::Num(e)];
    let mut pass = true;
    let (centers, exact) = match (input.gaps, input.centers) {
        (Some(gaps), None) => {
            let chain = BallChain::new(input.n, input.epsilon, gaps)?;
            let exact = tube_volume_exact(&chain);
            out.push(row("exact", exact, 0.0));
            if input.n == 2 && chain.gaps.len() == 1 {
                let closed = two_disk_area(chain.epsilon, chain.gaps[0]);
                pass &= (closed - exact).abs() <= 1e-9;
                out.push(row("closed_form", closed, 0.0));
            }
            match tube_volume_expansion(&chain) {
                Ok(e) => {
                    pass &= (e.value - exact).abs() <= e.bound;
                    out.push(row("expansion", e.value, e.bound));
                }
                Err(Error::ExpansionDomain(msg)) => eprintln!("kcone: expansion skipped: {msg}"),
                Err(e) => return Err(e.into()),
            }
            (chain.collinear_centers(), Some(exact))
        }
        (None, Some(centers)) => (centers, None),
        _ => return Err(InputError("give exactly one of `gaps` and `centers`".into()).into()),
    };
    let mc = union_volume_mc(input.n, input.epsilon, &centers, samples, seed)?;
    if let Some(exact) = exact {
        pass &= (mc.value - exact).abs() <= MC_SIGMAS * mc.error_value();
    }
    out.push(row("mc", mc.value, mc.error_value()));
    Ok((out, pass))
}
