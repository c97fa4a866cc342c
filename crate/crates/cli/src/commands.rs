//! Command definitions and their execution.
//!
//! Every command reports through its exit code: 0 on success, 1 on invalid
//! input and 2 when a solver ran out of iterations. Result documents are
//! single-line JSON on standard output; diagnostics go to standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bargain_core::solver::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use bargain_core::{
    discretize, simulate_threat_mean, solve_cloud, solve_frontier, solve_polygon,
    solve_polygon_frontier, threat_point, ConvexPolygon, CornerPair, OracleError, Point, Region,
    Solution, SolverConfig, SolverError, ThreatError, TraceRecord,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::problem::{parse_problem, Problem, ProblemError, ProblemFile};
use crate::trace::{write_trace, TraceFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// Arc vertices used when a frontier problem is solved as a polygon.
pub const INSCRIBED_ARC_VERTICES: usize = 1024;
pub const DEFAULT_RESOLUTION: f64 = 1e-3;
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "bargain",
    version,
    about = "Bargaining solutions under a coin-flip threat"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem and print the solution.
    Solve(SolveArgs),
    /// Write the per-iteration trace as CSV.
    Trace(TraceArgs),
    /// Sample the threat lottery.
    Simulate(SimulateArgs),
    /// Print the corners and the threat point.
    Threat(InputArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Problem file (JSON).
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Convergence tolerance; overrides the problem file.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap; overrides the problem file.
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Defaults to the problem's own kind.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Lattice spacing for the oracle.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: f64,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Defaults to the problem's own kind.
    #[arg(long, value_enum)]
    pub method: Option<TraceMethod>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Polygon,
    Frontier,
    Oracle,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceMethod {
    Polygon,
    Frontier,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Problem { path: PathBuf, source: ProblemError },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Threat(#[from] ThreatError),
    #[error("cannot write trace: {0}")]
    Trace(#[from] TraceFileError),
}

/// What a command produced: the bytes for standard output and whether every
/// solver converged.
#[derive(Debug)]
struct Output {
    stdout: Vec<u8>,
    converged: bool,
}

impl Output {
    fn document<T: Serialize>(doc: &T, converged: bool) -> Self {
        let mut stdout = serde_json::to_vec(doc).expect("document serializes");
        stdout.push(b'\n');
        Output { stdout, converged }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            if stdout.write_all(&out.stdout).is_err() {
                return EXIT_INVALID;
            }
            if out.converged {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "bargain: solver did not converge");
                EXIT_NOT_CONVERGED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "bargain: {e}");
            EXIT_INVALID
        }
    }
}

fn execute(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Trace(args) => cmd_trace(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Threat(args) => cmd_threat(args),
    }
}

fn load(path: &Path) -> Result<(ProblemFile, Problem), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let wrap = |source| CliError::Problem {
        path: path.to_owned(),
        source,
    };
    let file = parse_problem(&text).map_err(wrap)?;
    let problem = file.build().map_err(wrap)?;
    Ok((file, problem))
}

fn config(file: &ProblemFile, args: &SolverArgs) -> Result<SolverConfig, CliError> {
    let cfg = SolverConfig {
        tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
        max_iter: args.max_iter.or(file.max_iter).unwrap_or(DEFAULT_MAX_ITER),
        record_trace: false,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Keeps the partial solution of a run that hit the iteration cap.
fn settle(result: Result<Solution, SolverError>) -> Result<Solution, CliError> {
    match result {
        Ok(s) => Ok(s),
        Err(SolverError::NotConverged(s)) => Ok(*s),
        Err(e) => Err(e.into()),
    }
}

fn as_polygon(problem: &Problem) -> Result<ConvexPolygon, CliError> {
    Ok(match problem {
        Problem::Polygon(p) => p.clone(),
        Problem::Frontier(f) => f
            .inscribe(INSCRIBED_ARC_VERTICES)
            .map_err(SolverError::from)?,
    })
}

fn solve_with(
    problem: &Problem,
    method: Method,
    cfg: &SolverConfig,
    resolution: f64,
) -> Result<MethodResult, CliError> {
    let (point, iterations, converged) = match method {
        Method::Polygon => {
            let s = settle(solve_polygon(&as_polygon(problem)?, cfg))?;
            (s.point, s.iterations, s.converged)
        }
        Method::Frontier => {
            let s = settle(match problem {
                Problem::Polygon(p) => solve_polygon_frontier(p, cfg),
                Problem::Frontier(f) => solve_frontier(f, cfg),
            })?;
            (s.point, s.iterations, s.converged)
        }
        Method::Oracle => {
            let region: &dyn Region = match problem {
                Problem::Polygon(p) => p,
                Problem::Frontier(f) => f,
            };
            let s = solve_cloud(&discretize(region, resolution)?);
            (s.point, s.passes, true)
        }
        Method::All => unreachable!("expanded by the caller"),
    };
    Ok(MethodResult {
        c: point.into(),
        iterations,
        converged,
        method: name(method),
    })
}

fn name(method: Method) -> &'static str {
    match method {
        Method::Polygon => "polygon",
        Method::Frontier => "frontier",
        Method::Oracle => "oracle",
        Method::All => "all",
    }
}

fn default_method(problem: &Problem) -> Method {
    match problem {
        Problem::Polygon(_) => Method::Polygon,
        Problem::Frontier(_) => Method::Frontier,
    }
}

#[derive(Debug, Serialize)]
struct MethodResult {
    c: [f64; 2],
    iterations: usize,
    converged: bool,
    method: &'static str,
}

#[derive(Debug, Serialize)]
struct AllResult {
    results: Vec<MethodResult>,
    /// Largest coordinate difference over all pairs of methods.
    max_deviation: f64,
    converged: bool,
    method: &'static str,
}

fn cmd_solve(args: &SolveArgs) -> Result<Output, CliError> {
    let (file, problem) = load(&args.input.input)?;
    let cfg = config(&file, &args.solver)?;
    if !(args.resolution > 0.0 && args.resolution.is_finite()) {
        return Err(OracleError::BadResolution(args.resolution).into());
    }
    let method = args.method.unwrap_or_else(|| default_method(&problem));
    if method != Method::All {
        let r = solve_with(&problem, method, &cfg, args.resolution)?;
        let converged = r.converged;
        return Ok(Output::document(&r, converged));
    }

    let results = [Method::Polygon, Method::Frontier, Method::Oracle]
        .into_iter()
        .map(|m| solve_with(&problem, m, &cfg, args.resolution))
        .collect::<Result<Vec<_>, _>>()?;
    let mut max_deviation = 0.0f64;
    for (i, a) in results.iter().enumerate() {
        for b in &results[i + 1..] {
            max_deviation = max_deviation.max(Point::from(a.c).max_abs_diff(b.c.into()));
        }
    }
    let converged = results.iter().all(|r| r.converged);
    let doc = AllResult {
        results,
        max_deviation,
        converged,
        method: "all",
    };
    Ok(Output::document(&doc, converged))
}

#[derive(Debug, Serialize)]
struct TraceResult {
    c: [f64; 2],
    iterations: usize,
    converged: bool,
    method: &'static str,
    rows: usize,
}

fn cmd_trace(args: &TraceArgs) -> Result<Output, CliError> {
    let (file, problem) = load(&args.input.input)?;
    let cfg = config(&file, &args.solver)?.with_trace();
    let method = args.method.unwrap_or(match problem {
        Problem::Polygon(_) => TraceMethod::Polygon,
        Problem::Frontier(_) => TraceMethod::Frontier,
    });
    let solution = settle(match (method, &problem) {
        (TraceMethod::Polygon, _) => solve_polygon(&as_polygon(&problem)?, &cfg),
        (TraceMethod::Frontier, Problem::Polygon(p)) => solve_polygon_frontier(p, &cfg),
        (TraceMethod::Frontier, Problem::Frontier(f)) => solve_frontier(f, &cfg),
    })?;

    let Some(path) = &args.output else {
        let mut stdout = Vec::new();
        write_trace(&mut stdout, &solution.trace)?;
        return Ok(Output {
            stdout,
            converged: solution.converged,
        });
    };
    write_trace_file(path, &solution.trace)?;
    let doc = TraceResult {
        c: solution.point.into(),
        iterations: solution.iterations,
        converged: solution.converged,
        method: match method {
            TraceMethod::Polygon => "polygon",
            TraceMethod::Frontier => "frontier",
        },
        rows: solution.trace.len(),
    };
    Ok(Output::document(&doc, solution.converged))
}

fn write_trace_file(path: &Path, rows: &[TraceRecord]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    let file = fs::File::create(path).map_err(io)?;
    write_trace(std::io::BufWriter::new(file), rows)?;
    Ok(())
}

fn corners(problem: &Problem) -> CornerPair {
    match problem {
        Problem::Polygon(p) => p.corner_points(),
        Problem::Frontier(f) => f.corners(),
    }
}

#[derive(Debug, Serialize)]
struct ThreatResult {
    right: [f64; 2],
    top: [f64; 2],
    threat: [f64; 2],
}

fn cmd_threat(args: &InputArgs) -> Result<Output, CliError> {
    let (_, problem) = load(&args.input)?;
    let c = corners(&problem);
    let doc = ThreatResult {
        right: c.right.into(),
        top: c.top.into(),
        threat: threat_point(&c).into(),
    };
    Ok(Output::document(&doc, true))
}

#[derive(Debug, Serialize)]
struct SimulateResult {
    right: [f64; 2],
    top: [f64; 2],
    threat: [f64; 2],
    mean: [f64; 2],
    standard_error: [f64; 2],
    /// `|mean - threat| / standard_error`; `null` when the error is zero but
    /// the mean is off the threat point.
    z: [Option<f64>; 2],
    right_count: u64,
    samples: u64,
    seed: u64,
}

fn z_score(mean: f64, threat: f64, se: f64) -> Option<f64> {
    let gap = (mean - threat).abs();
    if se > 0.0 {
        Some(gap / se)
    } else if gap == 0.0 {
        Some(0.0)
    } else {
        None
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Output, CliError> {
    let (_, problem) = load(&args.input.input)?;
    let c = corners(&problem);
    let t = threat_point(&c);
    let stats = simulate_threat_mean(&c, args.samples, args.seed)?;
    let doc = SimulateResult {
        right: c.right.into(),
        top: c.top.into(),
        threat: t.into(),
        mean: stats.mean.into(),
        standard_error: stats.standard_error.into(),
        z: [
            z_score(stats.mean.x, t.x, stats.standard_error.x),
            z_score(stats.mean.y, t.y, stats.standard_error.y),
        ],
        right_count: stats.right_count,
        samples: stats.n,
        seed: args.seed,
    };
    Ok(Output::document(&doc, true))
}
