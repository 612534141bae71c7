//! Benchmark harness behind the `bench` binary: runs one or all six solvers
//! on a named problem and writes per-run traces plus a summary table.
//!
//! Trace CSV columns are
//! `iter,f,gnorm_inf,gnorm_2,alpha,theta,tau,ls_evals,skipped,tau_fallback`
//! with floats printed to 17 significant digits, so the files parse back to
//! the exact in-memory values.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Objective;
use crate::linesearch::LineSearchParams;
use crate::problems::{PinnPoisson1D, Problem, QuadraticProblem, RosenbrockProblem};
use crate::solver::{solve, ConvergenceTrace, Counters, SolverConfig};
use crate::updates::UpdateVariant;

pub const CSV_HEADER: &str =
    "iter,f,gnorm_inf,gnorm_2,alpha,theta,tau,ls_evals,skipped,tau_fallback";
pub const SUMMARY_HEADER: &str = "solver,problem,status,qn_iters,ls_steps,f_evals,g_evals,update_skips,tau_fallbacks,h_resets,final_f,final_gnorm_inf,l2_error,wall_time_s";

pub const MAX_DIM: usize = 10_000;
pub const MAX_WIDTH: usize = 1_000;
pub const MAX_POINTS: usize = 100_000;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Quadratic,
    Rosenbrock,
    Pinn1d,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// `all` or a single solver name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverSelection {
    All,
    One(UpdateVariant),
}

impl SolverSelection {
    pub fn variants(&self) -> Vec<UpdateVariant> {
        match self {
            SolverSelection::All => UpdateVariant::ALL.to_vec(),
            SolverSelection::One(v) => vec![*v],
        }
    }
}

fn parse_solver(s: &str) -> Result<SolverSelection, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(SolverSelection::All);
    }
    s.parse().map(SolverSelection::One).map_err(|_| {
        format!("unknown solver `{s}` (expected one of bfgs, ssbfgs, dfp, ssdfp, broyden, ssbroyden, all)")
    })
}

/// Command line of the `bench` binary.
#[derive(Clone, Debug, Parser)]
#[command(
    name = "bench",
    about = "Compare self-scaled Broyden family solvers on a benchmark problem"
)]
pub struct BenchArgs {
    /// bfgs, ssbfgs, dfp, ssdfp, broyden, ssbroyden or all
    #[arg(long, value_parser = parse_solver)]
    pub solver: SolverSelection,
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    /// Dimension for quadratic (default 10) and rosenbrock (default 2, even)
    #[arg(long)]
    pub n: Option<usize>,
    /// Hidden width for pinn1d (default 8)
    #[arg(long)]
    pub m: Option<usize>,
    /// Interior collocation points for pinn1d (default 32)
    #[arg(long)]
    pub npoints: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub c1: f64,
    #[arg(long, default_value_t = 0.9)]
    pub c2: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

/// Problem and size selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemSpec {
    Quadratic { n: usize },
    Rosenbrock { n: usize },
    Pinn { width: usize, points: usize },
}

impl ProblemSpec {
    pub fn build(self) -> crate::Result<Problem> {
        Ok(match self {
            ProblemSpec::Quadratic { n } => Problem::Quadratic(QuadraticProblem::graded(n)?),
            ProblemSpec::Rosenbrock { n } => Problem::Rosenbrock(RosenbrockProblem::new(n)?),
            ProblemSpec::Pinn { width, points } => {
                Problem::Pinn(PinnPoisson1D::new(width, points)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSpecification {
    pub solvers: Vec<UpdateVariant>,
    pub problem: ProblemSpec,
    pub tol: f64,
    pub max_iters: usize,
    pub line_search: LineSearchParams,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

impl BenchArgs {
    pub fn into_spec(self) -> Result<RunSpecification, BenchError> {
        let usage = |msg: String| Err(BenchError::Usage(msg));
        let problem = match self.problem {
            ProblemKind::Quadratic | ProblemKind::Rosenbrock => {
                if self.m.is_some() || self.npoints.is_some() {
                    return usage("--m and --npoints only apply to pinn1d".into());
                }
                let quadratic = self.problem == ProblemKind::Quadratic;
                let n = self.n.unwrap_or(if quadratic { 10 } else { 2 });
                if n == 0 || n > MAX_DIM {
                    return usage(format!("--n must be in 1..={MAX_DIM}"));
                }
                if quadratic {
                    ProblemSpec::Quadratic { n }
                } else {
                    if !n.is_multiple_of(2) {
                        return usage("rosenbrock needs an even --n".into());
                    }
                    ProblemSpec::Rosenbrock { n }
                }
            }
            ProblemKind::Pinn1d => {
                if self.n.is_some() {
                    return usage("pinn1d is sized with --m and --npoints, not --n".into());
                }
                let width = self.m.unwrap_or(PinnPoisson1D::DEFAULT_WIDTH);
                let points = self.npoints.unwrap_or(PinnPoisson1D::DEFAULT_POINTS);
                if width == 0 || width > MAX_WIDTH {
                    return usage(format!("--m must be in 1..={MAX_WIDTH}"));
                }
                if points == 0 || points > MAX_POINTS {
                    return usage(format!("--npoints must be in 1..={MAX_POINTS}"));
                }
                ProblemSpec::Pinn { width, points }
            }
        };
        if !(self.tol > 0.0) {
            return usage("--tol must be positive".into());
        }
        if self.max_iters == 0 {
            return usage("--max-iters must be at least 1".into());
        }
        let line_search = LineSearchParams {
            c1: self.c1,
            c2: self.c2,
            ..LineSearchParams::default()
        };
        line_search
            .validate()
            .map_err(|e| BenchError::Usage(e.to_string()))?;
        Ok(RunSpecification {
            solvers: self.solver.variants(),
            problem,
            tol: self.tol,
            max_iters: self.max_iters,
            line_search,
            out_dir: self.out,
            format: self.format,
        })
    }
}

/// One row of the summary table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub solver: String,
    pub problem: String,
    pub status: String,
    pub qn_iters: usize,
    pub ls_steps: usize,
    pub f_evals: usize,
    pub g_evals: usize,
    pub update_skips: usize,
    pub tau_fallbacks: usize,
    pub h_resets: usize,
    pub final_f: f64,
    pub final_gnorm_inf: f64,
    /// RMS error against the exact solution; PINN runs only.
    pub l2_error: Option<f64>,
    pub wall_time_s: f64,
}

impl RunSummary {
    pub fn converged(&self) -> bool {
        self.status == "converged"
    }
}

/// Outcome of one solver within a benchmark.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub summary: RunSummary,
    pub counters: Counters,
    pub trace: Option<ConvergenceTrace>,
    pub trace_path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub runs: Vec<RunResult>,
    pub summary_path: PathBuf,
}

impl BenchReport {
    pub fn all_converged(&self) -> bool {
        self.runs.iter().all(|r| r.summary.converged())
    }

    /// Process exit status: 0 when every run converged, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_converged() {
            0
        } else {
            1
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a trace as CSV.
pub fn trace_to_csv(trace: &ConvergenceTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &trace.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.k,
            fmt_f64(r.f),
            fmt_f64(r.gnorm_inf),
            fmt_f64(r.gnorm_2),
            fmt_f64(r.alpha),
            fmt_f64(r.theta),
            fmt_f64(r.tau),
            r.ls_evals,
            u8::from(r.skipped),
            u8::from(r.tau_fallback),
        );
    }
    out
}

/// JSON trace record; `theta` and `tau` are `null` for skipped updates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonRecord {
    pub iter: usize,
    pub f: f64,
    pub gnorm_inf: f64,
    pub gnorm_2: f64,
    pub alpha: f64,
    pub theta: Option<f64>,
    pub tau: Option<f64>,
    pub ls_evals: usize,
    pub skipped: bool,
    pub tau_fallback: bool,
}

/// Summary embedded in a JSON trace. Wall time is left out so trace files
/// stay reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonTraceSummary {
    pub status: String,
    pub initial_f: f64,
    pub final_f: f64,
    pub final_gnorm_inf: f64,
    pub l2_error: Option<f64>,
    pub counters: Counters,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonTrace {
    pub solver: String,
    pub problem: String,
    pub summary: JsonTraceSummary,
    pub records: Vec<JsonRecord>,
}

fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Renders a trace and its run summary as JSON.
pub fn trace_to_json(
    trace: &ConvergenceTrace,
    summary: &RunSummary,
    counters: &Counters,
) -> String {
    let doc = JsonTrace {
        solver: summary.solver.clone(),
        problem: summary.problem.clone(),
        summary: JsonTraceSummary {
            status: summary.status.clone(),
            initial_f: trace.initial_f,
            final_f: summary.final_f,
            final_gnorm_inf: summary.final_gnorm_inf,
            l2_error: summary.l2_error,
            counters: *counters,
        },
        records: trace
            .records
            .iter()
            .map(|r| JsonRecord {
                iter: r.k,
                f: r.f,
                gnorm_inf: r.gnorm_inf,
                gnorm_2: r.gnorm_2,
                alpha: r.alpha,
                theta: finite_or_none(r.theta),
                tau: finite_or_none(r.tau),
                ls_evals: r.ls_evals,
                skipped: r.skipped,
                tau_fallback: r.tau_fallback,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("trace serializes");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), BenchError> {
    fs::write(path, contents).map_err(|source| BenchError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes `trace` to `path` in the requested format.
pub fn emit_trace(
    trace: &ConvergenceTrace,
    summary: &RunSummary,
    counters: &Counters,
    format: OutputFormat,
    path: &Path,
) -> Result<(), BenchError> {
    let contents = match format {
        OutputFormat::Csv => trace_to_csv(trace),
        OutputFormat::Json => trace_to_json(trace, summary, counters),
    };
    write_file(path, &contents)
}

/// Renders the summary table as CSV.
pub fn summary_to_csv(rows: &[RunSummary]) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{:.6}",
            r.solver,
            r.problem,
            r.status,
            r.qn_iters,
            r.ls_steps,
            r.f_evals,
            r.g_evals,
            r.update_skips,
            r.tau_fallbacks,
            r.h_resets,
            fmt_f64(r.final_f),
            fmt_f64(r.final_gnorm_inf),
            r.l2_error.map(fmt_f64).unwrap_or_default(),
            r.wall_time_s,
        );
    }
    out
}

fn run_one(problem: &Problem, variant: UpdateVariant, spec: &RunSpecification) -> RunResult {
    let config = SolverConfig::new(variant)
        .with_grad_tol(spec.tol)
        .with_max_iters(spec.max_iters)
        .with_line_search(spec.line_search);
    let start = Instant::now();
    let outcome = solve(problem, &problem.default_start(), config);
    let wall_time_s = start.elapsed().as_secs_f64();
    match outcome {
        Ok(sol) => {
            let c = sol.counters;
            let l2_error = match problem {
                Problem::Pinn(p) => Some(p.l2_error(&sol.state.x)),
                _ => None,
            };
            RunResult {
                summary: RunSummary {
                    solver: variant.name().into(),
                    problem: problem.name().into(),
                    status: sol.status().as_str().into(),
                    qn_iters: c.qn_iters,
                    ls_steps: c.ls_steps,
                    f_evals: c.f_evals,
                    g_evals: c.g_evals,
                    update_skips: c.update_skips,
                    tau_fallbacks: c.tau_fallbacks,
                    h_resets: c.h_resets,
                    final_f: sol.state.f,
                    final_gnorm_inf: sol.state.g.norm_inf(),
                    l2_error,
                    wall_time_s,
                },
                counters: c,
                trace: Some(sol.trace),
                trace_path: None,
            }
        }
        Err(e) => RunResult {
            summary: RunSummary {
                solver: variant.name().into(),
                problem: problem.name().into(),
                status: format!("error: {e}").replace(',', ";"),
                qn_iters: 0,
                ls_steps: 0,
                f_evals: 0,
                g_evals: 0,
                update_skips: 0,
                tau_fallbacks: 0,
                h_resets: 0,
                final_f: f64::NAN,
                final_gnorm_inf: f64::NAN,
                l2_error: None,
                wall_time_s,
            },
            counters: Counters::default(),
            trace: None,
            trace_path: None,
        },
    }
}

/// Runs every requested solver (concurrently), writes one trace per run and
/// a summary file, and returns the collected results in canonical solver
/// order.
pub fn run_benchmark(spec: &RunSpecification) -> Result<BenchReport, BenchError> {
    if spec.solvers.is_empty() {
        return Err(BenchError::Usage("no solvers requested".into()));
    }
    let problem = spec
        .problem
        .build()
        .map_err(|e| BenchError::Usage(e.to_string()))?;
    debug_assert_eq!(problem.default_start().len(), problem.dim());
    fs::create_dir_all(&spec.out_dir).map_err(|source| BenchError::Io {
        path: spec.out_dir.clone(),
        source,
    })?;

    let mut runs: Vec<RunResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = spec
            .solvers
            .iter()
            .map(|&variant| {
                let problem = &problem;
                scope.spawn(move || run_one(problem, variant, spec))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });

    let ext = spec.format.extension();
    for run in &mut runs {
        if let Some(trace) = &run.trace {
            let path = spec.out_dir.join(format!(
                "{}_{}.{ext}",
                run.summary.problem, run.summary.solver
            ));
            emit_trace(trace, &run.summary, &run.counters, spec.format, &path)?;
            run.trace_path = Some(path);
        }
    }

    let rows: Vec<RunSummary> = runs.iter().map(|r| r.summary.clone()).collect();
    let summary_path = spec.out_dir.join(format!("summary.{ext}"));
    let contents = match spec.format {
        OutputFormat::Csv => summary_to_csv(&rows),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("summary serializes");
            s.push('\n');
            s
        }
    };
    write_file(&summary_path, &contents)?;
    Ok(BenchReport { runs, summary_path })
}

/// Fixed-width table of the summary rows for terminal output.
pub fn format_table(rows: &[RunSummary]) -> String {
    let mut out = format!(
        "{:<10} {:<20} {:>8} {:>9} {:>8} {:>12} {:>12} {:>10}\n",
        "solver", "status", "qn_iters", "ls_steps", "f_evals", "final_f", "final_|g|", "time_s"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<10} {:<20} {:>8} {:>9} {:>8} {:>12.4e} {:>12.4e} {:>10.4}",
            r.solver,
            r.status,
            r.qn_iters,
            r.ls_steps,
            r.f_evals,
            r.final_f,
            r.final_gnorm_inf,
            r.wall_time_s
        );
    }
    out
}
