//! The `paffine` command line: `run <config>` executes one experiment or an
//! array of them and writes report.json, samples.csv and plot.csv; `list`
//! prints the known experiments.

pub mod config;
pub mod experiments;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::error::Error;
use config::ExperimentConfig;
use report::{relative_error, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_ASSERT: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad input, unreadable files or a violated precondition.
    Validation(String),
    /// A solver, quadrature or fit gave up.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => EXIT_VALIDATION,
            Self::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Validation(m) => write!(f, "invalid input: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. }
            | Error::ToleranceNotMet { .. }
            | Error::IllConditionedFit { .. }
            | Error::DenominatorUnderflow(_)
            | Error::IntegralDiverged
            | Error::NotSantaloCentered(_) => Self::Numerical(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "paffine", version, about = "Limit experiments for p-affine surface areas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment(s) described by a JSON config.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Exit with code 4 when an experiment misses its acceptance threshold.
        #[arg(long)]
        assert: bool,
        /// Worker threads; falls back to PAFFINE_THREADS, then to all cores.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the experiments with their parameters.
    List,
}

pub fn list_experiments() -> String {
    let mut s = String::new();
    for (name, what, params) in experiments::EXPERIMENTS {
        s.push_str(&format!("{name:<11} {what}\n{:<11} params: {params}\n", ""));
    }
    s
}

fn thread_count(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return if n == 0 {
            Err(Failure::Validation("--threads must be positive".into()))
        } else {
            Ok(n)
        };
    }
    match std::env::var("PAFFINE_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Validation(format!("PAFFINE_THREADS={v} is not a positive integer"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn run_one(
    config: &ExperimentConfig,
    base_dir: &Path,
    out: &Path,
    seed: u64,
    threads: usize,
) -> Result<RunReport, Failure> {
    let start = Instant::now();
    let outcome = experiments::execute(config, base_dir, seed)?;
    let report = RunReport {
        experiment: config.name().into(),
        body_id: outcome.body_id,
        n: outcome.n,
        config: config.clone(),
        grid: outcome.grid,
        rows: outcome.rows,
        limit: outcome.limit,
        fitted_exponent: outcome.fitted_exponent,
        rhs: outcome.rhs,
        rel_err: relative_error(outcome.limit, outcome.rhs),
        tolerance: config.tolerance(),
        passed: outcome.passed,
        seed,
        threads,
        wall_time_s: start.elapsed().as_secs_f64(),
        details: outcome.details,
    };
    fs::create_dir_all(out).map_err(|e| Failure::Validation(format!("{}: {e}", out.display())))?;
    report::write_report(out, &report)?;
    let rows = report.csv_rows();
    report::write_samples(out, &rows)?;
    report::write_plot(out, &rows)?;
    Ok(report)
}

/// Runs every experiment in the config file. A single experiment writes
/// straight into `out`; a batch writes each into `out/<index>_<name>` and a
/// combined report and sample table into `out`.
pub fn run(
    config_path: &Path,
    out: &Path,
    seed: u64,
    threads: usize,
) -> Result<Vec<RunReport>, Failure> {
    let configs = config::load(config_path)?;
    let base_dir = config_path.parent().unwrap_or(Path::new("."));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Validation(e.to_string()))?;
    if configs.len() == 1 {
        return pool.install(|| run_one(&configs[0], base_dir, out, seed, threads).map(|r| vec![r]));
    }
    let reports = pool.install(|| {
        configs
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let dir = out.join(format!("{i:02}_{}", c.name()));
                run_one(c, base_dir, &dir, seed, threads)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    report::write_report(out, &reports)?;
    let rows: Vec<_> = reports.iter().flat_map(|r| r.csv_rows()).collect();
    report::write_samples(out, &rows)?;
    report::write_plot(out, &rows)?;
    Ok(reports)
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::List => {
            print!("{}", list_experiments());
            EXIT_OK
        }
        Command::Run { config, out, assert, threads, seed } => {
            let result = thread_count(threads).and_then(|t| run(&config, &out, seed, t));
            match result {
                Ok(reports) => {
                    for r in &reports {
                        println!(
                            "{} {} limit={} rhs={} rel_err={} passed={} ({:.1}s)",
                            r.experiment,
                            r.body_id,
                            fmt_opt(r.limit),
                            fmt_opt(r.rhs),
                            fmt_opt(r.rel_err),
                            r.passed,
                            r.wall_time_s
                        );
                    }
                    if assert && reports.iter().any(|r| !r.passed) {
                        eprintln!("error: acceptance threshold not met");
                        EXIT_ASSERT
                    } else {
                        EXIT_OK
                    }
                }
                Err(f) => {
                    eprintln!("error: {f}");
                    f.exit_code()
                }
            }
        }
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.6e}"))
}

pub fn run_from_args() -> i32 {
    main_with_args(std::env::args_os())
}
