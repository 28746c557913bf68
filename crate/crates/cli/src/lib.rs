#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a < b)` also rejects NaN
//! Command-line front end for `nhqb`: single computations, parameter sweeps,
//! trajectories, oracle verification and figure data, all written as CSV.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 numerical failure,
//! 3 verification residual or figure check exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub mod config;
pub mod run;

pub use config::{Command, Grid, Model, RunConfig, Value};
pub use run::{execute, Outcome, Status, VerifyCase};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("numerical failure ({context}): {source}")]
    Numerical { context: String, source: nhqb::Error },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical { .. } => 2,
            CliError::Verification(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nhqb", version, about = "Non-Hermitian quantum brachistochrone calculations")]
pub struct Cli {
    /// What to run; may also be given as `command = ...` in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one config key (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Residual threshold for `verify`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Maximum number of concurrently evaluated sweep cells (0 = all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut overrides = self.set;
        if let Some(out) = &self.out {
            overrides.push(format!("out = {}", out.display()));
        }
        if let Some(tol) = self.tol {
            overrides.push(format!("tol = {tol:e}"));
        }
        if let Some(jobs) = self.jobs {
            overrides.push(format!("jobs = {jobs}"));
        }
        RunConfig::load(self.command, self.config.as_deref(), &overrides)
    }
}

/// Executes `cfg` and writes its CSV to `cfg.output` (stdout when unset).
/// The CSV is written before a numerical or verification status is reported.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let outcome = execute(cfg)?;
    let text = outcome.table.render();
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    match outcome.status {
        Status::Ok => Ok(()),
        Status::Failed(err) => Err(err),
    }
}

/// Full CLI entry point; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.into_config().and_then(|cfg| run(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("nhqb: {e}");
            e.exit_code()
        }
    }
}
