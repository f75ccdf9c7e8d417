//! Command-line front end over the forecasting library.

pub mod commands;
pub mod config;
mod ingest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{KeyValues, RunConfig, TrainSpec};
pub use ingest::{ingest_csv, IngestError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("data: {0}")]
    Data(#[from] IngestError),
    #[error("data: {0}")]
    Shape(boundcast::Error),
    #[error("numeric failure: {0}")]
    Numeric(boundcast::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// 0 success, 1 configuration, 2 data, 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 1,
            CliError::Data(_) | CliError::Shape(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<boundcast::Error> for CliError {
    fn from(e: boundcast::Error) -> Self {
        use boundcast::Error as E;
        match e {
            E::InvalidParameter(m) => CliError::Config(m),
            E::SeriesTooShort { .. }
            | E::InsufficientData { .. }
            | E::InvalidSeries(_)
            | E::NonPositiveValue { .. }
            | E::DegenerateTrend(_)
            | E::EmptySplit { .. }
            | E::ZeroActual(_) => CliError::Shape(e),
            other => CliError::Numeric(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "boundcast",
    version,
    about = "Bound-minimizing non-parametric time-series forecasting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forecast the next values after the training prefix.
    Predict(Options),
    /// Leave-one-out grid search on the training prefix.
    Tune(Options),
    /// Tune and test every model and horizon; write report and trajectories.
    Benchmark(Options),
    /// Print a report CSV as an aligned table.
    Report {
        /// Report file written by `benchmark`.
        path: PathBuf,
    },
}

/// Flags shared by all run commands. Each overrides the matching config key.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub data: Option<String>,
    /// Column name or 0-based index (default: last column).
    #[arg(long)]
    pub column: Option<String>,
    /// Comma-separated transform steps, or `none`.
    #[arg(long)]
    pub transform: Option<String>,
    #[arg(long)]
    pub train_len: Option<String>,
    #[arg(long)]
    pub train_fraction: Option<String>,
    #[arg(long)]
    pub test_len: Option<String>,
    /// original or log10.
    #[arg(long)]
    pub metric_scale: Option<String>,
    #[arg(long)]
    pub order: Option<String>,
    /// Regressor kind; `custom:<terms>` lists explicit terms.
    #[arg(long)]
    pub regressor: Option<String>,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub l_const: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub bandwidth: Option<String>,
    /// Numbers and start:stop:step ranges, comma separated.
    #[arg(long)]
    pub gamma_grid: Option<String>,
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub bandwidth_grid: Option<String>,
    #[arg(long)]
    pub horizons: Option<String>,
    #[arg(long)]
    pub criterion: Option<String>,
    /// Model ids such as CP, AR, NW1, LL3; NW and LL expand over --kernel.
    #[arg(long, alias = "model")]
    pub models: Option<String>,
    /// Held-out training pairs per grid value; 0 or `all` for every pair.
    #[arg(long)]
    pub cv_folds: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
}

impl Options {
    fn flag_values(&self) -> KeyValues {
        let mut kv = KeyValues::default();
        let pairs = [
            ("data", &self.data),
            ("column", &self.column),
            ("transform", &self.transform),
            ("train_len", &self.train_len),
            ("train_fraction", &self.train_fraction),
            ("test_len", &self.test_len),
            ("metric_scale", &self.metric_scale),
            ("order", &self.order),
            ("regressor", &self.regressor),
            ("sigma", &self.sigma),
            ("l_const", &self.l_const),
            ("gamma", &self.gamma),
            ("bandwidth", &self.bandwidth),
            ("gamma_grid", &self.gamma_grid),
            ("kernel", &self.kernel),
            ("bandwidth_grid", &self.bandwidth_grid),
            ("horizons", &self.horizons),
            ("criterion", &self.criterion),
            ("models", &self.models),
            ("cv_folds", &self.cv_folds),
            ("out", &self.out),
            ("seed", &self.seed),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                kv.set(k, v.clone());
            }
        }
        kv
    }

    /// Config file values overridden by flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => KeyValues::load(path)?,
            None => KeyValues::default(),
        };
        RunConfig::from_key_values(&base.merged(&self.flag_values()))
    }
}

/// Runs a parsed command, printing results to standard output.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Predict(o) => {
            let lines = commands::cmd_predict(&o.resolve()?)?;
            print!("{}", commands::predictions_csv(&lines)?);
        }
        Command::Tune(o) => {
            let sel = commands::cmd_tune(&o.resolve()?)?;
            print!("{}", commands::selections_csv(&sel)?);
        }
        Command::Benchmark(o) => {
            let cfg = o.resolve()?;
            let report = commands::cmd_benchmark(&cfg)?;
            print!("{}", boundcast::eval::report_table(&report.rows));
        }
        Command::Report { path } => {
            print!("{}", commands::cmd_report(&path)?);
        }
    }
    Ok(())
}
