//! `isokappa` command line: table emitters, verification suites and the data
//! behind the two potential figures.

mod commands;
pub mod output;

use crate::classical::{ClassicalError, IntegrationError};
use crate::model::{ModelError, SystemParams};
use crate::spectrum::{BConvention, SpectrumError};
use crate::verify::Suite;
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::Format;
use serde::Serialize;
use std::path::PathBuf;
use thiserror::Error;

/// Default output directory when `--out` is not given.
pub const OUT_DIR_ENV: &str = "ISOKAPPA_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "isokappa",
    version,
    about = "κ-deformed isotonic oscillator: classical and quantum tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kg: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub hbar: f64,
}

impl ParamArgs {
    pub fn system(&self) -> Result<SystemParams, ModelError> {
        SystemParams::new(self.mass, self.alpha, self.kappa, self.kg, self.hbar)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output format (csv for tables, json for `verify`, when omitted)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (a directory for `figures`); defaults to $ISOKAPPA_OUT_DIR or stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Numerical tolerance override (quadrature or integrator)
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Trig,
    Hyperbolic,
    Border,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Classical,
    Quantum,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Classical => Suite::Classical,
            SuiteArg::Quantum => Suite::Quantum,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BConventionArg {
    Derived,
    Printed,
}

impl From<BConventionArg> for BConvention {
    fn from(b: BConventionArg) -> Self {
        match b {
            BConventionArg::Derived => BConvention::Derived,
            BConventionArg::Printed => BConvention::Printed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum FigureArg {
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
    #[value(name = "all")]
    #[serde(rename = "all")]
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample V(x) on (0, x_max] for one or more κ
    Potential {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated κ list; overrides --kappa
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        kappas: Vec<f64>,
        #[arg(long, default_value_t = 1.4)]
        x_max: f64,
        #[arg(long, default_value_t = 140)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form trajectory, optionally against the numerical integrator
    Classical {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Amplitude A (trig and hyperbolic families)
        #[arg(long)]
        amplitude: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phase: f64,
        /// Linear coefficient B (border family)
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
        /// End time; three periods (or 3) when omitted
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        /// Also integrate the equation of motion and report the deviation
        #[arg(long)]
        integrate: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Energy levels, gaps, normalization constants and spectrum flags
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of levels requested
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Add Sturm–Liouville convergence columns from a grid of this many cells
        #[arg(long)]
        oracle_cells: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Normalized wave functions Ψ_n(x), n < n_max
    Wavefunction {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Upper end of the x grid; chosen from the highest level when omitted
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the property suites; exit status 1 on any failure
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = BConventionArg::Derived)]
        b_convention: BConventionArg,
        /// Fine-grid cell count for the eigenvalue oracle
        #[arg(long, default_value_t = 4096)]
        cells: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Data behind the potential figures (k_g = 1, x ∈ (0, 1.4])
    Figures {
        #[arg(long, value_enum, default_value_t = FigureArg::All)]
        figure: FigureArg,
        #[arg(long, default_value_t = 140)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Potential { .. } => "potential",
            Command::Classical { .. } => "classical",
            Command::Spectrum { .. } => "spectrum",
            Command::Wavefunction { .. } => "wavefunction",
            Command::Verify { .. } => "verify",
            Command::Figures { .. } => "figures",
        }
    }
}

/// Everything a run depends on; echoed into every output header.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: Option<SystemParams>,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
    pub tol: Option<f64>,
    pub options: serde_json::Value,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Outcome of a successful dispatch; `verify` may still report failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    commands::dispatch(cli.command)
}

/// Parses `args`, runs, and maps the result to a process exit code:
/// 0 on success, 1 on failed checks, 2 on errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::ChecksFailed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
