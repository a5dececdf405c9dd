//! `proxkit` command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use proxkit::certify::DEFAULT_SEED;

/// Certify prox-regularity numerically, apply parameter rules and tabulate
/// proximal averages. Reports are JSON, tables are CSV.
///
/// Exit status: 0 pass, 1 fail (witness in the report), 2 usage or oracle
/// error, 3 inconclusive (too few localized samples).
#[derive(Debug, Parser)]
#[command(name = "proxkit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog functions and their known properties.
    Catalog(CatalogArgs),
    /// Check a certificate (x̄, λ̄, v̄, ε, r) or replay a witness.
    Check(CheckArgs),
    /// Search ε and r grids for a certificate.
    Search(SearchArgs),
    /// Apply a parameter rule to JSON input, optionally certifying the result.
    Calculus(CalculusArgs),
    /// Tabulate proximal averages as CSV.
    Pa(PaArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Write the listing here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Catalog id or path to a piecewise-polynomial spec (JSON).
    #[arg(long)]
    pub function: String,
    /// Base point x̄, comma separated [default: origin].
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub xbar: Option<Vec<f64>>,
    /// Base parameter λ̄, comma separated; required for parametrized functions.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lambdabar: Option<Vec<f64>>,
    /// Base subgradient v̄, comma separated [default: origin].
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub vbar: Option<Vec<f64>>,
    /// Lattice points per axis of the x sampler.
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    /// Sampler seed; PROXKIT_SEED takes precedence when set.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Hold λ at λ̄ instead of sampling a neighbourhood.
    #[arg(long)]
    pub freeze_lambda: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckChoice {
    /// Quadratic minorant over the localization.
    Direct,
    /// Localized hypomonotonicity of the subdifferential.
    Monotone,
    /// Minorant at the base tuple only.
    ProximalSubgradient,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = CheckChoice::Direct)]
    pub check: CheckChoice,
    /// Also write the witness of a failing check to this file.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Re-evaluate a witness (or a report carrying one) against --function.
    /// Exit 0 when the recorded margin is reproduced.
    #[arg(long)]
    pub replay_witness: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Candidate ε values, tried from largest to smallest.
    #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25,0.1,0.05,0.01,0.001")]
    pub eps_grid: Vec<f64>,
    /// Candidate r values, tried from smallest to largest.
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.5,1,2,5,10,20,50,100,1000,5000,10000")]
    pub r_grid: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Scalar,
    ScalarPara,
    Sum,
    Wsum,
    ParaSum,
    ParaMax,
    Amenable,
}

#[derive(Debug, Args)]
pub struct CalculusArgs {
    #[arg(long, value_enum)]
    pub rule: Rule,
    /// JSON input file, `-` for stdin. Fields: params [{eps, r}], lambda,
    /// lambdabar, functions, xbar, vbar, eps, map, x_box, y_box, constants.
    #[arg(long, default_value = "-")]
    pub input: String,
    /// Certify the composite built from `functions` with the emitted (ε, r).
    #[arg(long)]
    pub validate: bool,
    /// Lattice points per axis of the validation sampler.
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PaArgs {
    #[arg(long)]
    pub f0: String,
    #[arg(long)]
    pub f1: String,
    /// Interval of the tabulation grid.
    #[arg(long = "box", num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-2.0, 2.0])]
    pub bounds: Vec<f64>,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    /// Envelope parameter of the nonconvex average.
    #[arg(long, default_value_t = 4.0)]
    pub r: f64,
    /// Weights λ, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub lambda: Vec<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::Status::Error as u8)
        }
    }
}
