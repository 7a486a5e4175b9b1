use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "freestein",
    version,
    about = "Free Stein kernels, discrepancies and Poincaré constants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Noncommutative derivatives of a polynomial or tuple.
    Derive(DeriveArgs),
    /// Stein discrepancy bounds for a potential.
    Stein(SteinArgs),
    /// Truncated Poincaré constant and upper bounds.
    Poincare(PoincareArgs),
    /// CLT rate table (CSV).
    Clt(CltArgs),
    /// Monte Carlo moment table from a matrix ensemble.
    Mc(McArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum What {
    Partial,
    Delta,
    CyclicGradient,
    Jacobian,
    ExplicitKernel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Semicircular,
    FreePoisson,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    /// Polynomial JSON (tuple JSON for `jacobian`), or `quadratic` / `coordinates`.
    #[arg(long)]
    pub input: String,
    #[arg(long, value_enum)]
    pub what: What,
    /// Variable for `partial`, 1-based.
    #[arg(long)]
    pub index: Option<usize>,
    /// Number of variables for the builtin inputs.
    #[arg(long)]
    pub nvars: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
pub struct StateArgs {
    /// Moment table JSON.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Free cumulant JSON.
    #[arg(long)]
    pub cumulants: Option<PathBuf>,
    /// Matrix ensemble JSON, sampled on the fly.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    /// Builtin cumulant state.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Args, Debug)]
pub struct StateOpts {
    #[command(flatten)]
    pub source: StateArgs,
    /// Variables for `--preset`.
    #[arg(long, default_value_t = 1)]
    pub nvars: usize,
    /// Moment order sampled from `--ensemble`.
    #[arg(long, default_value_t = 8)]
    pub max_order: usize,
    /// Overrides the seed of `--ensemble`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Default)]
pub struct TolArgs {
    #[arg(long, value_parser = positive)]
    pub tol_admissibility: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_psd: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_pinv: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_identity: Option<f64>,
}

#[derive(Args, Debug)]
pub struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SteinArgs {
    #[command(flatten)]
    pub state: StateOpts,
    /// Potential JSON or `quadratic`.
    #[arg(long, default_value = "quadratic")]
    pub potential: String,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    /// Upper bound on the Poincaré constant, enabling the Poincaré upper bound.
    #[arg(long, value_parser = positive)]
    pub poincare_constant: Option<f64>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct PoincareArgs {
    #[command(flatten)]
    pub state: StateOpts,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    /// Also run the gap check against the Stein discrepancy.
    #[arg(long)]
    pub biane: bool,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct CltArgs {
    /// Base cumulant JSON; defaults to the centered free Poisson law.
    #[arg(long, conflicts_with = "preset")]
    pub cumulants: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, default_value_t = 1)]
    pub nvars: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
    pub ks: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct McArgs {
    /// Ensemble JSON; otherwise independent GUE matrices.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub nvars: usize,
    /// Matrix size.
    #[arg(long = "size", short = 'N', default_value_t = 100)]
    pub size: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 8)]
    pub max_order: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive and finite, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}
