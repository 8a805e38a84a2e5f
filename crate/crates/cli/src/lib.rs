//! Command-line harness: solves, trains, tabulates and plots.
//!
//! Exit codes: 0 success, 2 usage error, 3 divergence, 4 I/O or input-file
//! error.

pub mod commands;
pub mod output;
pub mod plot;
pub mod presets;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use femlearn_core::{CostKind, Regime};

pub use commands::{run, CliError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DIVERGENCE: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "femlearn",
    version,
    about = "Finite elements and the ReLU networks that learn them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the discrete problem and compare with the exact solution.
    Solve(SolveArgs),
    /// Train a network by gradient descent.
    Train(TrainArgs),
    /// Reproduce an error table (1: Galerkin, eps=0.1; 2: SUPG, eps=0.001).
    Table(TableArgs),
    /// Render a trace or solution CSV as SVG.
    Plot(PlotArgs),
    /// List the named experiment presets.
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Galerkin,
    Supg,
}

impl From<Method> for CostKind {
    fn from(m: Method) -> Self {
        match m {
            Method::Galerkin => CostKind::Galerkin,
            Method::Supg => CostKind::Supg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    /// all parameters random and trainable
    R1,
    /// hat-initialized hidden layer, all trainable
    R2,
    /// hat hidden layer frozen, output weights trainable
    R3,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::R1 => Regime::AllFree,
            RegimeArg::R2 => Regime::FeInitFree,
            RegimeArg::R3 => Regime::FeInitFrozen,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Method::Galerkin)]
    pub method: Method,
    /// Solution CSV path.
    #[arg(long, default_value = "solution.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Start from a named preset; other flags override its values.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum)]
    pub cost: Option<Method>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, env = "FEMLEARN_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Output directory for model.txt, trace.csv and solution.csv
    /// (default: runs/<preset or "train">).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the resolved configuration and exit without training.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    #[arg(long, env = "FEMLEARN_SEED", default_value_t = presets::DEFAULT_SEED)]
    pub seed: u64,
    /// Replace every per-N iteration budget (for quick checks).
    #[arg(long)]
    pub iters: Option<usize>,
    /// Report CSV path (default: table<which>.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Trace (`iter,cost,l2_error`) or solution (`x,u_exact,u_approx`) CSV.
    pub input: PathBuf,
    /// SVG path (default: input with an .svg extension).
    #[arg(long)]
    pub out: Option<PathBuf>,
}
