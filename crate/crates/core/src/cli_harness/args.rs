// SPDX-License-Identifier: Apache-2.0
//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "cubic-shapes", version, about = "Count cubic rings of fixed shape and compare with main terms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count orbit representatives for one shape and one X.
    Count(CountArgs),
    /// Evaluate main-term coefficients and predictions.
    Predict(PredictArgs),
    /// Count over a list of X and compare with the prediction.
    Compare(CompareArgs),
    /// Table densities against exhaustive residue counts.
    Densities(DensityArgs),
    /// Class group representatives of a discriminant.
    Classgroup(DiscArgs),
    /// Fundamental solution of u² - D w² = 4.
    Pell(DiscArgs),
    /// Pure cubic field counts against the independent oracle.
    Oracle(OracleArgs),
    /// Log-spaced X sweep for plotting.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    None,
    Irreducible,
    Maximal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Fast,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Every coefficient for `--disc` (JSON only).
    Coefficients,
    /// Oriented orders from `h(D)` and `L(1, χ_D)`.
    Analytic,
    /// Oriented orders from the fundamental domain of `--shape`.
    Geometric,
    /// Maximal orders of one shape of discriminant `--disc`.
    Maximal,
    /// Cubic fields with quadratic resolvent discriminant `--disc`.
    Resolvent,
    /// Cyclic-resolvent fields (Cohn's constant).
    Cohn,
    /// Orders with square shape discriminant `--disc` (two terms, needs `--x`).
    SquareOrders,
    /// Pure fields of shape discriminant 1 (needs `--x`).
    PureQ1,
    /// Pure fields of one shape of discriminant 9 (needs `--x`).
    PureQ9,
    /// All pure cubic fields (needs `--x`).
    PureAll,
    /// The constants C and κ.
    Constants,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Counting {
    /// Which points to count.
    #[arg(long, value_enum, default_value = "irreducible")]
    pub filter: FilterArg,
    /// Test maximality only at primes up to this bound.
    #[arg(long)]
    pub sieve_bound: Option<u64>,
    /// Counting strategy.
    #[arg(long, value_enum, default_value = "fast")]
    pub engine: EngineArg,
    /// Worker threads.
    #[arg(long, env = "CUBIC_SHAPES_THREADS")]
    pub threads: Option<usize>,
    /// Prime bound for truncated Euler products.
    #[arg(long, default_value_t = crate::asymptotics::DEFAULT_PRIME_BOUND)]
    pub prime_bound: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CountArgs {
    /// Shape coefficients r,s,t.
    #[arg(long, allow_hyphen_values = true)]
    pub shape: String,
    /// Discriminant bound X (integer, `1e10` notation allowed).
    #[arg(long = "x", visible_alias = "X")]
    pub x: String,
    #[command(flatten)]
    pub counting: Counting,
    /// Write one tab-separated line per counted point to this file.
    #[arg(long)]
    pub audit: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[arg(long, allow_hyphen_values = true)]
    pub disc: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub shape: Option<String>,
    /// Evaluate at this X instead of printing the coefficient.
    #[arg(long = "x", visible_alias = "X")]
    pub x: Option<String>,
    #[arg(long, default_value_t = crate::asymptotics::DEFAULT_PRIME_BOUND)]
    pub prime_bound: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub shape: String,
    /// Comma-separated list of X.
    #[arg(long = "x", visible_alias = "X")]
    pub x: String,
    #[command(flatten)]
    pub counting: Counting,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub shape: String,
    #[arg(long)]
    pub x_min: String,
    #[arg(long)]
    pub x_max: String,
    /// Number of log-spaced X values.
    #[arg(long, default_value_t = 10)]
    pub points: u32,
    #[command(flatten)]
    pub counting: Counting,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub shape: String,
    /// Comma-separated primes.
    #[arg(long, default_value = "2,3,5,7,13")]
    pub primes: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DiscArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub disc: i64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Comma-separated list of X.
    #[arg(long = "x", visible_alias = "X")]
    pub x: String,
    /// Also check this many random (form, matrix) pairs against the Hessian identities.
    #[arg(long, default_value_t = 0)]
    pub identities: u64,
    /// Seed for the random pairs.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}
