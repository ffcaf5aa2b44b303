use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

/// Certified Ramsey-number upper bounds: evaluators, interval verifier,
/// parameter search and small clique experiments.
#[derive(Debug, Parser)]
#[command(name = "ramsey", version, propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Precedence: flag, then config file,
/// then the built-in default.
#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// `key = value` file with any of the settings below (use `_` or `-`)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format [default: text; csv for `table`]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Working precision in bits [default: 128]
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Seed for every randomised step; echoed in the output [default: 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Zero all wall-clock fields so reruns are byte-identical
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Deepest bisection level per initial cell [default: 60]
    #[arg(long, global = true)]
    pub max_depth: Option<u32>,
    /// Total bisection cells per stage [default: 2000000]
    #[arg(long, global = true)]
    pub max_cells: Option<usize>,
    /// Left end of the certified range [default: 1e-6]
    #[arg(long, global = true, value_name = "Q")]
    pub lambda_min: Option<String>,
    /// Hand-over point between the derivative and the value checks [default: 0.05]
    #[arg(long, global = true, value_name = "Q")]
    pub split_point: Option<String>,
    /// Required lower bound of psi on [split, 1] [default: 1e-4]
    #[arg(long, global = true, value_name = "Q")]
    pub psi_floor: Option<String>,
    /// Required lower bound of psi' on [lambda_min, split] [default: 0.01]
    #[arg(long, global = true, value_name = "Q")]
    pub psi_prime_floor: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify exponent stages with interval arithmetic (default: the four-stage chain)
    Verify(VerifyArgs),
    /// Evaluate upper bounds for R(k, l)
    Bound(BoundArgs),
    /// Tabulate F, M, X, Y, psi, G and the corollary's ratio exponent over a lambda grid
    Table(TableArgs),
    /// Search for the smallest feasible beta at each stage
    Optimize(OptimizeArgs),
    /// Locate the l/k ratio below which the corollary beats Erdos-Szekeres
    Crossover,
    /// Run the clique-finding descent on a random or given colouring
    CliqueDemo(CliqueDemoArgs),
    /// Compute a small Ramsey number exactly by exhaustive search
    RamseyExact(RamseyExactArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Verify the chain (0, 0.08), (0.09/e, 0.045), (0.125/e, 0.033), (0.137/e, 0.03) [default mode]
    #[arg(long, conflicts_with_all = ["alpha", "beta", "chain"])]
    pub paper_chain: bool,
    /// Alpha of a single stage, e.g. 0 or 0.09/e [default: 0]
    #[arg(long, requires = "beta", conflicts_with = "chain")]
    pub alpha: Option<String>,
    /// Beta of a single stage, in [0, 0.1]
    #[arg(long, conflicts_with = "chain")]
    pub beta: Option<String>,
    /// Comma-separated alpha:beta stages, first alpha 0
    #[arg(long, value_name = "A:B,...")]
    pub chain: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Es,
    EsProduct,
    ThmEasy,
    CorEasy,
    MainExponent,
    Multicolor,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Red clique size
    #[arg(long, default_value_t = 10)]
    pub k: u32,
    /// Blue clique size
    #[arg(long, default_value_t = 10, conflicts_with = "l_parts")]
    pub l: u32,
    /// Clique sizes of the non-red colours, comma-separated (multicolour bound)
    #[arg(long, value_name = "L1,L2,...")]
    pub l_parts: Option<String>,
    /// Bounds to print; repeatable [default: every method that applies]
    #[arg(long, value_enum)]
    pub method: Vec<Method>,
    /// x for es-product [default: k/(k+l)]
    #[arg(long, value_name = "Q")]
    pub x: Option<String>,
    /// Rational p for thm-easy [default: the optimal p, an element of Q(sqrt5)]
    #[arg(long, value_name = "Q")]
    pub p: Option<String>,
    /// beta for main-exponent [default: 0.03]
    #[arg(long, value_name = "Q")]
    pub beta: Option<String>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// lambda step; rows at step, 2*step, ..., up to 1
    #[arg(long, default_value = "0.01", value_name = "Q")]
    pub grid: String,
    /// Index 0..=3 into the four-stage chain
    #[arg(long, default_value_t = 3)]
    pub stage: usize,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Maximum number of stages
    #[arg(long, default_value_t = 4)]
    pub stages: usize,
    /// beta grid step
    #[arg(long, default_value = "1e-3", value_name = "Q")]
    pub resolution: String,
    /// Run the exploratory piecewise construction with this many intervals instead
    #[arg(long, value_name = "N")]
    pub piecewise: Option<usize>,
    /// Slope lattice of the piecewise search
    #[arg(long, default_value_t = 1e-3)]
    pub slope_grid: f64,
    /// M lattice of the piecewise search
    #[arg(long, default_value_t = 1e-3)]
    pub m_grid: f64,
    /// Smooth fit of the piecewise profile
    #[arg(long, value_enum, default_value_t = FitArg::BetaOnly)]
    pub fit: FitArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FitArg {
    BetaOnly,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Exhaustive,
    RandomLocal,
}

#[derive(Debug, Args)]
pub struct CliqueDemoArgs {
    /// Vertex count of the random colouring; the default clears the size
    /// bound for the default k, l and p
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    /// Red clique size
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Blue clique size
    #[arg(long, default_value_t = 2, conflicts_with = "l_parts")]
    pub l: u32,
    /// Clique sizes of the non-red colours, comma-separated
    #[arg(long, value_name = "L1,L2,...")]
    pub l_parts: Option<String>,
    /// Density parameter p in ((3 - sqrt5)/2, 1)
    #[arg(long, default_value = "1/2", value_name = "Q")]
    pub p: String,
    /// Probability of a red edge in the random colouring
    #[arg(long, default_value_t = 0.9)]
    pub red: f64,
    /// Read the colouring from a file ("n c" header, then "u v colour" lines)
    #[arg(long, value_name = "PATH", conflicts_with_all = ["n", "red"])]
    pub coloring: Option<PathBuf>,
    /// Save the colouring used
    #[arg(long, value_name = "PATH")]
    pub save_coloring: Option<PathBuf>,
    /// Partition search
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
    /// Random restarts for random-local
    #[arg(long, default_value_t = 64)]
    pub tries: usize,
    /// Skip the check that n reaches the theorem's vertex bound
    #[arg(long)]
    pub no_size_check: bool,
}

#[derive(Debug, Args)]
pub struct RamseyExactArgs {
    /// Red clique size
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Blue clique size
    #[arg(long, default_value_t = 3, conflicts_with = "l_parts")]
    pub l: u32,
    /// Clique sizes of the non-red colours, comma-separated
    #[arg(long, value_name = "L1,L2,...")]
    pub l_parts: Option<String>,
    /// Largest vertex count searched
    #[arg(long, default_value_t = 16)]
    pub n_max: u32,
}
