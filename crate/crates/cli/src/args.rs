use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use quadtrace_core::Evaluator;
use serde::{Deserialize, Serialize};

use crate::functions::FunctionSpec;

#[derive(Debug, Parser)]
#[command(
    name = "quadtrace",
    version,
    about = "Stochastic trace estimation with half-cost quadratic forms z^T p(A) z"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chebyshev-interpolate a function and write the coefficient file.
    Interpolate(InterpolateArgs),
    /// Estimate tr f(A) with one or more evaluators over shared probes.
    Estimate(EstimateArgs),
    /// Paired one-/two-sided run on a random matrix rescaled to [-1, 1]: exp(10x), degree 20, 100 probes.
    Reproduce(ReproduceArgs),
    /// Print how many matrix-vector products each evaluator needs.
    MatvecCount(MatvecCountArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Bounds {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `lo,hi`, got `{s}`"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        };
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("interval [{lo}, {hi}] must be finite with lo < hi"));
        }
        Ok(Bounds { lo, hi })
    }
}

/// Where the spectral interval comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum IntervalSource {
    /// Extremal eigenvalues from a dense eigendecomposition.
    Exact,
    /// Power-iteration estimates widened by a safety margin.
    Power,
    User(Bounds),
}

impl FromStr for IntervalSource {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(IntervalSource::Exact),
            "power" => Ok(IntervalSource::Power),
            other => other.parse().map(IntervalSource::User),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    /// One `key = value` line per field.
    Text,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    /// exp_scaled[:c], inverse_shifted[:eps], log_shifted[:eps], power:p, identity, poly:c0,c1,...
    #[arg(long)]
    pub function: FunctionSpec,
    #[arg(long)]
    pub degree: usize,
    /// Interval as `lo,hi`.
    #[arg(long, allow_hyphen_values = true, default_value = "-1,1")]
    pub interval: Bounds,
    /// Coefficient file to write; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["matrix", "synthetic"])))]
pub struct MatrixArgs {
    /// Matrix Market file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Random symmetric (B + B^T)/2 matrix of this dimension.
    #[arg(long)]
    pub synthetic: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub matrix_seed: u64,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ExecutionArgs {
    /// Evaluate probes on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Worker threads for parallel probe evaluation (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct OutputArgs {
    /// Result file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Also write a per-probe CSV table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
#[command(group(ArgGroup::new("polynomial").required(true).args(["function", "coeffs"])))]
pub struct EstimateArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Function f in tr f(A); see `interpolate --help`.
    #[arg(long)]
    pub function: Option<FunctionSpec>,
    /// Use this coefficient file instead of interpolating; the operator is
    /// rescaled by the file's interval.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub degree: usize,
    #[arg(long, default_value_t = 100)]
    pub probes: usize,
    /// Probe seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "one-sided-chebyshev,two-sided-chebyshev"
    )]
    pub evaluators: Vec<Evaluator>,
    /// exact | power | lo,hi
    #[arg(long, allow_hyphen_values = true, default_value = "exact")]
    pub interval: IntervalSource,
    #[arg(long, default_value_t = 500)]
    pub power_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub power_tol: f64,
    /// Outward margin for power-iteration bounds, relative to the half-width.
    #[arg(long, default_value_t = 0.01)]
    pub margin: f64,
    /// Apply f to the operator after mapping its spectral interval onto [-1, 1].
    #[arg(long)]
    pub normalize: bool,
    /// Record per-term contributions and compare them across evaluators.
    #[arg(long)]
    pub terms: bool,
    /// Also compute tr f(A) and tr p(A) by dense eigendecomposition.
    #[arg(long)]
    pub exact_trace: bool,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub execution: ExecutionArgs,
}

#[derive(Debug, Args, Clone)]
pub struct ReproduceArgs {
    /// Run at d = 5000 (needs about 1 GB and minutes of eigendecomposition).
    #[arg(long, conflicts_with = "desk")]
    pub full: bool,
    /// Dimension for a desk-scale run.
    #[arg(long, default_value_t = 200)]
    pub desk: usize,
    #[arg(long, default_value_t = 100)]
    pub probes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub matrix_seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub execution: ExecutionArgs,
}

#[derive(Debug, Args)]
pub struct MatvecCountArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long, value_delimiter = ',')]
    pub evaluators: Vec<Evaluator>,
}
