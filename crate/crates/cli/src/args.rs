use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cptdp::SolveConfig;

#[derive(Debug, Parser)]
#[command(
    name = "cptdp",
    version,
    about = "CPT evaluation, estimation and risk-sensitive dynamic programming"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the CPT value of a discrete distribution.
    Evaluate(EvaluateArgs),
    /// Run an estimator convergence study against a known distribution.
    Estimate(EstimateArgs),
    /// Solve a model by CPT value iteration.
    Solve(SolveArgs),
    /// Check monotonicity, contraction and transience conditions.
    Check(CheckArgs),
    /// Solve a generated corpus and aggregate the results.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub dist: PathBuf,
    /// Also print the gain and loss integrals.
    #[arg(long)]
    pub parts: bool,
    /// Cross-check against adaptive quadrature at this tolerance.
    #[arg(long)]
    pub quadrature_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Distribution to sample from; its exact CPT value is the ground truth.
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    /// Sup-norm residual at which value iteration stops.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Grid resolution of the action-simplex search.
    #[arg(long, default_value_t = 10)]
    pub simplex_res: usize,
    #[arg(long, default_value_t = 2)]
    pub refine_steps: usize,
    /// Restrict the search to pure actions.
    #[arg(long)]
    pub deterministic_only: bool,
}

impl SolverFlags {
    pub fn config(&self) -> SolveConfig {
        SolveConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            simplex_resolution: self.simplex_res,
            refine_steps: self.refine_steps,
            deterministic_only: self.deterministic_only,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Directory for report.toml and residuals.csv; the report goes to
    /// stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub spec: PathBuf,
    /// Random trials per probe.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest K tried by the K-step probe.
    #[arg(long, default_value_t = 20)]
    pub k_max: usize,
    /// Laws in the contraction family live on [0, c * z_scale].
    #[arg(long, default_value_t = 2.0)]
    pub z_scale: f64,
    /// Directory for check.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report validation failures as table rows instead of refusing the
    /// model; also accepts specs whose components fail validation.
    #[arg(long)]
    pub allow_invalid: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Corpus description (TOML).
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the master seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write each generated instance to models/instance_<i>.toml.
    #[arg(long)]
    pub save_models: bool,
    #[command(flatten)]
    pub solver: SolverFlags,
}
