use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Erdős–Rényi limit constants: solvers, simulations and random matrix
/// experiments.
#[derive(Debug, Parser)]
#[command(name = "erlimit", version, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical constant α(C) for fixed windows of length C ln n.
    SolveClassical {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        constant: ConstArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stochastic constant α̃(C) for random windows with mean C ln n.
    SolveStochastic {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        constant: ConstArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo maxima of window averages, one row per trial.
    Simulate {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        constant: ConstArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Sequence length n.
        #[arg(long)]
        n: Option<usize>,
        /// Fixed window length; overrides ⌊C ln n⌋.
        #[arg(long)]
        k: Option<usize>,
        /// Mean window length; overrides C ln n.
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Median and quartiles of the simulated maxima over a grid of n.
    Sweep {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        constant: ConstArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Increasing sequence lengths, comma separated.
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<usize>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Spectral norm and row statistics of sparse weighted random matrices.
    Spectral {
        /// Matrix dimension N.
        #[arg(long = "N")]
        big_n: Option<usize>,
        /// Expected row density; overrides C ln N [default: ln N].
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        constant: ConstArgs,
        /// Weight law [default: bernoulli].
        #[arg(long, value_enum)]
        weights: Option<WeightKind>,
        /// Weight standard deviation v [default: 1].
        #[arg(long)]
        v: Option<f64>,
        /// Sample the diagonal too.
        #[arg(long)]
        include_diagonal: bool,
        /// Relative Rayleigh-quotient tolerance of the power iteration [default: 1e-12].
        #[arg(long)]
        power_tol: Option<f64>,
        /// Power iteration limit [default: 1000000].
        #[arg(long)]
        max_iter: Option<usize>,
        /// Run the dense/sparse regime comparison for these γ ∈ (0, 1) instead.
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<f64>>,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// α(c) next to α̃(c) over a grid of constants.
    Compare {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        window: WindowArgs,
        /// Base-2 constants, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "big_c_grid")]
        c_grid: Option<Vec<f64>>,
        /// Natural-log constants, comma separated.
        #[arg(long = "C-grid", value_delimiter = ',')]
        big_c_grid: Option<Vec<f64>>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    Bernoulli,
    Gaussian,
    SquaredGaussian,
    Degenerate,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    Fixed,
    Poisson,
    Deterministic,
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    Bernoulli,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionKind {
    KTerms,
    KPlus1Terms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct LawArgs {
    /// Increment law [default: bernoulli].
    #[arg(long, value_enum)]
    pub law: Option<LawKind>,
    /// Variance of the gaussian law, or of the weight for squared-gaussian [default: 1].
    #[arg(long)]
    pub variance: Option<f64>,
    /// Constant of the degenerate law [default: 1].
    #[arg(long)]
    pub value: Option<f64>,
    /// CSV file with columns tau,logphi for the tabulated law.
    #[arg(long)]
    pub cgf_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstArgs {
    /// Constant in bits: windows of length c log₂ n.
    #[arg(long, conflicts_with = "big_c")]
    pub c: Option<f64>,
    /// Constant in nats: windows of length C ln n (C = c / ln 2).
    #[arg(long = "C")]
    pub big_c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Window law [default: poisson for solvers, fixed for simulations].
    #[arg(long, value_enum)]
    pub window: Option<WindowKind>,
    /// Lower end of the bounded window support, in units of its mean [default: 0.5].
    #[arg(long)]
    pub y_lo: Option<f64>,
    /// Upper end of the bounded window support [default: 2].
    #[arg(long)]
    pub y_hi: Option<f64>,
    /// Nominal mean of the bounded window used by the solvers [default: 30].
    #[arg(long)]
    pub p_nominal: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Solver tolerance [default: 1e-8].
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Number of trials [default: 16].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Run seed [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Terms per window of nominal length k [default: k-terms].
    #[arg(long, value_enum)]
    pub convention: Option<ConventionKind>,
    /// Largest window length a trial may draw [default: 1000000].
    #[arg(long)]
    pub lambda_cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// TOML file with default values; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output format [default: csv].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file [default: standard output].
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Leave the timestamp out of JSON metadata and report wall_ms as 0.
    #[arg(long)]
    pub no_timestamp: bool,
    /// Run trials on a single thread.
    #[arg(long)]
    pub sequential: bool,
}
