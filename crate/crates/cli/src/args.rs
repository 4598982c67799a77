use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsign::simgen::{CovarianceKind, Distribution, MeanKind};
use gsign::ScalingKind;
use serde::Deserialize;

use crate::config::Dim;

#[derive(Debug, Parser)]
#[command(
    name = "gsign",
    version,
    about = "Generalized-sign tests for the mean of high-dimensional data"
)]
pub struct Cli {
    /// Worker threads [default: number of cores]
    #[arg(long, global = true, env = "GSIGN_THREADS")]
    pub threads: Option<usize>,

    /// Do not report progress on standard error
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One-sample test of H0: mu = mu0 (mu0 = 0 unless --mu0 is given)
    TestOne(TestOneArgs),
    /// Two-sample test of H0: mu1 = mu2
    TestTwo(TestTwoArgs),
    /// Power study of a simulated scenario over a grid of shifts
    Simulate(SimulateArgs),
    /// Two-sample tests between every pair of classes of a labeled dataset
    Pairwise(PairwiseArgs),
    /// Monte-Carlo null distribution of a scenario's statistic
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    #[value(alias = "polynomial")]
    #[serde(alias = "polynomial")]
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Test parameters shared by every subcommand.
#[derive(Debug, Default, Args)]
pub struct TestArgs {
    /// Scaling function D: identity, l1, l2 or linf [default: l2]
    #[arg(long)]
    pub scaling: Option<ScalingKind>,

    /// Zeroing threshold for D(x) [default: n^(-8/p)]
    #[arg(long)]
    pub threshold: Option<f64>,

    /// Kernel [default: linear]
    #[arg(long, value_enum)]
    pub kernel: Option<KernelKind>,

    /// Polynomial kernel offset a; a number or "p" for the dimension [default: 1]
    #[arg(long = "a", value_name = "A")]
    pub offset: Option<Dim>,

    /// Polynomial kernel degree b; an integer or "p" for the dimension [default: 2]
    #[arg(long = "b", value_name = "B")]
    pub degree: Option<Dim>,

    /// Number of randomization resamples [default: 1000]
    #[arg(long = "B", value_name = "COUNT")]
    pub resamples: Option<usize>,

    /// Significance level [default: 0.05]
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct OutputArgs {
    /// Write the result to this file
    #[arg(long, conflicts_with = "stdout")]
    pub out: Option<PathBuf>,

    /// Write the result to standard output (the default when --out is absent)
    #[arg(long)]
    pub stdout: bool,

    /// Output format [default: from the --out extension, else json for test results and csv otherwise]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct TestOneArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Data CSV, one observation per row
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// File with the hypothesized mean, one value per line or comma separated [default: 0]
    #[arg(long)]
    pub mu0: Option<PathBuf>,

    /// The data file starts with a header row
    #[arg(long)]
    pub header: bool,

    /// Resampling seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub test: TestArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TestTwoArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// First sample CSV
    #[arg(long, requires = "data2", conflicts_with = "data")]
    pub data1: Option<PathBuf>,

    /// Second sample CSV
    #[arg(long, requires = "data1")]
    pub data2: Option<PathBuf>,

    /// Single CSV holding both samples; needs --label-column or --score-column with --quantile
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Column naming each row's group; exactly two distinct values, the first in sorted order is group 1
    #[arg(long, conflicts_with = "score_column")]
    pub label_column: Option<String>,

    /// Column of trait scores used by --quantile
    #[arg(long, requires = "quantile")]
    pub score_column: Option<String>,

    /// Compare the top and bottom k percent of rows by score, 0 < k < 50
    #[arg(long, value_name = "K")]
    pub quantile: Option<f64>,

    /// The data files start with a header row (implied by --label-column and --score-column)
    #[arg(long)]
    pub header: bool,

    /// Resampling seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub test: TestArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PairwiseArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Labeled data CSV with a header row
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Column holding each row's class
    #[arg(long)]
    pub label_column: Option<String>,

    /// Master seed; each class pair derives its own stream from it [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub test: TestArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

/// Scenario parameters shared by `simulate` and `oracle`.
#[derive(Debug, Default, Args)]
pub struct ScenarioArgs {
    /// JSON scenario file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Generating distribution [default: mvg]
    #[arg(long, value_enum)]
    pub distribution: Option<DistributionArg>,

    /// Covariance structure [default: ar]
    #[arg(long, value_enum)]
    pub covariance: Option<CovarianceArg>,

    /// Autoregressive correlation rho [default: 0.5]
    #[arg(long)]
    pub rho: Option<f64>,

    /// Pattern of the shifted mean [default: dense]
    #[arg(long, value_enum)]
    pub mean: Option<MeanArg>,

    /// One-sample design with n observations
    #[arg(long, conflicts_with_all = ["n1", "n2"])]
    pub n: Option<usize>,

    /// Two-sample design: size of the first (unshifted) group
    #[arg(long, requires = "n2")]
    pub n1: Option<usize>,

    /// Two-sample design: size of the second (shifted) group
    #[arg(long, requires = "n1")]
    pub n2: Option<usize>,

    /// Dimension
    #[arg(long)]
    pub p: Option<usize>,

    /// Master seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub test: TestArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    /// Comma-separated shifts [default: the grid for the design, covariance and mean]
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,

    /// Datasets per shift [default: 1000]
    #[arg(long)]
    pub replications: Option<usize>,

    /// Also test against an oracle null built from S simulated null datasets
    #[arg(long, value_name = "S")]
    pub oracle: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    /// Number of simulated null datasets [default: the config's "oracle" count, else 2000]
    #[arg(long, value_name = "S")]
    pub draws: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistributionArg {
    Mvg,
    T3,
    T3UnitCov,
}

impl From<DistributionArg> for Distribution {
    fn from(d: DistributionArg) -> Self {
        match d {
            DistributionArg::Mvg => Distribution::Mvg,
            DistributionArg::T3 => Distribution::T3,
            DistributionArg::T3UnitCov => Distribution::T3UnitCov,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CovarianceArg {
    Ar,
    Sar,
}

impl From<CovarianceArg> for CovarianceKind {
    fn from(c: CovarianceArg) -> Self {
        match c {
            CovarianceArg::Ar => CovarianceKind::Ar,
            CovarianceArg::Sar => CovarianceKind::Sar,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MeanArg {
    Zero,
    Sparse,
    Dense,
}

impl From<MeanArg> for MeanKind {
    fn from(m: MeanArg) -> Self {
        match m {
            MeanArg::Zero => MeanKind::Zero,
            MeanArg::Sparse => MeanKind::Sparse,
            MeanArg::Dense => MeanKind::Dense,
        }
    }
}
