//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

#[derive(Debug, Parser)]
#[command(name = "conformal", version, about = "Conformal prediction regions and validity audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-values, confidence, credibility and label regions for a new object.
    PredictClass(PredictArgs),
    /// Exact conformal (or Gaussian) regions for the real label of a new object.
    PredictReg(PredictArgs),
    /// Region for the next value from old values alone.
    PredictOld(OldArgs),
    /// Fisher's t-interval for the next value.
    Fisher(OldArgs),
    /// Gaussian linear-model interval for a new object.
    Gaussian(PredictArgs),
    /// On-line evaluation: predict each label from its predecessors.
    Evaluate(EvaluateArgs),
    /// On-line evaluation of the stream and of random reorderings of it.
    Permute(PermuteArgs),
    /// Betting audit of an error sequence.
    BetAudit(BetArgs),
    /// Reruns a worked example end to end.
    Replicate(ReplicateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Dataset CSV; `czuber.csv` and `iris25.csv` resolve to bundled copies
    /// when no such file exists.
    #[arg(long)]
    pub data: PathBuf,

    /// Label column (default: the last column).
    #[arg(long)]
    pub label_column: Option<String>,

    /// Feature columns, comma-separated (default: all but the label).
    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<String>>,
}

#[derive(Debug, Clone, Args)]
pub struct LevelArgs {
    /// Significance level; repeatable.
    #[arg(long = "epsilon", default_values_t = [0.05])]
    pub epsilons: Vec<f64>,

    /// Report real regions on the lattice with this step (overrides the
    /// dataset sidecar).
    #[arg(long)]
    pub grid: Option<f64>,

    /// Lattice origin used with `--grid`.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub grid_origin: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub levels: LevelArgs,

    /// Nonconformity measure.
    #[arg(long)]
    pub measure: Option<String>,

    /// On-line compression model.
    #[arg(long)]
    pub model: Option<String>,

    /// New object, comma-separated. Without it the last row is the new
    /// example and its label is withheld.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct OldArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub levels: LevelArgs,

    /// Nonconformity measure (`predict-old` only).
    #[arg(long)]
    pub measure: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,

    #[arg(long)]
    pub measure: Option<String>,

    #[arg(long)]
    pub model: Option<String>,

    /// Write cumulative error, empty and multiple-prediction counts as CSV.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PermuteArgs {
    #[command(flatten)]
    pub eval: EvaluateArgs,

    #[arg(long, default_value_t = 20)]
    pub trials: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BetArgs {
    /// File of 0/1 error indicators, whitespace- or comma-separated.
    #[arg(long, conflicts_with = "data")]
    pub errors: Option<PathBuf>,

    /// Evaluate this dataset on-line and audit its errors.
    #[arg(long)]
    pub data: Option<PathBuf>,

    #[arg(long)]
    pub label_column: Option<String>,

    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<String>>,

    #[arg(long)]
    pub measure: Option<String>,

    #[arg(long)]
    pub model: Option<String>,

    /// Price of an error indicator; must lie in (0, 1/2).
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,

    /// Excess frequency `δ₂` for the large-deviation check.
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Study {
    /// Fisher's and the conformal interval for the next Czuber value.
    Czuber,
    /// Species of the 25th iris from sepal length, three measures.
    IrisClass,
    /// Petal width of the 25th iris from sepal length, three methods.
    IrisReg,
    /// Repeated samples of 25 from a user-supplied 100-flower file.
    IrisResample,
}

#[derive(Debug, Clone, Args)]
pub struct ReplicateArgs {
    #[arg(value_enum)]
    pub study: Study,

    /// 100-flower CSV for `iris-resample` (columns `sepal_length`,
    /// `species`).
    #[arg(long)]
    pub data: Option<PathBuf>,

    #[arg(long)]
    pub label_column: Option<String>,

    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<String>>,

    #[arg(long, default_value_t = 1000)]
    pub trials: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Level for `iris-resample`.
    #[arg(long, default_value_t = 0.08)]
    pub epsilon: f64,
}
