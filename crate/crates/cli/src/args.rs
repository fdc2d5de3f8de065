use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hyperfit", version, about = "Hypercube user models for content-based recommendation")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for every random choice; echoed in the output.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a user model to every rated item of a data set.
    Fit(FitArgs),
    /// Predict star levels of a data set's items under a given model.
    Predict(PredictArgs),
    /// k-fold cross-validation of a method on one or more users.
    Evaluate(EvaluateArgs),
    /// Prediction error as a function of training set size.
    Curve(CurveArgs),
    /// F-test and t-test on two methods' per-fold errors.
    Stats(StatsArgs),
    /// Generate a synthetic user with a planted model.
    Synth(SynthArgs),
    /// Rating histogram, mean and deviation per user.
    Summarize(SummarizeArgs),
    /// Write the fitting problem as an LP-format MILP.
    ExportMilp(ExportArgs),
    /// Build a data set from generic items and ratings CSV files.
    Convert(ConvertArgs),
    /// Write the fold plan used by `evaluate`.
    Folds(FoldsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// Binary model, Hamming distance.
    Algo1,
    /// Ternary model, don't-care distance.
    Algo2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    /// Branch-and-bound without a budget.
    Exact,
    /// Branch-and-bound with a local-search warm start, within the budget.
    Bnb,
    /// Multi-start local search within the budget.
    Local,
    /// Exhaustive enumeration (small n only).
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FoldModeArg {
    Contiguous,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = SolverArg::Bnb)]
    pub solver: SolverArg,
    /// Wall-clock budget per fit. Defaults to 1000 ms, or 2000 ms above 200 attributes.
    #[arg(long, conflicts_with = "iterations")]
    pub time_ms: Option<u64>,
    /// Iteration budget per fit; makes runs reproducible.
    #[arg(long)]
    pub iterations: Option<u64>,
    /// Local search: stop after this many restarts without improvement.
    #[arg(long)]
    pub patience: Option<u32>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::Algo1)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Model code as printed by `fit`: `0110` (algo1) or `-0+` (algo2).
    #[arg(long)]
    pub model: String,
    #[arg(long, value_enum, default_value_t = VariantArg::Algo1)]
    pub variant: VariantArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Algo1,
    Algo2,
    /// Predictions from a CSV file.
    Baseline,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Data set file; repeat for several users.
    #[arg(long, required = true)]
    pub data: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Algo1)]
    pub method: MethodArg,
    /// Predictions CSV for `--method baseline`.
    #[arg(long, required_if_eq("method", "baseline"))]
    pub predictions: Option<PathBuf>,
    /// Method label to select from the predictions CSV.
    #[arg(long, required_if_eq("method", "baseline"))]
    pub label: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = FoldModeArg::Contiguous)]
    pub fold_mode: FoldModeArg,
    /// Fold plan file; only with a single data set.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Write test-set predictions to this CSV.
    #[arg(long)]
    pub predictions_out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Data set file; repeat for several users. Without it synthetic users are generated.
    #[arg(long)]
    pub data: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = VariantArg::Algo1)]
    pub variant: VariantArg,
    /// Evaluate every training size 1..=L.
    #[arg(long, conflicts_with = "sizes", required_unless_present = "sizes")]
    pub lmax: Option<usize>,
    /// Comma-separated training sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = FoldModeArg::Contiguous)]
    pub fold_mode: FoldModeArg,
    /// Resample every training size instead of taking nested prefixes.
    #[arg(long)]
    pub independent: bool,
    /// Write per-(user, fold, size) errors to this CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Synthetic users to generate when no data is given.
    #[arg(long, default_value_t = 10)]
    pub users: usize,
    /// Synthetic users: attributes.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Synthetic users: rated items each.
    #[arg(long, default_value_t = 100)]
    pub items: usize,
    /// Synthetic users: stars on the scale.
    #[arg(long, default_value_t = 5)]
    pub stars: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregationArg {
    Pooled,
    PerUser,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// `evaluate` JSON output of the first method.
    #[arg(long, required_unless_present = "a_errors", conflicts_with = "a_errors")]
    pub a: Option<PathBuf>,
    /// `evaluate` JSON output of the second method.
    #[arg(long, required_unless_present = "b_errors", conflicts_with = "b_errors")]
    pub b: Option<PathBuf>,
    /// Comma-separated errors of the first method.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub a_errors: Option<Vec<f64>>,
    /// Comma-separated errors of the second method.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub b_errors: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = AggregationArg::Pooled)]
    pub aggregation: AggregationArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SupervisionArg {
    DistanceExact,
    StarRounded,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub items: usize,
    #[arg(long, default_value_t = 5)]
    pub stars: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Algo1)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = SupervisionArg::DistanceExact)]
    pub supervision: SupervisionArg,
    /// Probability of a one-level rating error (star-rounded only).
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long)]
    pub user_id: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[arg(long, required = true)]
    pub data: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::Algo1)]
    pub variant: VariantArg,
    /// LP file to write; without it the program goes to stdout (text format).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    /// One row per item, one column per attribute.
    Wide,
    /// One `item, attribute, value` row per pair.
    Long,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub items: PathBuf,
    #[arg(long)]
    pub ratings: PathBuf,
    #[arg(long, value_enum, default_value_t = LayoutArg::Wide)]
    pub layout: LayoutArg,
    /// User to extract when the ratings file holds several.
    #[arg(long)]
    pub user: Option<String>,
    /// Attribute values at or above this become 1.
    #[arg(long, default_value_t = 0.5)]
    pub cutoff: f64,
    /// `half` for 0.5..5 in half stars, a star count such as `5`, or comma-separated raw levels.
    #[arg(long, default_value = "5")]
    pub scale: String,
    #[arg(long, default_value = "item_id")]
    pub item_column: String,
    #[arg(long, default_value = "user_id")]
    pub user_column: String,
    #[arg(long, default_value = "rating")]
    pub rating_column: String,
    #[arg(long, default_value = "attribute")]
    pub attribute_column: String,
    #[arg(long, default_value = "value")]
    pub value_column: String,
    /// Keep attributes that no rated item has.
    #[arg(long)]
    pub keep_empty: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FoldsArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = FoldModeArg::Contiguous)]
    pub fold_mode: FoldModeArg,
    #[arg(long)]
    pub out: PathBuf,
}
