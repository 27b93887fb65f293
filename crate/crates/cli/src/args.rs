use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "webtorsion",
    version,
    about = "Torsion and reducibility checks for closed-form (n+1)-webs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Torsion tensor of a web at a point.
    Torsion(TorsionArgs),
    /// Decide reducibility on one partition.
    Check(CheckArgs),
    /// Run a criterion over every admissible partition.
    Scan(ScanArgs),
    /// Build F = f(x_P, g(x_A, x_S), x_S) and self-check it.
    Compose(ComposeArgs),
    /// List the shipped presets.
    Presets(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    /// Torsion equalities on the P block.
    Eq14,
    /// Second-order PDE residuals.
    Eq20,
    /// Torsion equalities on the P and S blocks (whole web).
    Eq18,
    /// Integrability of the distribution.
    Frobenius,
    /// Integrability of the larger distribution.
    FrobeniusLarge,
    /// eq14, eq20 and frobenius, which must agree.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanCriterion {
    Eq14,
    Eq20,
    Eq18,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub output: OutputMode,
}

/// The web under analysis: an expression with its dimension, or a preset.
#[derive(Debug, Args)]
pub struct WebArgs {
    /// Web function F over x1..xn.
    #[arg(long, conflicts_with = "preset")]
    pub expr: Option<String>,
    /// Ambient dimension n (defaults to the largest variable index).
    #[arg(long)]
    pub n: Option<usize>,
    /// goursat4 or goursat5.
    #[arg(long)]
    pub preset: Option<String>,
    /// Sampling box `lo,hi`, applied to every coordinate.
    #[arg(long = "box", allow_hyphen_values = true, default_value = "-1,1")]
    pub bbox: String,
    /// Regularity margin for |dF/dx_i|.
    #[arg(long, default_value_t = 1e-3)]
    pub margin: f64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_rejections: usize,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// P block, e.g. `1`.
    #[arg(long = "P")]
    pub p: Option<String>,
    /// A block, e.g. `2,3`.
    #[arg(long = "A")]
    pub a: Option<String>,
    /// S block; defaults to the remaining indices.
    #[arg(long = "S")]
    pub s: Option<String>,
    /// Contiguous roles: P = 1..l.
    #[arg(long, requires = "k", conflicts_with_all = ["p", "a", "s"])]
    pub l: Option<usize>,
    /// Contiguous roles: A = l+1..k, S = k+1..n.
    #[arg(long, requires = "l")]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TorsionArgs {
    #[command(flatten)]
    pub web: WebArgs,
    /// Point `x1,...,xn`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub web: WebArgs,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long, value_enum, default_value = "eq20")]
    pub criterion: CriterionArg,
    #[command(flatten)]
    pub sample: SampleArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub web: WebArgs,
    /// Largest P block to enumerate (defaults to n).
    #[arg(long)]
    pub l_max: Option<usize>,
    #[arg(long, value_enum, default_value = "eq20")]
    pub criterion: ScanCriterion,
    #[command(flatten)]
    pub sample: SampleArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Outer function over slots u1..u_{l+1+|S|}.
    #[arg(long)]
    pub f: String,
    /// Inner function over the A and S variables.
    #[arg(long)]
    pub g: String,
    /// Ambient dimension (defaults to the largest listed index).
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[command(flatten)]
    pub sample: SampleArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}
