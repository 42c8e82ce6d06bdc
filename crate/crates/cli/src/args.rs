use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "reqsel", version, about = "Dependency-aware software requirement selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Preference matrix -> value dependency graph and per-pair report.
    Identify(IdentifyArgs),
    /// Fit a dichotomized Gaussian to a preference matrix and draw new users.
    Resample(ResampleArgs),
    /// Dependency graph -> influence matrix.
    Influence(InfluenceArgs),
    /// Solve one selection problem.
    Select(SelectArgs),
    /// Solve across price levels and methods.
    Sweep(SweepArgs),
    /// Generate a synthetic instance.
    Simulate(SimulateArgs),
    /// Time the solver on a grid of synthetic instances.
    Bench(BenchArgs),
    /// Write the 0/1 model in LP format.
    ExportLp(ExportLpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dataset {
    Casestudy,
}

#[derive(Debug, Clone, Args)]
pub struct IdentifyArgs {
    /// CSV with requirement ids in the first column and one 0/1 column per user.
    #[arg(long)]
    pub preferences: PathBuf,
    /// Critical value of the odds-ratio interval.
    #[arg(long = "z", default_value_t = 1.96)]
    pub z: f64,
    /// Membership breakpoints `a,b` for |η|.
    #[arg(long, default_value = "0,1")]
    pub cuts: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ResampleArgs {
    #[arg(long)]
    pub preferences: PathBuf,
    /// Number of users to draw.
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    /// Split sampling across this many seeded shards.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct InfluenceArgs {
    /// Edge list `from,to,strength,quality`.
    #[arg(long)]
    pub vdg: PathBuf,
    /// Requirements CSV fixing the row order; otherwise ids come from the edges.
    #[arg(long)]
    pub requirements: Option<PathBuf>,
    /// One `from,to,pos,neg,influence` row per pair instead of a square matrix.
    #[arg(long)]
    pub long: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Requirements CSV `id,name,cost,value,probability`.
    #[arg(long, required_unless_present = "dataset", conflicts_with = "dataset")]
    pub requirements: Option<PathBuf>,
    /// Bundled dataset.
    #[arg(long, value_enum)]
    pub dataset: Option<Dataset>,
    /// Precedence constraints JSON.
    #[arg(long)]
    pub constraints: Option<PathBuf>,
    /// Explicit dependency graph; its closure becomes the influence matrix.
    #[arg(long, conflicts_with = "influence")]
    pub vdg: Option<PathBuf>,
    /// Square influence matrix CSV.
    #[arg(long)]
    pub influence: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("limit").required(true).args(["budget", "percent"])))]
pub struct SelectArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value = "dars")]
    pub method: String,
    /// Capacity in money units.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Capacity as a percentage of total cost (budget mode) or total value (price mode).
    #[arg(long)]
    pub percent: Option<f64>,
    /// `budget` (Σ cost) or `price` (Σ value); the case study defaults to price.
    #[arg(long)]
    pub mode: Option<String>,
    /// Substitute g := x in the dependency-aware model.
    #[arg(long)]
    pub simplify: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Include elapsed time in the output.
    #[arg(long)]
    pub timing: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated methods.
    #[arg(long, default_value = "bk,pcbk,sbk,dars")]
    pub methods: String,
    /// Price levels: `1..100`, `10,20,30` or a single value.
    #[arg(long)]
    pub percent: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Plot-ready `level,method,metric,value` rows.
    #[arg(long)]
    pub long: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub vdl: f64,
    #[arg(long, default_value_t = 0.0)]
    pub nvdl: f64,
    #[arg(long, default_value_t = 0.0)]
    pub pdl: f64,
    #[arg(long, default_value_t = 0.0)]
    pub npdl: f64,
    #[arg(long, default_value_t = 0.5)]
    pub budget_fraction: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Comma-separated grid values; every combination is run. A zero density
    /// forces its negative share to zero.
    #[arg(long, default_value = "10")]
    pub n: String,
    #[arg(long, default_value = "0.05")]
    pub vdl: String,
    #[arg(long, default_value = "0.25")]
    pub nvdl: String,
    #[arg(long, default_value = "0.02")]
    pub pdl: String,
    #[arg(long, default_value = "0.25")]
    pub npdl: String,
    #[arg(long, default_value = "0.5")]
    pub budget_fraction: String,
    /// Instances per grid cell, seeded `seed`, `seed + 1`, ...
    #[arg(long, default_value_t = 1)]
    pub repeats: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "dars")]
    pub method: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("limit").required(true).args(["budget", "percent"])))]
pub struct ExportLpArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value = "dars")]
    pub method: String,
    #[arg(long)]
    pub budget: Option<f64>,
    #[arg(long)]
    pub percent: Option<f64>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub simplify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
