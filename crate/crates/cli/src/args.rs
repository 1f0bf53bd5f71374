use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphon_psi::graphs::SampleMode;
use graphon_psi::kernels::DEFAULT_BLOCKS;
use graphon_psi::DEFAULT_DEGREE;

#[derive(Parser, Debug)]
#[command(name = "graphon-psi", version, about = "Characteristic power series of graphs and graphons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ψ_n of a graph file, with spectrum summary and energy.
    Graph(GraphArgs),
    /// ψ of a kernel given as JSON.
    Kernel(KernelArgs),
    /// Coefficient deviations of W-random graphs from the kernel's ψ.
    Converge(ConvergeArgs),
    /// Eigenvalue-gap and root verdict for a growing graph sequence.
    Quasirandom(QuasirandomArgs),
    /// Exact coefficient signs of the constant-p series.
    Signs(SignsArgs),
    /// Dump of the partition families behind the series.
    Partitions(PartitionsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphRoute {
    Eigen,
    Newton,
    HararySachs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sampling {
    Uniform,
    Grid,
}

impl From<Sampling> for SampleMode {
    fn from(s: Sampling) -> Self {
        match s {
            Sampling::Uniform => SampleMode::Uniform,
            Sampling::Grid => SampleMode::Grid,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Er,
    Complete,
    Kernel,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long = "degree", short = 'K', default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = GraphRoute::Eigen)]
    pub route: GraphRoute,
    /// Root search radius; defaults to the trust radius.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Number of eigenvalues in the spectrum summary.
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long = "degree", short = 'K', default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    /// Blocks used to discretize closed-form kernels.
    #[arg(long, default_value_t = DEFAULT_BLOCKS)]
    pub blocks: usize,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// Kernel JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Graph sizes, strictly increasing.
    #[arg(long = "n", value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Samples per size; defaults to the number of seeds.
    #[arg(long)]
    pub samples: Option<usize>,
    /// One or more base seeds (required).
    #[arg(long = "seed", value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long = "degree", short = 'K', default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    #[arg(long, default_value_t = DEFAULT_BLOCKS)]
    pub blocks: usize,
    #[arg(long = "sample-mode", value_enum, default_value_t = Sampling::Uniform)]
    pub sample_mode: Sampling,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct QuasirandomArgs {
    /// Graph files in increasing size; alternative to --model.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Kernel JSON for `--model kernel`.
    #[arg(long)]
    pub kernel: Option<PathBuf>,
    #[arg(long = "n", value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long = "seed", value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long = "sample-mode", value_enum, default_value_t = Sampling::Uniform)]
    pub sample_mode: Sampling,
    /// Target density, as a decimal or "a/b".
    #[arg(long)]
    pub p: String,
    #[arg(long = "tol-root", default_value_t = 0.1)]
    pub tol_root: f64,
    #[arg(long = "tol-gap", default_value_t = 0.06)]
    pub tol_gap: f64,
    #[arg(long = "degree", short = 'K', default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SignsArgs {
    /// Exact density, "a/b" or a terminating decimal.
    #[arg(long)]
    pub p: String,
    #[arg(long = "degree", short = 'K', default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct PartitionsArgs {
    #[arg(long = "degree", short = 'K')]
    pub degree: usize,
    #[command(flatten)]
    pub output: Output,
}

impl Command {
    pub fn output(&self) -> &Output {
        match self {
            Command::Graph(a) => &a.output,
            Command::Kernel(a) => &a.output,
            Command::Converge(a) => &a.output,
            Command::Quasirandom(a) => &a.output,
            Command::Signs(a) => &a.output,
            Command::Partitions(a) => &a.output,
        }
    }
}
