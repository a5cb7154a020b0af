use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "trifold", version, about = "Triangular paperfolding patterns")]
pub struct Cli {
    /// Worker threads for pattern generation (output does not depend on it).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a pattern file.
    Generate(GenerateArgs),
    /// Render a pattern or tiling file as SVG.
    Render(RenderArgs),
    /// Print the substitution count matrix of a word.
    Matrix(MatrixArgs),
    /// Eigenvalues, eigenvectors and diagonalizability of a word matrix.
    Spectrum(SpectrumArgs),
    /// Exact density vectors of the periodic sequence of a word.
    Density(DensityArgs),
    /// Cross-check the pattern generators.
    Verify(VerifyArgs),
    /// Recover segment colours from an undecorated tiling file.
    Reconstruct(ReconstructArgs),
    /// Vertex star histogram.
    Stars(StarsArgs),
    /// Translation periods and layer block structure.
    Period(PeriodArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Unfold,
    Subst,
}

/// Which window of which sequence to look at.
#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Sequence: `+-+` (finite), `(+-)*` (periodic) or `++-,+++` (mixed folds).
    #[arg(long)]
    pub seq: Option<String>,
    /// Side-2^size triangle centred at the origin.
    #[arg(long, conflicts_with = "radius")]
    pub size: Option<u32>,
    /// Ball of this radius about the origin.
    #[arg(long)]
    pub radius: Option<i64>,
    /// Read the pattern from a file instead.
    #[arg(long = "in", conflicts_with_all = ["seq", "size", "radius"])]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long, conflicts_with = "radius")]
    pub size: Option<u32>,
    #[arg(long)]
    pub radius: Option<i64>,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    /// Pattern file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the tiling of the pattern.
    #[arg(long)]
    pub tiling_out: Option<PathBuf>,
    /// Drop decorations from the tiling file.
    #[arg(long, requires = "tiling_out")]
    pub undecorated: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Pixels per unit segment.
    #[arg(long, default_value_t = 20.0)]
    pub scale: f64,
    #[arg(long)]
    pub no_boundary: bool,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value_t = 1)]
    pub power: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Kv,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub word: String,
    /// Number of folds.
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
    /// Seed tile class 1..=8; all classes if omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
    pub seed: Option<u8>,
    /// Also count tiles in side-4^n patches of `(+)*` for n up to this value.
    #[arg(long)]
    pub empirical: Option<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Sequence to check; omit when using `--random`.
    #[arg(long, required_unless_present = "random")]
    pub seq: Option<String>,
    #[arg(long)]
    pub size: Option<u32>,
    #[arg(long, value_delimiter = ',', default_values = ["closed", "unfold", "subst"])]
    pub methods: Vec<Method>,
    /// Check this many random finite words instead.
    #[arg(long, conflicts_with = "seq")]
    pub random: Option<usize>,
    /// Length of the random words.
    #[arg(long, default_value_t = 6)]
    pub len: usize,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Pattern file to compare against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value_t = trifold::tiling::DEFAULT_MARGIN)]
    pub margin: i64,
    /// Write the recovered colours, one `d p q color` record per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StarsArgs {
    #[command(flatten)]
    pub window: WindowArgs,
}

#[derive(Debug, Args)]
pub struct PeriodArgs {
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, default_value_t = 8)]
    pub max_norm: i64,
    /// Only look at this layer.
    #[arg(long)]
    pub layer: Option<u32>,
    /// Check the block structure of layers 1..=k.
    #[arg(long)]
    pub blocks: Option<u32>,
}
