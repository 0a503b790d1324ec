use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scell_core::affine_weyl::Mode;
use scell_core::pi_map::SampleConfig;

#[derive(Debug, Parser)]
#[command(name = "scell", version, about = "Affine and finite S-cells of type A")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute pi(x) for a single element.
    Pi(PiArgs),
    /// Tabulate pi over all elements up to a given length.
    Cells(CellsArgs),
    /// Check minimality, surjectivity and cell growth on a length ball.
    Verify(VerifyArgs),
    /// Finite S-cells of S_n against Robinson-Schensted shapes.
    FiniteCells(FiniteArgs),
    /// Minimal GKM classes for every partition of n.
    Minimal(MinimalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "SL", alias = "sl")]
    Sl,
    #[value(name = "GL", alias = "gl")]
    Gl,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sl => Mode::Sl,
            ModeArg::Gl => Mode::Gl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Sampling {
    #[arg(long, default_value_t = 10007)]
    pub prime: u64,
    /// Further primes to vote at, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub extra_primes: Vec<u64>,
    /// Starting precision in powers of t (default 16 n).
    #[arg(long)]
    pub precision: Option<i64>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub resample_limit: usize,
    /// Neither read nor write the result cache.
    #[arg(long)]
    pub no_cache: bool,
}

impl Sampling {
    pub fn config(&self) -> SampleConfig {
        SampleConfig {
            prime: self.prime,
            extra_primes: self.extra_primes.clone(),
            precision: self.precision.unwrap_or(0),
            trials: self.trials,
            seed: self.seed,
            resample_limit: self.resample_limit,
        }
    }
}

#[derive(Debug, Args)]
pub struct PiArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "SL")]
    pub mode: ModeArg,
    /// Window u(1),...,u(n), comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub window: String,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct CellsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "SL")]
    pub mode: ModeArg,
    #[arg(long)]
    pub max_length: usize,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "SL")]
    pub mode: ModeArg,
    #[arg(long)]
    pub max_length: Option<usize>,
    /// Check an existing cell table instead of computing one.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Lengths for the growth report (default L-4, L-2, L).
    #[arg(long, value_delimiter = ',')]
    pub growth_at: Vec<usize>,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct FiniteArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10007)]
    pub prime: u64,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct MinimalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10007)]
    pub prime: u64,
    /// Twisted-torus samples per partition; 0 skips the oracle.
    #[arg(long, default_value_t = 10)]
    pub oracle_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
