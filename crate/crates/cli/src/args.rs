use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use pickup_sticks::montecarlo::DEFAULT_CHUNK_SIZE;

#[derive(Debug, Parser)]
#[command(name = "pickup", version, about = "Exact and simulated pick-up sticks probabilities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    /// Significant digits in decimal renderings.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=1000))]
    pub precision: u16,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for parallel sections. Affects speed only, never results.
    #[arg(long, global = true, env = "PICKUP_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact probability that no k of n sticks form a k-gon.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also evaluate every other exact method and fail on disagreement.
        #[arg(long)]
        cross_check: bool,
    },
    /// Exact probabilities and final engine coefficients for n = 1..=max_n.
    Table {
        #[arg(long)]
        max_n: usize,
        /// Polygon sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        k: Vec<usize>,
    },
    /// Monte Carlo estimate compared against the exact value.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per deterministic work unit.
        #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
        chunk_size: u64,
    },
    /// Cross-method identity checks; exits 1 on the first mismatch.
    Verify {
        #[arg(long, default_value_t = 25)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
    },
    /// Print the k-step Fibonacci-type sequence.
    Sequence {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count: usize,
    },
}
