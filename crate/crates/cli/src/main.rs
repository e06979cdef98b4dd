mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

/// Binary codes, thin sets, Banach–Mazur games and strategy capture.
#[derive(Debug, Parser)]
#[command(name = "thinlab", version)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze, decode with, or extend a finite code.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Play strategies against each other.
    #[command(subcommand)]
    Game(GameCommand),
    /// Run the strategy-capture constructions over a corpus.
    #[command(subcommand)]
    Capture(CaptureCommand),
    /// Parity partitions and xor-set checks.
    #[command(subcommand)]
    Xor(XorCommand),
    /// Q(n, k) for all cells up to the given sizes.
    Qtable(QtableArgs),
    /// Emit a seeded random strategy corpus.
    Corpus(CorpusArgs),
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Minimum distance, detection and correction capacity, thinness.
    Analyze {
        /// File of 0/1 words, one per line.
        file: PathBuf,
    },
    /// Nearest-codeword decoding of a received word, or a simulated
    /// transmission with chosen error positions.
    Decode {
        file: PathBuf,
        #[arg(long, conflicts_with_all = ["sent", "errors"], required_unless_present = "sent")]
        received: Option<String>,
        /// Only correct up to this many errors; farther words are reported
        /// as detected.
        #[arg(long, requires = "received")]
        radius: Option<usize>,
        #[arg(long, requires = "errors")]
        sent: Option<String>,
        /// Comma-separated error positions.
        #[arg(long, value_delimiter = ',', requires = "sent")]
        errors: Option<Vec<usize>>,
    },
    /// Greedily extend the code to a maximal k-thin code.
    Maximalize {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GameCommand {
    /// Play one game and evaluate its outcome against a target set.
    Play {
        /// Ego strategy: a corpus name, or `constant:WORD`.
        #[arg(long)]
        ego: String,
        /// Alter strategy: a corpus name, `constant:WORD` or `copycat`.
        #[arg(long)]
        alter: String,
        /// Corpus file the strategy names refer to.
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        rounds: usize,
        /// `cylinder:WORD`, `no-consecutive-ones` or `code:FILE`.
        #[arg(long)]
        target: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct CorpusSource {
    /// Corpus file; strategies of the other side are skipped.
    #[arg(long)]
    pub strategy: Option<PathBuf>,
    /// Seed of the generated corpus when no file is given.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Size of the generated corpus when no file is given.
    #[arg(long)]
    pub size: Option<usize>,
    /// Write the per-strategy move traces to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CaptureCommand {
    /// Mirror capture of Ego strategies.
    Ego {
        #[command(flatten)]
        source: CorpusSource,
        #[arg(long, default_value_t = 20)]
        rounds: usize,
    },
    /// Diagonal capture of Alter strategies.
    Alter {
        #[command(flatten)]
        source: CorpusSource,
        /// Plays returned, minus one.
        #[arg(long, default_value_t = 4)]
        plays: usize,
        #[arg(long, default_value_t = 8)]
        sweeps: usize,
        /// Check the Θ relation on this many outcome bits.
        #[arg(long)]
        check_theta: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum XorCommand {
    /// Split Z_2^n by weight parity and check both halves.
    Partition {
        #[arg(long)]
        n: usize,
    },
    /// Check that a cover of Z_2^n by two thin sets is a pair of disjoint
    /// xor-sets.
    Verify { t0: PathBuf, t1: PathBuf },
}

#[derive(Debug, Args)]
pub struct QtableArgs {
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    /// Largest n searched exactly for k >= 3.
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    /// Largest n searched exactly for k = 2.
    #[arg(long, default_value_t = 10)]
    pub max_n_k2: usize,
    #[arg(long, default_value_t = 5_000_000)]
    pub node_limit: u64,
    /// Include the witness partitions.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Ego,
    Alter,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    #[arg(long, value_enum)]
    pub side: SideArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub size: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command).and_then(|outcome| {
        report::emit(&cli, &outcome)?;
        Ok(outcome)
    }) {
        Ok(outcome) => ExitCode::from(outcome.status.code()),
        Err(err) => {
            report::emit_error(&cli, &err);
            ExitCode::from(err.code())
        }
    }
}
