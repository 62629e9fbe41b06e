//! `lexspider`: Swadesh-list triples on the 3-spider, sticky means and
//! Monte Carlo checks from the command line.

mod commands;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lexspider::openbook::Normalization;

#[derive(Debug, Parser)]
#[command(name = "lexspider", version, about = "Fréchet means and stickiness of language triples on the 3-spider")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Structured => "structured",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormalizationArg {
    #[value(name = "n")]
    N,
    #[value(name = "n-1")]
    NMinusOne,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::N => Normalization::N,
            NormalizationArg::NMinusOne => Normalization::NMinusOne,
        }
    }
}

#[derive(Debug, clap::Args)]
struct LexiconArgs {
    /// Tab- or comma-separated word list with a `concept` column.
    #[arg(long)]
    lexicon: PathBuf,
    /// Exactly three distinct language columns, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    languages: Vec<String>,
    /// Seed for the population split and tie-breaks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split, embed and analyze both populations, then compare them.
    Analyze {
        #[command(flatten)]
        common: LexiconArgs,
        /// Folded means within this distance of 0 count as zero.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "n-1")]
        normalization: NormalizationArg,
        #[arg(long, value_enum, default_value = "structured")]
        format: Format,
        /// Also report a two-sided p-value for a valid t statistic.
        #[arg(long)]
        p_value: bool,
    },
    /// Write the distance matrix and spider point of every sampled triple.
    Embed {
        #[command(flatten)]
        common: LexiconArgs,
    },
    /// Run a Monte Carlo experiment described by a TOML file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
    },
}

/// A failed run: exit code 1 for I/O and parse problems, 2 for invalid
/// arguments or configuration.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Usage(String),
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Input(format!("{}: {e}", path.display()))
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Usage(m) => f.write_str(m),
        }
    }
}

impl From<lexspider::Error> for Failure {
    fn from(e: lexspider::Error) -> Self {
        use lexspider::Error::*;
        match e {
            Parse { .. } | NoConcepts | MissingCell { .. } | EmptyWord => Failure::Input(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { common, epsilon, normalization, format, p_value } => {
            commands::analyze(&common, epsilon, normalization.into(), format, p_value)
        }
        Command::Embed { common } => commands::embed(&common),
        Command::Simulate { config, out } => commands::simulate(&config, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
