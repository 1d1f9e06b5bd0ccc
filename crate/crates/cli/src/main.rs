//! `gorenstein`: enumerate, classify, and cross-verify the finite torus
//! subgroups behind Gorenstein lattice simplices.
//!
//! Exit codes: 0 on success, 1 for usage problems (bad arguments, caps
//! exceeded, unreadable or malformed input files), 2 when a structural
//! check fails (a group is not of the requested type, has an identically
//! zero coordinate, disagrees with its declared order, or an oracle finds
//! a mismatch).

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// A command failure carrying its intended process exit code.
pub enum Failure {
    /// Bad arguments or unusable input: exit 1.
    Usage(String),
    /// A structural or oracle check failed: exit 2.
    Check(String),
}

pub type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "gorenstein",
    version,
    about = "Classifies the lattice simplices with h* = 1 + t^k + ... + t^((v-1)k) \
             via their finite coordinate groups",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all classes of type (v, k) and emit them as JSON, CSV, or text
    Classify(ClassifyArgs),
    /// Print the strict-chain census and the class count N(v) without building groups
    Count {
        /// Group order
        #[arg(long)]
        v: u64,
    },
    /// List the strict divisor chains from 1 to v
    Chains {
        /// Group order
        #[arg(long)]
        v: u64,
    },
    /// Recover the construction datum (chain and subsets) of a group given as JSON
    Decompose(DecomposeArgs),
    /// Rebuild every class of type (v, k) and check the counting and bijection laws
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    /// Round-trip each class through its simplex and compare volumes
    SimplexRoundtrip,
    /// Compare direct lattice-point counts against the h* prediction
    Ehrhart,
    /// Re-extract each construction datum from its bare group
    Bijection,
}

#[derive(Args)]
pub struct ClassifyArgs {
    /// Group order (equals the normalized volume of the simplices)
    #[arg(long)]
    pub v: u64,
    /// Height step of the type; h* has ones exactly at multiples of k
    #[arg(long)]
    pub k: u64,
    /// Output format for the class list
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the artifact to this path instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Post-classification oracles to run, comma-separated
    #[arg(long, value_enum, value_delimiter = ',')]
    pub oracle: Vec<Oracle>,
    /// Number of worker threads for building classes
    #[arg(long, env = "GORENSTEIN_WORKERS", default_value_t = 1)]
    pub workers: usize,
    /// Largest group order the classifier will attempt
    #[arg(long, env = "GORENSTEIN_MAX_ORDER", default_value_t = 512)]
    pub max_order: u64,
    /// Largest simplex dimension the ehrhart oracle will count points in
    #[arg(long, env = "GORENSTEIN_MAX_EHRHART_DIM", default_value_t = 7)]
    pub max_ehrhart_dim: usize,
}

#[derive(Args)]
pub struct DecomposeArgs {
    /// Height step the input group is expected to have
    #[arg(long)]
    pub k: u64,
    /// Path to a group JSON file: { "N": width, "generators": [[...]], "order": v }
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Largest group order the closure will accept
    #[arg(long, env = "GORENSTEIN_MAX_ORDER", default_value_t = 512)]
    pub max_order: u64,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Group order
    #[arg(long)]
    pub v: u64,
    /// Height step of the type
    #[arg(long)]
    pub k: u64,
    /// Largest group order the classifier will attempt
    #[arg(long, env = "GORENSTEIN_MAX_ORDER", default_value_t = 512)]
    pub max_order: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Classify(args) => commands::classify(&args),
        Command::Count { v } => commands::count(v),
        Command::Chains { v } => commands::chains(v),
        Command::Decompose(args) => commands::decompose(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
