//! `cokernel-lab`: exact invariants, limiting distributions and Monte-Carlo
//! experiments for cokernels of `P(X)` over `Z/p^kZ`.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "cokernel-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor P mod p and Hensel-lift the factors to Z/p^k.
    Factor(RingArgs),
    /// Smith normal form of a matrix over Z/p^k.
    Snf(SnfArgs),
    /// Isomorphism type of cok(P(X)) as an R-module.
    Coktype(CoktypeArgs),
    /// Limiting probabilities for every module in the catalog.
    Theory(TheoryArgs),
    /// Monte-Carlo tally of cokernel types.
    Simulate(SimulateArgs),
    /// Empirical E|Sur(cok, G)| for a fixed module G.
    Moments(MomentsArgs),
    /// Exact distribution over all matrices (small cases).
    Oracle(OracleArgs),
    /// Join a tally with theory output: TV distance and z-scores.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RingArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub k: u32,
    /// Coefficients of P, low to high, comma separated (e.g. 1,1,1).
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// Write JSON here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall time in the manifest (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SnfArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub k: u32,
    /// Matrix JSON file: {"rows":n,"cols":m,"entries":[...]}.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Also report the unimodular transforms U, V with U M V = D.
    #[arg(long)]
    pub transforms: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoktypeArgs {
    #[command(flatten)]
    pub ring: RingArgs,
    #[arg(long)]
    pub matrix: PathBuf,
    /// Module JSON files forming the catalog when P mod p is not square-free.
    #[arg(long = "module")]
    pub modules: Vec<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TheoryArgs {
    #[command(flatten)]
    pub ring: RingArgs,
    /// Size bound B of the enumerated catalog (square-free case).
    #[arg(long, default_value_t = 16)]
    pub max_size: u64,
    /// Additional module JSON files (required when P mod p is not square-free).
    #[arg(long = "module")]
    pub modules: Vec<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub theory: TheoryArgs,
    /// Matrix sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// haar | bernoulli01 | custom:<file.json>
    #[arg(long, default_value = "haar")]
    pub measure: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV projection: one row per (n, type).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub ring: RingArgs,
    /// Module JSON file for G.
    #[arg(long)]
    pub module: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value = "haar")]
    pub measure: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    pub ring: RingArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 16)]
    pub max_size: u64,
    #[arg(long = "module")]
    pub modules: Vec<PathBuf>,
    /// Also compute the exact moment E|Sur(cok, G)| for this module.
    #[arg(long)]
    pub moment_module: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CompareArgs {
    /// Output of `simulate`.
    #[arg(long)]
    pub tally: PathBuf,
    /// Output of `theory`.
    #[arg(long)]
    pub theory: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
