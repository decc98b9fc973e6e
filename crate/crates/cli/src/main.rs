//! `nilhsp`: instance generation, solver runs, end-to-end HSP experiments,
//! reductions and benchmarks.
//!
//! Exit codes: 0 success, 1 mismatch or failure, 2 input error, 3 precondition error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nilhsp::Error;

#[derive(Parser, Debug)]
#[command(name = "nilhsp", version, about = "Hidden subgroups of nil-2 p-groups of exponent p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random group specification.
    GenGroup {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve Σ u_i j_i² = Σ u_i j_i = 0 read from a system file.
    SolveQuadsys {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Substitute the solution back and report OK or FAIL.
        #[arg(long)]
        verify: bool,
    },
    /// Run the end-to-end hidden subgroup algorithm on random instances.
    RunHsp(HspArgs),
    /// Sylow split, normalizer iteration and G* on a multiplication table.
    RunReduction(ReductionArgs),
    /// Time the solver (or the pipeline) across sizes.
    Bench {
        #[arg(long, value_enum, default_value_t = Suite::Solver)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args, Debug)]
pub struct HspArgs {
    /// Fixed group for all trials; otherwise a random group per trial.
    #[arg(long, conflicts_with_all = ["p", "m", "d"])]
    pub group_file: Option<PathBuf>,
    #[arg(long, required_unless_present = "group_file")]
    pub p: Option<u64>,
    #[arg(long, required_unless_present = "group_file")]
    pub m: Option<usize>,
    #[arg(long, required_unless_present = "group_file")]
    pub d: Option<usize>,
    /// Order of the hidden subgroup: 1, p, or random.
    #[arg(long, default_value = "p")]
    pub order: OrderChoice,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attempts per trial before giving up.
    #[arg(long, default_value_t = 10)]
    pub max_attempts: usize,
    /// Emit the full JSON report instead of a summary line.
    #[arg(long)]
    pub json: bool,
    /// Include wall-clock times (makes reports non-reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(clap::Args, Debug)]
pub struct ReductionArgs {
    #[arg(long)]
    pub table_file: PathBuf,
    /// Generators of the hidden subgroup as comma-separated element indices;
    /// random if omitted.
    #[arg(long, value_delimiter = ',')]
    pub hidden: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = SolverChoice::Brute)]
    pub solver: SolverChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderChoice {
    One,
    P,
    Random,
}

impl std::str::FromStr for OrderChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1" => Ok(OrderChoice::One),
            "p" => Ok(OrderChoice::P),
            "random" => Ok(OrderChoice::Random),
            _ => Err(format!("expected 1, p or random, got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    Brute,
    Quantum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Solver,
    Hsp,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Domain(_) => 2,
            Error::Precondition(_) | Error::Resource(_) => 3,
            Error::Retryable(_) | Error::Internal(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenGroup { p, m, d, seed, out } => commands::gen_group(p, m, d, seed, out.as_deref()),
        Command::SolveQuadsys { input, seed, verify } => commands::solve_quadsys(&input, seed, verify),
        Command::RunHsp(args) => commands::run_hsp(&args),
        Command::RunReduction(args) => commands::run_reduction(&args),
        Command::Bench { suite, seed, json } => commands::bench(suite, seed, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
