//! `starbody` — compute radial and classical set-distances between star
//! bodies, apply the star/flower/polar dualities, classify convergence of the
//! example corpus, and run the randomized invariant suites.
//!
//! Exit codes: 0 success; 1 failed check invariants; 2 parse errors;
//! 3 dimension mismatch; 4 precondition failures; 5 a duality map that needs
//! a convex seed was given a bare star body.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{check, dist, dual, seq, AppError};

#[derive(Parser)]
#[command(name = "starbody", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two star bodies given as spec files.
    Dist(dist::DistArgs),
    /// Dualities: star dual, flower, polar, and their verification reports.
    Dual(dual::DualArgs),
    /// Convergence analysis of a corpus sequence against a candidate limit.
    Seq(seq::SeqArgs),
    /// Randomized invariant suites (metric axioms, inequalities, dualities,
    /// truncation lemmas).
    Check(check::CheckArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist(args) => dist::run(args),
        Command::Dual(args) => dual::run(args),
        Command::Seq(args) => seq::run(args),
        Command::Check(args) => check::run(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Parse(_) => 2,
            AppError::DimensionMismatch(_) => 3,
            AppError::Precondition(_) => 4,
            AppError::SeedRequired => 5,
            AppError::Io(_) => 2,
        }
    }
}
