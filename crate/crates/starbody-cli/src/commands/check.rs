use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::Args;

use starbody::checks::run_suite;
use starbody::report::GridEcho;

use super::{command_echo, emit, AppError, GridFlags};

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Suite: metric-axioms, inequalities, duality, truncation, all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[command(flatten)]
    pub grid: GridFlags,
}

pub fn run(args: CheckArgs) -> Result<ExitCode, AppError> {
    let started = Instant::now();
    if args.trials < 1 {
        return Err(AppError::Precondition("--trials must be >= 1".to_string()));
    }
    // Randomized suites are quadratic in the grid; default to a moderate one.
    let count = args.grid.grid_count.unwrap_or(512);
    let grid = Arc::new(starbody::make_grid(
        args.dim,
        count,
        args.grid.grid_seed,
        !args.grid.asymmetric,
    )?);
    let results = run_suite(&args.suite, &grid, args.trials, args.seed)?;
    let mut failed = 0usize;
    for r in &results {
        let status = if r.passed() { "pass" } else { "FAIL" };
        eprintln!(
            "[{status}] {}/{}: {} checks, {} violations",
            r.suite, r.name, r.checked, r.violations
        );
        if !r.passed() {
            failed += 1;
        }
    }
    let echo = GridEcho::new(&grid, grid.eps_g(1.0));
    emit(command_echo(), Some(echo), Vec::new(), started, &results);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
