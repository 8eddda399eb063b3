pub mod check;
pub mod dist;
pub mod dual;
pub mod seq;

use std::fmt;
use std::path::Path;
use std::time::Instant;

use clap::Args;
use serde::Serialize;

use starbody::bodyspec::{parse_body_spec, GridSpec, ParsedBody};
use starbody::report::{GridEcho, ReportEnvelope};
use starbody::{Error, SphereGrid};

#[derive(Debug)]
pub enum AppError {
    Parse(String),
    DimensionMismatch(String),
    Precondition(String),
    SeedRequired,
    Io(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Parse(m) => write!(f, "{m}"),
            AppError::DimensionMismatch(m) => write!(f, "{m}"),
            AppError::Precondition(m) => write!(f, "{m}"),
            AppError::SeedRequired => {
                write!(f, "this map needs a convex_seed body (flower/polar/union-check)")
            }
            AppError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> AppError {
        match e {
            Error::Parse(_) | Error::UnknownCatalogEntry { .. } => AppError::Parse(e.to_string()),
            Error::DimensionMismatch { .. } => AppError::DimensionMismatch(e.to_string()),
            Error::SeedRequired => AppError::SeedRequired,
            Error::InvalidArgument(_) => AppError::Precondition(e.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> AppError {
        AppError::Io(e.to_string())
    }
}

/// Shared grid flags. Priority: flag > STARBODY_GRID_COUNT > per-dimension
/// default (2048 in d=2, 4096 otherwise).
#[derive(Args, Debug, Clone)]
pub struct GridFlags {
    /// Number of grid directions.
    #[arg(long)]
    pub grid_count: Option<usize>,
    /// Seed for the d >= 4 low-discrepancy grids.
    #[arg(long, default_value_t = 0)]
    pub grid_seed: u64,
    /// Drop the antipodal-closure requirement.
    #[arg(long, default_value_t = false)]
    pub asymmetric: bool,
}

impl GridFlags {
    pub fn count_for(&self, dim: usize) -> usize {
        self.grid_count
            .or_else(|| {
                std::env::var("STARBODY_GRID_COUNT").ok().and_then(|v| v.parse().ok())
            })
            .unwrap_or_else(|| GridSpec::default_count(dim))
    }

    pub fn spec_for(&self, dim: usize) -> GridSpec {
        GridSpec {
            count: self.count_for(dim),
            seed: self.grid_seed,
            symmetric: !self.asymmetric,
        }
    }

    pub fn build(&self, dim: usize) -> Result<SphereGrid, AppError> {
        Ok(self.spec_for(dim).build(dim)?)
    }
}

pub fn load_body(path: &Path) -> Result<ParsedBody, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "csv") {
        return Ok(ParsedBody::Star(starbody::bodyspec::body_from_csv(&text)?));
    }
    Ok(parse_body_spec(&text)?)
}

/// Prints the envelope (with wall time measured around `payload_fn`).
pub fn emit<P: Serialize>(
    command: Vec<String>,
    grid: Option<GridEcho>,
    warnings: Vec<String>,
    started: Instant,
    payload: P,
) {
    let mut envelope = ReportEnvelope::new(command, grid, payload);
    for w in warnings {
        envelope.warn(w);
    }
    envelope.wall_ms = started.elapsed().as_millis();
    println!("{}", envelope.to_json());
}

pub fn command_echo() -> Vec<String> {
    std::env::args().collect()
}
