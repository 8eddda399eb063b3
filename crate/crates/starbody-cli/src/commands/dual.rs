use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;

use starbody::bodyspec::{profile_to_csv, sampled_spec_json, ParsedBody};
use starbody::dual::{
    flower, flower_union_check, inversion_check, polar, star_dual, InversionReport, UnionReport,
};
use starbody::report::GridEcho;
use starbody::xreal::XReal;
use starbody::StarBody;

use super::{command_echo, emit, load_body, AppError, GridFlags};

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Map {
    /// Star dual: rho -> 1/rho.
    Phi,
    /// Flower of a convex seed: rho = h_K.
    Flower,
    /// Polar body via K° = Phi(K♣).
    Polar,
    /// Verify Phi(A) = rc(R^d \ i(A)) on a radius ladder.
    InversionCheck,
    /// Verify the flower-as-union-of-balls identity on seed samples.
    UnionCheck,
}

#[derive(Args, Debug)]
pub struct DualArgs {
    /// Body spec file.
    pub body: PathBuf,
    #[arg(long, value_enum)]
    pub map: Map,
    /// Radius-ladder samples per direction for --map inversion-check.
    #[arg(long, default_value_t = 9)]
    pub samples: usize,
    /// Write the resulting profile as a sampled body spec (JSON).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the resulting profile as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridFlags,
}

#[derive(Serialize)]
#[serde(tag = "map", rename_all = "snake_case")]
enum DualPayload {
    Profile { name: String, values: Vec<XReal> },
    InversionCheck(InversionReport),
    UnionCheck(UnionReport),
}

pub fn run(args: DualArgs) -> Result<ExitCode, AppError> {
    let started = Instant::now();
    let parsed = load_body(&args.body)?;
    let dim = parsed.dim();
    let grid = args.grid.build(dim)?;

    let payload = match args.map {
        Map::Phi => {
            let body = parsed.star_body()?;
            profile_payload(star_dual(&body), &grid)
        }
        Map::Flower => {
            let seed = parsed.seed().ok_or(AppError::SeedRequired)?;
            profile_payload(flower(seed, &grid)?.body, &grid)
        }
        Map::Polar => {
            let seed = parsed.seed().ok_or(AppError::SeedRequired)?;
            profile_payload(polar(seed, &grid)?, &grid)
        }
        Map::InversionCheck => {
            let body = parsed.star_body()?;
            DualPayload::InversionCheck(inversion_check(&body, &grid, args.samples)?)
        }
        Map::UnionCheck => {
            let seed = parsed.seed().ok_or(AppError::SeedRequired)?;
            let samples = seed_samples(&parsed, &grid)?;
            DualPayload::UnionCheck(flower_union_check(seed, &grid, &samples)?)
        }
    };

    if let DualPayload::Profile { name, values } = &payload {
        let spec = args.grid.spec_for(dim);
        if let Some(path) = &args.out {
            std::fs::write(path, sampled_spec_json(name, dim, spec, values))?;
        }
        if let Some(path) = &args.csv {
            std::fs::write(path, profile_to_csv(dim, spec, values))?;
        }
    }

    let echo = GridEcho::new(&grid, grid.eps_g(1.0));
    emit(command_echo(), Some(echo), Vec::new(), started, payload);
    Ok(ExitCode::SUCCESS)
}

fn profile_payload(body: StarBody, grid: &starbody::SphereGrid) -> DualPayload {
    DualPayload::Profile {
        name: body.name().to_string(),
        values: body.profile().sample_on(grid),
    }
}

/// Deterministic in-seed samples for the union check: scaled radial
/// endpoints over a coarse sweep (clipped to radius 3 on unbounded rays).
fn seed_samples(
    parsed: &ParsedBody,
    grid: &starbody::SphereGrid,
) -> Result<Vec<Vec<f64>>, AppError> {
    let seed = parsed.seed().ok_or(AppError::SeedRequired)?;
    let mut out = Vec::new();
    let step = (grid.len() / 64).max(1);
    for dir in grid.dirs().iter().step_by(step) {
        let rho = seed.radial(dir)?;
        let reach = if rho.is_infinite() { 3.0 } else { rho.value() };
        if reach > 0.0 {
            out.push(dir.at(reach * 0.999));
        }
    }
    if out.is_empty() {
        return Err(AppError::Precondition("seed has no sampleable interior".to_string()));
    }
    Ok(out)
}
