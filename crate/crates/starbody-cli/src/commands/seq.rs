use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Args;

use starbody::convergence::{analyze, run_sequence, ConvergenceReport, Thresholds};
use starbody::corpus::corpus;
use starbody::StarBody;

use super::{command_echo, emit, load_body, AppError, GridFlags};

#[derive(Args, Debug)]
pub struct SeqArgs {
    /// Corpus name (moszynska_cones, en_spikes, xn_powers, rotating_segments,
    /// tilting_halfspaces, truncated_parabolas, flower_wedge).
    pub corpus: String,
    /// Candidate limit: a tag (stated, audit, origin, unit-ball, strip,
    /// segment-e1, segment-sym, halfspace-limit) or a body spec path.
    #[arg(long, default_value = "stated")]
    pub candidate: String,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Write the JSON report(s) here (stdout keeps the envelope either way).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a plot-ready CSV trace (columns: n, notion, value).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridFlags,
}

pub fn run(args: SeqArgs) -> Result<ExitCode, AppError> {
    let started = Instant::now();
    let seq = corpus(&args.corpus, args.dim)?;

    let reports: Vec<ConvergenceReport> = match args.candidate.as_str() {
        // The full audit: the stated limit plus derived alternatives.
        "stated" | "audit" => run_sequence(&seq, args.grid.grid_count, args.n_max)?,
        tag => {
            let n_max = args.n_max.unwrap_or_else(|| seq.default_n_max());
            let count = args.grid.grid_count.unwrap_or_else(|| seq.default_grid_count());
            let grid = starbody::make_grid(seq.dim, count, args.grid.grid_seed, !args.grid.asymmetric)?
                .with_extra_directions(&seq.special_directions(n_max));
            let thresholds = Thresholds::for_grid(&grid, seq.trace_lipschitz());
            let candidate = resolve_candidate(tag, &seq)?;
            vec![analyze(&seq, &candidate.1, &candidate.0, n_max, &grid, &thresholds)?]
        }
    };

    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_string_pretty(&reports).expect("serializable"))?;
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, trace_csv(&reports))?;
    }

    let echo = reports.first().map(|r| r.grid.clone());
    emit(command_echo(), echo, Vec::new(), started, &reports);
    Ok(ExitCode::SUCCESS)
}

fn resolve_candidate(
    tag: &str,
    seq: &starbody::corpus::SequenceSpec,
) -> Result<(String, StarBody), AppError> {
    let named = match tag {
        "origin" => Some(StarBody::origin(seq.dim)),
        "unit-ball" => Some(StarBody::ball(seq.dim, 1.0)),
        "strip" | "segment-e1" | "segment-sym" | "halfspace-limit" => {
            let (label, body) = seq.stated_candidate();
            if label == tag {
                Some(body)
            } else {
                seq.alternative_candidates()
                    .into_iter()
                    .find(|(l, _)| l == tag)
                    .map(|(_, b)| b)
                    .or_else(|| builtin_candidate(tag, seq.dim))
            }
        }
        _ => None,
    };
    if let Some(body) = named {
        return Ok((tag.to_string(), body));
    }
    // Otherwise treat the tag as a body-spec path.
    let body = load_body(std::path::Path::new(tag))?.star_body()?;
    Ok((tag.to_string(), body))
}

fn builtin_candidate(tag: &str, dim: usize) -> Option<StarBody> {
    use starbody::Shape;
    let mut e1 = vec![0.0; dim];
    e1[0] = 1.0;
    match tag {
        "segment-e1" => StarBody::from_shape(dim, Shape::Segment { to: e1 }).ok(),
        "segment-sym" => StarBody::from_shape(dim, Shape::SymmetricSegment { to: e1 }).ok(),
        "halfspace-limit" => StarBody::from_shape(dim, Shape::HalfspaceLimit).ok(),
        "strip" => {
            let seed = starbody::ConvexSeed::new(dim, starbody::SeedShape::Strip).ok()?;
            StarBody::from_seed_radial(&std::sync::Arc::new(seed)).ok()
        }
        _ => None,
    }
}

fn trace_csv(reports: &[ConvergenceReport]) -> String {
    let mut out = String::from("n,notion,value\n");
    for r in reports {
        let prefix = if reports.len() > 1 { format!("[{}]", r.candidate) } else { String::new() };
        for notion in &r.notions {
            let tag = format!("{}{}", notion_name(notion.notion), prefix);
            for e in &notion.trace {
                match e.value {
                    Some(v) => out.push_str(&format!("{},{tag},{v}\n", e.n)),
                    None => out.push_str(&format!("{},{tag},inf\n", e.n)),
                }
            }
        }
    }
    out
}

fn notion_name(n: starbody::convergence::Notion) -> &'static str {
    use starbody::convergence::Notion;
    match n {
        Notion::PointwiseRadial => "pointwise_radial",
        Notion::Delta => "delta",
        Notion::RadialAw => "radial_aw",
        Notion::Hausdorff => "hausdorff",
        Notion::Aw => "aw",
    }
}
