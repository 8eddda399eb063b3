use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;

use starbody::euclid::{aw_distance, hausdorff};
use starbody::radial::{
    radial_aw_distance, radial_distance_sup_gap, radial_metric, AwResult, DEFAULT_J_MAX,
};
use starbody::report::GridEcho;
use starbody::xreal::XReal;

use super::{command_echo, emit, load_body, AppError, GridFlags};

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Metric {
    /// Radial metric: sup of |rho_1 - rho_2| over the grid.
    Radial,
    /// Radial Attouch-Wets distance.
    Awr,
    /// Classical Attouch-Wets distance.
    Aw,
    /// Hausdorff distance with witnesses.
    Hausdorff,
    /// Structured-sample sup of |d_r(x, A) - d_r(x, B)| inside a ball.
    Gap,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    /// First body spec (JSON, or CSV profile export).
    pub body_a: PathBuf,
    /// Second body spec.
    pub body_b: PathBuf,
    #[arg(long, value_enum)]
    pub metric: Metric,
    /// Ball radius for --metric gap.
    #[arg(long, default_value_t = 3.0)]
    pub radius: f64,
    #[arg(long, default_value_t = DEFAULT_J_MAX)]
    pub j_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub grid: GridFlags,
}

#[derive(Serialize)]
#[serde(tag = "metric", rename_all = "snake_case")]
enum DistPayload {
    Radial { value: XReal },
    Awr(AwResult),
    Aw(AwResult),
    Hausdorff(starbody::euclid::HausdorffResult),
    Gap { value: f64, radius: f64 },
}

pub fn run(args: DistArgs) -> Result<ExitCode, AppError> {
    let started = Instant::now();
    let a = load_body(&args.body_a)?.star_body()?;
    let b = load_body(&args.body_b)?.star_body()?;
    if a.dim() != b.dim() {
        return Err(AppError::DimensionMismatch(format!(
            "bodies have dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let grid = args.grid.build(a.dim())?;
    let mut warnings = Vec::new();
    if matches!(args.metric, Metric::Radial)
        && (a.hints().is_bounded == Some(false) || b.hints().is_bounded == Some(false))
    {
        warnings.push(
            "radial metric on unbounded bodies uses the |inf - inf| = 0 convention".to_string(),
        );
    }
    let payload = match args.metric {
        Metric::Radial => DistPayload::Radial { value: radial_metric(&a, &b, &grid)? },
        Metric::Awr => DistPayload::Awr(radial_aw_distance(&a, &b, &grid, args.j_max)?),
        Metric::Aw => {
            let res = aw_distance(&a, &b, &grid, args.j_max)?;
            if res.closedness_unverified {
                warnings.push(
                    "closedness of an input is unverified; the truncation lemma for d(x, .) \
                     assumes closed sets"
                        .to_string(),
                );
            }
            DistPayload::Aw(res)
        }
        Metric::Hausdorff => DistPayload::Hausdorff(hausdorff(&a, &b, &grid)?),
        Metric::Gap => {
            if args.radius.is_nan() || args.radius <= 0.0 {
                return Err(AppError::Precondition("--radius must be positive".to_string()));
            }
            DistPayload::Gap {
                value: radial_distance_sup_gap(&a, &b, args.radius, &grid)?.value(),
                radius: args.radius,
            }
        }
    };
    match args.format {
        Format::Json => {
            let echo = GridEcho::new(&grid, grid.eps_g(1.0));
            emit(command_echo(), Some(echo), warnings, started, payload);
        }
        Format::Csv => print_csv(&payload),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_csv(payload: &DistPayload) {
    println!("metric,value");
    match payload {
        DistPayload::Radial { value } => println!("radial,{value}"),
        DistPayload::Awr(res) => {
            println!("awr,{}", res.value);
            println!("j,delta_j,term");
            for t in &res.terms {
                println!("{},{},{}", t.j, t.delta_j, t.term);
            }
        }
        DistPayload::Aw(res) => {
            println!("aw,{}", res.value);
            println!("j,delta_j,term");
            for t in &res.terms {
                println!("{},{},{}", t.j, t.delta_j, t.term);
            }
        }
        DistPayload::Hausdorff(res) => println!("hausdorff,{}", res.value),
        DistPayload::Gap { value, .. } => println!("gap,{value}"),
    }
}
