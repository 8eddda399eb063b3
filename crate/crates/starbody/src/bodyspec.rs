use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::body::StarBody;
use crate::error::{Error, Result};
use crate::grid::{make_grid, SphereGrid};
use crate::profile::RadialProfile;
use crate::seed::{square_seed, ConvexSeed, SeedShape};
use crate::shapes::Shape;
use crate::xreal::XReal;

pub const CLOSED_FORM_NAMES: [&str; 12] = [
    "ball",
    "origin",
    "full_space",
    "segment",
    "symmetric_segment",
    "ray",
    "halfspace",
    "halfspace_limit",
    "en_spike",
    "xn_power",
    "moszynska_cone",
    "truncated_parabola",
];

pub const CONVEX_SEED_NAMES: [&str; 8] =
    ["ball", "segment", "ray", "polygon", "square", "strip", "wedge", "vrep"];

/// Grid parameters as they appear in spec files and CLI flags.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_true")]
    pub symmetric: bool,
}

fn default_true() -> bool {
    true
}

impl GridSpec {
    pub fn build(&self, dim: usize) -> Result<SphereGrid> {
        make_grid(dim, self.count, self.seed, self.symmetric)
    }

    /// Default grid counts by dimension (2048 in the plane, 4096 on S^2).
    pub fn default_count(dim: usize) -> usize {
        if dim == 2 { 2048 } else { 4096 }
    }
}

/// On-disk body specification: `{dim, kind, name, params}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BodySpecFile {
    pub dim: usize,
    pub kind: String,
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

/// A parsed body: either a bare star body or a convex seed (which also acts
/// as a star body through its radial map).
#[derive(Clone, Debug)]
pub enum ParsedBody {
    Star(StarBody),
    Seed(Arc<ConvexSeed>),
}

impl ParsedBody {
    /// The star-body view. Seeds whose radial map has no closed form (general
    /// V-representations) are rejected.
    pub fn star_body(&self) -> Result<StarBody> {
        match self {
            ParsedBody::Star(b) => Ok(b.clone()),
            ParsedBody::Seed(s) => StarBody::from_seed_radial(s),
        }
    }

    pub fn seed(&self) -> Option<&Arc<ConvexSeed>> {
        match self {
            ParsedBody::Seed(s) => Some(s),
            ParsedBody::Star(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ParsedBody::Star(b) => b.dim(),
            ParsedBody::Seed(s) => s.dim,
        }
    }
}

/// Parses a body specification document.
pub fn parse_body_spec(text: &str) -> Result<ParsedBody> {
    let spec: BodySpecFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    build_body(&spec)
}

pub fn build_body(spec: &BodySpecFile) -> Result<ParsedBody> {
    if spec.dim < 2 {
        return Err(Error::invalid("body dimension must be >= 2"));
    }
    if spec.dim > 16 {
        return Err(Error::invalid("body dimension is capped at 16"));
    }
    match spec.kind.as_str() {
        "closed_form" => {
            let shape = closed_form_shape(spec)?;
            Ok(ParsedBody::Star(StarBody::from_shape(spec.dim, shape)?))
        }
        "sampled" => {
            let body = sampled_body(spec)?;
            Ok(ParsedBody::Star(body))
        }
        "convex_seed" => {
            let seed = seed_shape(spec)?;
            Ok(ParsedBody::Seed(Arc::new(ConvexSeed::new(spec.dim, seed)?)))
        }
        other => Err(Error::UnknownCatalogEntry {
            kind: "body kind",
            name: other.to_string(),
            valid: "closed_form, sampled, convex_seed".to_string(),
        }),
    }
}

fn tagged(name: &str, params: &Value) -> Value {
    let mut v = if params.is_null() {
        serde_json::json!({})
    } else {
        params.clone()
    };
    if let Value::Object(map) = &mut v {
        map.insert("name".to_string(), Value::String(name.to_string()));
    }
    v
}

fn closed_form_shape(spec: &BodySpecFile) -> Result<Shape> {
    if spec.name == "origin" {
        return Ok(Shape::Ball { radius: 0.0 });
    }
    if !CLOSED_FORM_NAMES.contains(&spec.name.as_str()) {
        return Err(Error::UnknownCatalogEntry {
            kind: "closed_form",
            name: spec.name.clone(),
            valid: CLOSED_FORM_NAMES.join(", "),
        });
    }
    serde_json::from_value(tagged(&spec.name, &spec.params))
        .map_err(|e| Error::Parse(format!("closed_form params: {e}")))
}

fn seed_shape(spec: &BodySpecFile) -> Result<SeedShape> {
    if spec.name == "square" {
        #[derive(Deserialize)]
        struct Sq {
            half_width: f64,
        }
        let sq: Sq = serde_json::from_value(spec.params.clone())
            .map_err(|e| Error::Parse(format!("square params: {e}")))?;
        if !(sq.half_width > 0.0 && sq.half_width.is_finite()) {
            return Err(Error::invalid("square half_width must be positive"));
        }
        return Ok(square_seed(sq.half_width)?.shape);
    }
    if !CONVEX_SEED_NAMES.contains(&spec.name.as_str()) {
        return Err(Error::UnknownCatalogEntry {
            kind: "convex_seed",
            name: spec.name.clone(),
            valid: CONVEX_SEED_NAMES.join(", "),
        });
    }
    serde_json::from_value(tagged(&spec.name, &spec.params))
        .map_err(|e| Error::Parse(format!("convex_seed params: {e}")))
}

#[derive(Deserialize, Serialize)]
struct SampledParams {
    grid: GridSpec,
    values: Vec<XReal>,
}

fn sampled_body(spec: &BodySpecFile) -> Result<StarBody> {
    let params: SampledParams = serde_json::from_value(spec.params.clone())
        .map_err(|e| Error::Parse(format!("sampled params: {e}")))?;
    let grid = params.grid.build(spec.dim)?;
    if params.values.len() != grid.len() {
        return Err(Error::invalid(format!(
            "sampled profile has {} values for a grid of {} directions",
            params.values.len(),
            grid.len()
        )));
    }
    Ok(StarBody::new(
        spec.dim,
        RadialProfile::Sampled { grid: Arc::new(grid), values: Arc::new(params.values) },
        format!("sampled({})", spec.name),
    ))
}

/// Serializes a profile sampled on `grid` into a body-spec document that
/// re-imports to identical grid values.
pub fn sampled_spec_json(
    name: &str,
    dim: usize,
    grid_spec: GridSpec,
    values: &[XReal],
) -> String {
    let spec = BodySpecFile {
        dim,
        kind: "sampled".to_string(),
        name: name.to_string(),
        params: serde_json::to_value(SampledParams {
            grid: grid_spec,
            values: values.to_vec(),
        })
        .expect("serializable"),
    };
    serde_json::to_string_pretty(&spec).expect("serializable")
}

/// CSV export of a sampled profile: a `# grid:` header comment carrying the
/// reconstruction parameters, then `index,value` rows ('.' decimal separator,
/// `inf` for infinite reach).
pub fn profile_to_csv(dim: usize, grid_spec: GridSpec, values: &[XReal]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# grid: {}\n",
        serde_json::json!({
            "dim": dim,
            "count": grid_spec.count,
            "seed": grid_spec.seed,
            "symmetric": grid_spec.symmetric,
        })
    ));
    out.push_str("index,value\n");
    for (i, v) in values.iter().enumerate() {
        if v.is_infinite() {
            out.push_str(&format!("{i},inf\n"));
        } else {
            out.push_str(&format!("{i},{}\n", v.value()));
        }
    }
    out
}

/// Parses the CSV profile format back into `(dim, grid spec, values)`.
pub fn profile_from_csv(text: &str) -> Result<(usize, GridSpec, Vec<XReal>)> {
    #[derive(Deserialize)]
    struct Header {
        dim: usize,
        count: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_true")]
        symmetric: bool,
    }
    let mut header: Option<Header> = None;
    let mut values: Vec<(usize, XReal)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(json) = rest.trim().strip_prefix("grid:") {
                header = Some(
                    serde_json::from_str(json.trim())
                        .map_err(|e| Error::Parse(format!("grid header: {e}")))?,
                );
            }
            continue;
        }
        if line == "index,value" {
            continue;
        }
        let (idx_s, val_s) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected 'index,value'", lineno + 1)))?;
        let idx: usize = idx_s
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: bad index: {e}", lineno + 1)))?;
        let val = match val_s.trim() {
            "inf" => XReal::INFINITY,
            s => XReal::new(
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: bad value: {e}", lineno + 1)))?,
            )?,
        };
        values.push((idx, val));
    }
    let header = header.ok_or_else(|| Error::Parse("missing '# grid:' header".to_string()))?;
    let grid_spec =
        GridSpec { count: header.count, seed: header.seed, symmetric: header.symmetric };
    let grid = grid_spec.build(header.dim)?;
    if values.len() != grid.len() {
        return Err(Error::Parse(format!(
            "csv has {} rows for a grid of {} directions",
            values.len(),
            grid.len()
        )));
    }
    let mut ordered = vec![XReal::ZERO; values.len()];
    let mut seen = vec![false; values.len()];
    for (idx, v) in values {
        if idx >= ordered.len() || seen[idx] {
            return Err(Error::Parse(format!("bad or duplicate index {idx}")));
        }
        ordered[idx] = v;
        seen[idx] = true;
    }
    Ok((header.dim, grid_spec, ordered))
}

/// Builds the sampled star body described by a CSV profile.
pub fn body_from_csv(text: &str) -> Result<StarBody> {
    let (dim, grid_spec, values) = profile_from_csv(text)?;
    let grid = grid_spec.build(dim)?;
    Ok(StarBody::new(
        dim,
        RadialProfile::Sampled { grid: Arc::new(grid), values: Arc::new(values) },
        "sampled(csv)",
    ))
}
