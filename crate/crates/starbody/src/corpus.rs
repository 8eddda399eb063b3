use std::fmt;
use std::sync::Arc;

use crate::body::StarBody;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::seed::{ConvexSeed, SeedShape};
use crate::shapes::Shape;

pub const CORPUS_NAMES: [&str; 7] = [
    "moszynska_cones",
    "en_spikes",
    "xn_powers",
    "rotating_segments",
    "tilting_halfspaces",
    "truncated_parabolas",
    "flower_wedge",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusName {
    MoszynskaCones,
    EnSpikes,
    XnPowers,
    RotatingSegments,
    TiltingHalfspaces,
    TruncatedParabolas,
    FlowerWedge,
}

impl fmt::Display for CorpusName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CorpusName {
    pub fn as_str(&self) -> &'static str {
        match self {
            CorpusName::MoszynskaCones => "moszynska_cones",
            CorpusName::EnSpikes => "en_spikes",
            CorpusName::XnPowers => "xn_powers",
            CorpusName::RotatingSegments => "rotating_segments",
            CorpusName::TiltingHalfspaces => "tilting_halfspaces",
            CorpusName::TruncatedParabolas => "truncated_parabolas",
            CorpusName::FlowerWedge => "flower_wedge",
        }
    }
}

/// A deterministic parametrized star-body sequence from the example corpus,
/// with its limit candidates and analysis defaults.
#[derive(Clone, Debug)]
pub struct SequenceSpec {
    pub name: CorpusName,
    pub dim: usize,
}

/// Builds a corpus sequence. Rejects unknown names and dimensions a corpus
/// entry does not support.
pub fn corpus(name: &str, dim: usize) -> Result<SequenceSpec> {
    let tag = match name {
        "moszynska_cones" => CorpusName::MoszynskaCones,
        "en_spikes" => CorpusName::EnSpikes,
        "xn_powers" => CorpusName::XnPowers,
        "rotating_segments" => CorpusName::RotatingSegments,
        "tilting_halfspaces" => CorpusName::TiltingHalfspaces,
        "truncated_parabolas" => CorpusName::TruncatedParabolas,
        "flower_wedge" => CorpusName::FlowerWedge,
        _ => {
            return Err(Error::UnknownCatalogEntry {
                kind: "corpus",
                name: name.to_string(),
                valid: CORPUS_NAMES.join(", "),
            });
        }
    };
    if dim < 2 {
        return Err(Error::invalid("corpus dimension must be >= 2"));
    }
    match tag {
        CorpusName::TruncatedParabolas if dim != 2 => {
            return Err(Error::invalid("truncated_parabolas is available in d = 2 only"));
        }
        CorpusName::MoszynskaCones if dim > 3 => {
            return Err(Error::invalid("moszynska_cones is available in d = 2, 3 only"));
        }
        _ => {}
    }
    Ok(SequenceSpec { name: tag, dim })
}

/// The tilting direction `theta_n = (1/n, sqrt(1 - 1/n^2), 0, ...) -> e_2`.
fn tilt_direction(dim: usize, n: u32) -> Direction {
    let nf = n as f64;
    let mut v = vec![0.0; dim];
    v[0] = 1.0 / nf;
    v[1] = (1.0 - 1.0 / (nf * nf)).sqrt();
    Direction::from_point(&v).expect("nonzero")
}

/// The rotating-segment axis `theta_n = (sqrt(1 - 1/n^2), 1/n, 0, ...) -> e_1`,
/// so the Hausdorff gap to `[0, e_1]` is exactly `1/n`.
fn rot_direction(dim: usize, n: u32) -> Direction {
    let nf = n as f64;
    let mut v = vec![0.0; dim];
    v[0] = (1.0 - 1.0 / (nf * nf)).sqrt();
    v[1] = 1.0 / nf;
    Direction::from_point(&v).expect("nonzero")
}

/// Flower-wedge slope at index n. Grows as n^2 so the Attouch-Wets gap to the
/// strip decays like 1/n at desk scale while every flower image still has
/// infinite reach along e_1.
fn wedge_slope(n: u32) -> f64 {
    (n as f64) * (n as f64)
}

impl SequenceSpec {
    /// The n-th body of the sequence (deterministic, total on n >= 1).
    pub fn body(&self, n: u32) -> StarBody {
        assert!(n >= 1, "corpus indices start at 1");
        match self.name {
            CorpusName::MoszynskaCones => {
                StarBody::from_shape(self.dim, Shape::MoszynskaCone { n }).expect("valid")
            }
            CorpusName::EnSpikes => {
                StarBody::from_shape(self.dim, Shape::EnSpike { n }).expect("valid")
            }
            CorpusName::XnPowers => {
                StarBody::from_shape(self.dim, Shape::XnPower { n }).expect("valid")
            }
            CorpusName::RotatingSegments => StarBody::from_shape(
                self.dim,
                Shape::Segment { to: rot_direction(self.dim, n).coords().to_vec() },
            )
            .expect("valid"),
            CorpusName::TiltingHalfspaces => StarBody::from_shape(
                self.dim,
                Shape::Halfspace { normal: tilt_direction(self.dim, n) },
            )
            .expect("valid"),
            CorpusName::TruncatedParabolas => {
                StarBody::from_shape(self.dim, Shape::TruncatedParabola { n }).expect("valid")
            }
            CorpusName::FlowerWedge => {
                let seed = self.seed(n).expect("flower corpus has seeds");
                StarBody::from_seed_radial(&Arc::new(seed)).expect("wedge radial is exact")
            }
        }
    }

    /// The n-th convex seed, for the flower corpus.
    pub fn seed(&self, n: u32) -> Option<ConvexSeed> {
        match self.name {
            CorpusName::FlowerWedge => Some(
                ConvexSeed::new(self.dim, SeedShape::Wedge { slope: wedge_slope(n) })
                    .expect("valid wedge"),
            ),
            _ => None,
        }
    }

    /// The limit seed for the flower corpus (the strip K).
    pub fn limit_seed(&self) -> Option<ConvexSeed> {
        match self.name {
            CorpusName::FlowerWedge => {
                Some(ConvexSeed::new(self.dim, SeedShape::Strip).expect("valid strip"))
            }
            _ => None,
        }
    }

    /// The limit candidate stated by the source example.
    pub fn stated_candidate(&self) -> (String, StarBody) {
        match self.name {
            CorpusName::MoszynskaCones => ("unit-ball".into(), StarBody::ball(self.dim, 1.0)),
            CorpusName::EnSpikes => ("origin".into(), StarBody::origin(self.dim)),
            CorpusName::XnPowers => ("segment-sym".into(), self.symmetric_segment()),
            CorpusName::RotatingSegments => ("segment-e1".into(), self.segment_e1()),
            CorpusName::TiltingHalfspaces => (
                "halfspace-limit".into(),
                StarBody::from_shape(self.dim, Shape::HalfspaceLimit).expect("valid"),
            ),
            CorpusName::TruncatedParabolas => ("origin".into(), StarBody::origin(self.dim)),
            CorpusName::FlowerWedge => (
                "strip".into(),
                StarBody::from_seed_radial(&Arc::new(self.limit_seed().unwrap()))
                    .expect("strip radial is exact"),
            ),
        }
    }

    /// Implementer-derived alternative candidates (see the audit notes on the
    /// truncated parabola, whose stated limit disagrees with its profile at
    /// +-e_1, and the rotating segments, whose pointwise radial limit is {0}).
    pub fn alternative_candidates(&self) -> Vec<(String, StarBody)> {
        match self.name {
            CorpusName::TruncatedParabolas => {
                vec![("segment-sym".into(), self.symmetric_segment())]
            }
            CorpusName::RotatingSegments => {
                vec![("origin".into(), StarBody::origin(self.dim))]
            }
            _ => vec![],
        }
    }

    fn symmetric_segment(&self) -> StarBody {
        let mut to = vec![0.0; self.dim];
        to[0] = 1.0;
        StarBody::from_shape(self.dim, Shape::SymmetricSegment { to }).expect("valid")
    }

    fn segment_e1(&self) -> StarBody {
        let mut to = vec![0.0; self.dim];
        to[0] = 1.0;
        StarBody::from_shape(self.dim, Shape::Segment { to }).expect("valid")
    }

    /// Directions the analysis grid must contain exactly: sequence axes and
    /// per-n extremal directions (e.g. the E_n maximizers at <theta,e_1>=1/n).
    pub fn special_directions(&self, n_max: u32) -> Vec<Direction> {
        let mut dirs = vec![Direction::axis(self.dim, 0), Direction::axis(self.dim, 1)];
        if self.dim >= 2 {
            dirs.push(Direction::axis(self.dim, 0).antipode());
            dirs.push(Direction::axis(self.dim, self.dim - 1));
        }
        match self.name {
            CorpusName::RotatingSegments => {
                dirs.extend((1..=n_max).map(|n| rot_direction(self.dim, n)));
            }
            CorpusName::EnSpikes => {
                dirs.extend((1..=n_max).map(|n| tilt_direction(self.dim, n)));
            }
            _ => {}
        }
        dirs
    }

    /// Defaults for the separation suite, chosen so every per-direction
    /// transient of the sequence settles within the analyzed range.
    pub fn default_n_max(&self) -> u32 {
        match self.name {
            CorpusName::TiltingHalfspaces | CorpusName::TruncatedParabolas => 200,
            _ => 60,
        }
    }

    pub fn default_grid_count(&self) -> usize {
        match (self.name, self.dim) {
            (CorpusName::EnSpikes, 2) => 8192,
            (CorpusName::TiltingHalfspaces, 2) => 1024,
            (CorpusName::TruncatedParabolas, 2) => 1024,
            // The Attouch-Wets trace of the wedge family decays like 1/n;
            // the endpoint kernel must resolve radius-n features.
            (CorpusName::FlowerWedge, 2) => 8192,
            (_, 2) => 2048,
            (_, _) => 4096,
        }
    }

    /// Documented Lipschitz-style constant for the trace slack
    /// `eps_g = L * resolution`. For jump profiles the trace extrema sit on
    /// pinned grid directions, so a small constant is appropriate.
    pub fn trace_lipschitz(&self) -> f64 {
        match self.name {
            CorpusName::TiltingHalfspaces | CorpusName::FlowerWedge => 1.0,
            _ => 2.0,
        }
    }

    /// Whether every member of the sequence is bounded.
    pub fn bounded_family(&self) -> bool {
        !matches!(self.name, CorpusName::TiltingHalfspaces | CorpusName::FlowerWedge)
    }

    /// Whether every member is a closed set (tilting halfspaces are closed;
    /// wedges and strips are closed; the parabola star bodies are closed).
    pub fn closed_family(&self) -> bool {
        true
    }
}
