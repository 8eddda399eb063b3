use serde::{Deserialize, Serialize};

use crate::grid::SphereGrid;

/// Grid parameters echoed into every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridEcho {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub symmetric: bool,
    pub resolution: f64,
    pub eps_g: f64,
}

impl GridEcho {
    pub fn new(grid: &SphereGrid, eps_g: f64) -> GridEcho {
        GridEcho {
            dim: grid.dim(),
            count: grid.len(),
            seed: grid.seed(),
            symmetric: grid.symmetric(),
            resolution: grid.resolution(),
            eps_g,
        }
    }
}

/// Envelope wrapping every CLI result. Reruns with identical inputs and
/// seeds produce byte-identical payloads; wall time lives outside the
/// payload for that reason.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportEnvelope<P> {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub grid: Option<GridEcho>,
    pub warnings: Vec<String>,
    pub payload: P,
    pub wall_ms: u128,
}

impl<P: Serialize> ReportEnvelope<P> {
    pub fn new(command: Vec<String>, grid: Option<GridEcho>, payload: P) -> Self {
        ReportEnvelope {
            tool: "starbody".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            grid,
            warnings: Vec::new(),
            payload,
            wall_ms: 0,
        }
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
