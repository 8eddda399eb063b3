use std::f64::consts::PI;

use crate::direction::Direction;
use crate::error::{Error, Result};

/// Covering-radius constant for the d=3 Fibonacci lattice: the maximal hole
/// has angular radius below `C3 / sqrt(count)` (validated empirically in the
/// test suite; the equal-area lower bound is `2 / sqrt(count)`).
pub const FIBONACCI_COVER_C: f64 = 2.6;

/// Loose covering constant for the seeded low-discrepancy grids in d >= 4:
/// `C_HIGH * count^(-1/(d-1))`.
pub const HIGH_DIM_COVER_C: f64 = 4.0;

/// A deterministic finite set of unit directions used as the quadrature
/// domain for every sup/inf over the sphere.
///
/// Construction by dimension: equal angles (d=2), Fibonacci lattice (d=3),
/// seeded Kronecker low-discrepancy points pushed through Box-Muller and
/// normalized (d>=4). Two grids built with equal `(d, count, seed)` have
/// identical direction lists.
#[derive(Clone)]
pub struct SphereGrid {
    dim: usize,
    directions: Vec<Direction>,
    resolution: f64,
    seed: u64,
    symmetric: bool,
    base_count: usize,
}

pub fn make_grid(d: usize, count: usize, seed: u64, symmetric: bool) -> Result<SphereGrid> {
    if d < 2 {
        return Err(Error::invalid(format!("grid dimension must be >= 2, got {d}")));
    }
    if count < 4 {
        return Err(Error::invalid(format!("grid count must be >= 4, got {count}")));
    }
    // Spec files are untrusted input; refuse absurd allocations.
    const MAX_COUNT: usize = 1 << 22;
    if count > MAX_COUNT {
        return Err(Error::invalid(format!("grid count {count} exceeds the cap {MAX_COUNT}")));
    }
    let (directions, resolution) = match d {
        2 => {
            // Antipodal closure for equal angles needs an even count.
            let n = if symmetric && count % 2 == 1 { count + 1 } else { count };
            let dirs = (0..n)
                .map(|k| Direction::from_angle(2.0 * PI * k as f64 / n as f64))
                .collect();
            (dirs, PI / n as f64)
        }
        3 => {
            let dirs = if symmetric {
                let half = count.div_ceil(2);
                let base = fibonacci_points(half);
                let mut all = base.clone();
                all.extend(base.iter().map(Direction::antipode));
                all
            } else {
                fibonacci_points(count)
            };
            let res = FIBONACCI_COVER_C / (dirs.len() as f64).sqrt();
            (dirs, res)
        }
        _ => {
            let dirs = if symmetric {
                let half = count.div_ceil(2);
                let base = kronecker_points(d, half, seed);
                let mut all = base.clone();
                all.extend(base.iter().map(Direction::antipode));
                all
            } else {
                kronecker_points(d, count, seed)
            };
            let res = HIGH_DIM_COVER_C * (dirs.len() as f64).powf(-1.0 / (d as f64 - 1.0));
            (dirs, res)
        }
    };
    Ok(SphereGrid {
        dim: d,
        directions,
        resolution,
        seed,
        symmetric,
        base_count: count,
    })
}

fn fibonacci_points(n: usize) -> Vec<Direction> {
    let golden_angle = PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden_angle * i as f64;
            let v = vec![r * phi.cos(), r * phi.sin(), z];
            Direction::from_point(&v).expect("fibonacci point is nonzero")
        })
        .collect()
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Generalized-golden-ratio Kronecker sequence in the unit cube, mapped to
/// Gaussians via Box-Muller and normalized to the sphere. Deterministic in
/// `(d, count, seed)`; the seed only shifts the sequence origin.
fn kronecker_points(d: usize, count: usize, seed: u64) -> Vec<Direction> {
    let m = d.div_ceil(2) * 2; // uniforms consumed per point (pairs)
    // gamma_m: positive root of x^(m+1) = x + 1.
    let mut g = 1.5f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (m as f64 + 1.0));
    }
    let alphas: Vec<f64> = (1..=m).map(|i| (1.0 / g.powi(i as i32)).fract()).collect();
    let mut st = seed ^ 0xA0761D6478BD642F;
    let offsets: Vec<f64> =
        (0..m).map(|_| (splitmix64(&mut st) as f64) / (u64::MAX as f64)).collect();

    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count {
        k += 1;
        let u: Vec<f64> =
            (0..m).map(|i| (offsets[i] + k as f64 * alphas[i]).fract()).collect();
        let mut coords = Vec::with_capacity(d);
        for p in 0..m / 2 {
            let u1 = u[2 * p].max(1e-12);
            let u2 = u[2 * p + 1];
            let r = (-2.0 * u1.ln()).sqrt();
            coords.push(r * (2.0 * PI * u2).cos());
            if coords.len() < d {
                coords.push(r * (2.0 * PI * u2).sin());
            }
        }
        if let Some(dir) = Direction::from_point(&coords) {
            out.push(dir);
        }
    }
    out
}

impl SphereGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dirs(&self) -> &[Direction] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Upper bound on the covering radius (exact `pi/N` for d=2).
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn base_count(&self) -> usize {
        self.base_count
    }

    /// Grid slack for a profile with Lipschitz bound `l`.
    pub fn eps_g(&self, l: f64) -> f64 {
        l * self.resolution
    }

    /// Nearest grid direction by inner product; ties break to the lowest index.
    pub fn nearest_index(&self, dir: &Direction) -> usize {
        let mut best = 0usize;
        let mut best_dot = f64::NEG_INFINITY;
        for (i, g) in self.directions.iter().enumerate() {
            let d = g.dot_dir(dir);
            if d > best_dot {
                best_dot = d;
                best = i;
            }
        }
        best
    }

    /// Returns a grid extended with `extra` directions (deduplicated against
    /// the existing list). Used to pin corpus-specific directions, e.g. the
    /// rotating-segment axes, so that sup-type reductions see them exactly.
    pub fn with_extra_directions(&self, extra: &[Direction]) -> SphereGrid {
        let mut out = self.clone();
        for e in extra {
            debug_assert_eq!(e.dim(), self.dim);
            let dup = out.directions.iter().any(|g| g.dot_dir(e) > 1.0 - 1e-15);
            if !dup {
                out.directions.push(e.clone());
            }
        }
        out
    }

    pub fn contains_direction(&self, dir: &Direction) -> bool {
        self.directions.iter().any(|g| g.dot_dir(dir) > 1.0 - 1e-15)
    }
}

impl std::fmt::Debug for SphereGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SphereGrid(d={}, n={}, seed={}, symmetric={}, res={:.3e})",
            self.dim,
            self.directions.len(),
            self.seed,
            self.symmetric,
            self.resolution
        )
    }
}
