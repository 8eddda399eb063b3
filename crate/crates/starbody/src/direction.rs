use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `| ||coords|| - 1 |` for unit vectors.
pub const UNIT_TOL: f64 = 1e-12;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(a: &[f64], t: f64) -> Vec<f64> {
    a.iter().map(|x| t * x).collect()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A unit vector in `R^d`, `d >= 2`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Validates that `coords` is a unit vector within [`UNIT_TOL`].
    pub fn new(coords: Vec<f64>) -> Result<Direction> {
        if coords.len() < 2 {
            return Err(Error::invalid("directions need dimension >= 2"));
        }
        let n = norm(&coords);
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::invalid(format!("not a unit vector (norm {n})")));
        }
        Ok(Direction(coords))
    }

    /// Normalizes a nonzero point: `theta_x = x / ||x||`. Undefined for 0.
    pub fn from_point(x: &[f64]) -> Option<Direction> {
        let n = norm(x);
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(Direction(x.iter().map(|c| c / n).collect()))
    }

    /// Unit vector from a 2D polar angle, with exact axis snapping so that
    /// `+-e_1`, `+-e_2` come out bit-exact on aligned grids.
    pub fn from_angle(angle: f64) -> Direction {
        let mut c = angle.cos();
        let mut s = angle.sin();
        if c.abs() < 1e-15 {
            c = 0.0;
            s = s.signum();
        }
        if s.abs() < 1e-15 {
            s = 0.0;
            c = c.signum();
        }
        Direction(vec![c, s])
    }

    /// Canonical axis `e_k` (0-based index) in dimension `d`.
    pub fn axis(d: usize, k: usize) -> Direction {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        Direction(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dot_dir(&self, other: &Direction) -> f64 {
        dot(&self.0, other.coords())
    }

    pub fn component(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn antipode(&self) -> Direction {
        Direction(self.0.iter().map(|c| -c).collect())
    }

    /// The point `t * theta`.
    pub fn at(&self, t: f64) -> Vec<f64> {
        scale_vec(&self.0, t)
    }

    /// Angular distance, clamped for safety near +-1.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        self.dot_dir(other).clamp(-1.0, 1.0).acos()
    }
}

impl std::fmt::Debug for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Dir{:?}", self.0)
    }
}
