use std::sync::Arc;

use crate::direction::Direction;
use crate::grid::SphereGrid;
use crate::seed::ConvexSeed;
use crate::shapes::Shape;
use crate::xreal::XReal;

/// An evaluable map from unit directions to `[0, inf]` — the sole
/// representation of a radially closed star body.
#[derive(Clone, Debug)]
pub enum RadialProfile {
    /// Analytic catalog entry.
    ClosedForm(Shape),
    /// Exact radial map of a convex seed.
    SeedRadial(Arc<ConvexSeed>),
    /// Support function of a convex seed (the flower profile).
    SeedSupport(Arc<ConvexSeed>),
    /// Values on a fixed grid; off-grid directions evaluate by nearest grid
    /// neighbor (ties break to the lowest index).
    Sampled { grid: Arc<SphereGrid>, values: Arc<Vec<XReal>> },
    /// Lazy pointwise combination of operand profiles.
    Derived(DerivedOp),
}

#[derive(Clone, Debug)]
pub enum DerivedOp {
    /// `min(rho, bound)` — the truncation `A ∩ bound*B`.
    MinWithConst { inner: Arc<RadialProfile>, bound: XReal },
    /// `1 / rho` under `1/0 = inf`, `1/inf = 0`.
    Reciprocal { inner: Arc<RadialProfile> },
    /// `rho_a + rho_b` (extended).
    Sum { a: Arc<RadialProfile>, b: Arc<RadialProfile> },
    /// `lambda * rho`, `lambda > 0`.
    Scale { inner: Arc<RadialProfile>, factor: f64 },
    /// Pointwise max over a family.
    MaxFamily { members: Vec<Arc<RadialProfile>> },
}

impl RadialProfile {
    pub fn eval(&self, theta: &Direction) -> XReal {
        match self {
            RadialProfile::ClosedForm(shape) => shape.eval(theta),
            RadialProfile::SeedRadial(seed) => {
                seed.radial(theta).expect("seed radial availability checked at construction")
            }
            RadialProfile::SeedSupport(seed) => seed.support(theta),
            RadialProfile::Sampled { grid, values } => values[grid.nearest_index(theta)],
            RadialProfile::Derived(op) => match op {
                DerivedOp::MinWithConst { inner, bound } => inner.eval(theta).min_with(*bound),
                DerivedOp::Reciprocal { inner } => inner.eval(theta).recip(),
                DerivedOp::Sum { a, b } => a.eval(theta) + b.eval(theta),
                DerivedOp::Scale { inner, factor } => inner.eval(theta).scale(*factor),
                DerivedOp::MaxFamily { members } => members
                    .iter()
                    .map(|m| m.eval(theta))
                    .fold(XReal::ZERO, XReal::max_with),
            },
        }
    }

    /// Evaluates the profile at every direction of `grid`, with a fast path
    /// for `Sampled` profiles stored on an identical grid.
    pub fn sample_on(&self, grid: &SphereGrid) -> Vec<XReal> {
        if let RadialProfile::Sampled { grid: own, values } = self {
            if grids_identical(own, grid) {
                return values.as_ref().clone();
            }
        }
        grid.dirs().iter().map(|d| self.eval(d)).collect()
    }

    /// Lipschitz bound over the sphere when one is known; `None` marks jump
    /// profiles.
    pub fn lipschitz_hint(&self) -> Option<f64> {
        match self {
            RadialProfile::ClosedForm(shape) => shape.lipschitz(),
            RadialProfile::SeedRadial(_) | RadialProfile::SeedSupport(_) => None,
            RadialProfile::Sampled { .. } => None,
            RadialProfile::Derived(op) => match op {
                DerivedOp::MinWithConst { inner, .. } => inner.lipschitz_hint(),
                DerivedOp::Reciprocal { .. } => None,
                DerivedOp::Sum { a, b } => Some(a.lipschitz_hint()? + b.lipschitz_hint()?),
                DerivedOp::Scale { inner, factor } => Some(factor * inner.lipschitz_hint()?),
                DerivedOp::MaxFamily { members } => {
                    let mut best = 0.0f64;
                    for m in members {
                        best = best.max(m.lipschitz_hint()?);
                    }
                    Some(best)
                }
            },
        }
    }

    /// Analytic sup of the profile, when derivable.
    pub fn sup_hint(&self) -> Option<XReal> {
        match self {
            RadialProfile::ClosedForm(shape) => shape.sup(),
            RadialProfile::SeedRadial(_) | RadialProfile::SeedSupport(_) => None,
            RadialProfile::Sampled { values, .. } => {
                Some(values.iter().copied().fold(XReal::ZERO, XReal::max_with))
            }
            RadialProfile::Derived(op) => match op {
                DerivedOp::MinWithConst { inner, bound } => {
                    Some(inner.sup_hint()?.min_with(*bound))
                }
                DerivedOp::Reciprocal { inner } => Some(inner.inf_hint()?.recip()),
                DerivedOp::Sum { a, b } => Some(a.sup_hint()? + b.sup_hint()?),
                DerivedOp::Scale { inner, factor } => Some(inner.sup_hint()?.scale(*factor)),
                DerivedOp::MaxFamily { members } => {
                    let mut best = XReal::ZERO;
                    for m in members {
                        best = best.max_with(m.sup_hint()?);
                    }
                    Some(best)
                }
            },
        }
    }

    /// Analytic inf of the profile, when derivable.
    pub fn inf_hint(&self) -> Option<XReal> {
        match self {
            RadialProfile::ClosedForm(shape) => shape.inf(),
            RadialProfile::SeedRadial(_) | RadialProfile::SeedSupport(_) => None,
            RadialProfile::Sampled { values, .. } => {
                Some(values.iter().copied().fold(XReal::INFINITY, XReal::min_with))
            }
            RadialProfile::Derived(op) => match op {
                DerivedOp::MinWithConst { inner, bound } => {
                    Some(inner.inf_hint()?.min_with(*bound))
                }
                DerivedOp::Reciprocal { inner } => Some(inner.sup_hint()?.recip()),
                DerivedOp::Sum { a, b } => Some(a.inf_hint()? + b.inf_hint()?),
                DerivedOp::Scale { inner, factor } => Some(inner.inf_hint()?.scale(*factor)),
                DerivedOp::MaxFamily { members } => {
                    let mut best = XReal::ZERO;
                    for m in members {
                        best = best.max_with(m.inf_hint()?);
                    }
                    Some(best)
                }
            },
        }
    }

    pub fn describe(&self) -> String {
        match self {
            RadialProfile::ClosedForm(shape) => shape.describe(),
            RadialProfile::SeedRadial(seed) => seed.name.clone(),
            RadialProfile::SeedSupport(seed) => format!("flower({})", seed.name),
            RadialProfile::Sampled { grid, .. } => format!("sampled({} dirs)", grid.len()),
            RadialProfile::Derived(op) => match op {
                DerivedOp::MinWithConst { inner, bound } => {
                    format!("trunc({}, {bound})", inner.describe())
                }
                DerivedOp::Reciprocal { inner } => format!("phi({})", inner.describe()),
                DerivedOp::Sum { a, b } => format!("rsum({}, {})", a.describe(), b.describe()),
                DerivedOp::Scale { inner, factor } => {
                    format!("scale({factor}, {})", inner.describe())
                }
                DerivedOp::MaxFamily { members } => format!("max_of({})", members.len()),
            },
        }
    }
}

/// Grids from the deterministic constructor are identical iff their build
/// parameters and length agree; spot-check a few directions to cover grids
/// extended with extra directions.
fn grids_identical(a: &SphereGrid, b: &SphereGrid) -> bool {
    if a.dim() != b.dim()
        || a.len() != b.len()
        || a.seed() != b.seed()
        || a.symmetric() != b.symmetric()
        || a.base_count() != b.base_count()
    {
        return false;
    }
    let n = a.len();
    for idx in [0, n / 3, n / 2, n - 1] {
        if a.dirs()[idx].coords() != b.dirs()[idx].coords() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn sampled_nearest_neighbor_with_tie_break() {
        let grid = Arc::new(make_grid(2, 4, 0, true).unwrap());
        let values = Arc::new(vec![
            XReal::from_raw(1.0),
            XReal::from_raw(2.0),
            XReal::from_raw(3.0),
            XReal::from_raw(4.0),
        ]);
        let p = RadialProfile::Sampled { grid: grid.clone(), values };
        // On-grid: exact.
        assert_eq!(p.eval(&Direction::axis(2, 1)).value(), 2.0);
        // Equidistant between (1,0) and (0,1): lowest index wins.
        let mid = Direction::from_point(&[1.0, 1.0]).unwrap();
        assert_eq!(p.eval(&mid).value(), 1.0);
    }

    #[test]
    fn derived_min_is_bit_exact() {
        let inner = Arc::new(RadialProfile::ClosedForm(Shape::Ball { radius: 2.0 }));
        let t = RadialProfile::Derived(DerivedOp::MinWithConst {
            inner: inner.clone(),
            bound: XReal::from_raw(1.0),
        });
        let th = Direction::from_angle(0.37);
        assert_eq!(t.eval(&th).value(), inner.eval(&th).value().min(1.0));
    }

    #[test]
    fn sum_handles_infinity() {
        let a = Arc::new(RadialProfile::ClosedForm(Shape::FullSpace));
        let b = Arc::new(RadialProfile::ClosedForm(Shape::Ball { radius: 1.0 }));
        let s = RadialProfile::Derived(DerivedOp::Sum { a, b });
        assert!(s.eval(&Direction::axis(2, 0)).is_infinite());
    }

    #[test]
    fn sample_on_fast_path_matches_slow_path() {
        let grid = Arc::new(make_grid(2, 32, 9, false).unwrap());
        let values: Vec<XReal> =
            (0..32).map(|k| XReal::from_raw(1.0 + (k as f64) * 0.1)).collect();
        let p = RadialProfile::Sampled { grid: grid.clone(), values: Arc::new(values) };
        let fast = p.sample_on(&grid);
        let slow: Vec<XReal> = grid.dirs().iter().map(|d| p.eval(d)).collect();
        assert_eq!(fast, slow);
    }
}
