use std::sync::Arc;

use crate::direction::{norm, Direction};
use crate::error::{Error, Result};
use crate::profile::{DerivedOp, RadialProfile};
use crate::seed::ConvexSeed;
use crate::shapes::Shape;
use crate::xreal::XReal;

/// Optional analytic knowledge about a body. Hints never change computed
/// values; they only tighten test tolerances and report flags.
#[derive(Clone, Debug, Default)]
pub struct Hints {
    pub is_bounded: Option<bool>,
    pub is_closed_claim: Option<bool>,
    pub analytic_sup: Option<XReal>,
    pub analytic_inf: Option<XReal>,
}

/// A star body in R^d under radial-closedness semantics:
/// `x in A` iff `x = 0` or `||x|| <= rho_A(theta_x)`.
#[derive(Clone, Debug)]
pub struct StarBody {
    dim: usize,
    profile: Arc<RadialProfile>,
    name: String,
    hints: Hints,
}

impl StarBody {
    pub fn new(dim: usize, profile: RadialProfile, name: impl Into<String>) -> StarBody {
        let hints = Hints {
            is_bounded: profile.sup_hint().map(|s| s.is_finite()),
            analytic_sup: profile.sup_hint(),
            analytic_inf: profile.inf_hint(),
            is_closed_claim: None,
        };
        StarBody { dim, profile: Arc::new(profile), name: name.into(), hints }
    }

    pub fn from_shape(dim: usize, shape: Shape) -> Result<StarBody> {
        shape.validate(dim)?;
        let name = shape.describe();
        let closed = matches!(
            shape,
            Shape::Ball { .. }
                | Shape::FullSpace
                | Shape::Segment { .. }
                | Shape::SymmetricSegment { .. }
                | Shape::Ray { .. }
                | Shape::Halfspace { .. }
                | Shape::EnSpike { .. }
                | Shape::XnPower { .. }
                | Shape::MoszynskaCone { .. }
        );
        let mut body = StarBody::new(dim, RadialProfile::ClosedForm(shape), name);
        body.hints.is_closed_claim = Some(closed);
        Ok(body)
    }

    /// The star body carrying the seed's own radial map.
    pub fn from_seed_radial(seed: &Arc<ConvexSeed>) -> Result<StarBody> {
        // Reject seeds without an exact radial form up front.
        seed.radial(&Direction::axis(seed.dim, 0))?;
        let mut body = StarBody::new(
            seed.dim,
            RadialProfile::SeedRadial(seed.clone()),
            seed.name.clone(),
        );
        body.hints.is_closed_claim = Some(true);
        Ok(body)
    }

    pub fn ball(dim: usize, radius: f64) -> StarBody {
        StarBody::from_shape(dim, Shape::Ball { radius }).expect("valid ball")
    }

    pub fn origin(dim: usize) -> StarBody {
        StarBody::from_shape(dim, Shape::Ball { radius: 0.0 }).expect("valid origin body")
    }

    pub fn full_space(dim: usize) -> StarBody {
        StarBody::from_shape(dim, Shape::FullSpace).expect("valid full space")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn profile(&self) -> &Arc<RadialProfile> {
        &self.profile
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rename(mut self, name: impl Into<String>) -> StarBody {
        self.name = name.into();
        self
    }

    pub fn hints(&self) -> &Hints {
        &self.hints
    }

    pub fn hints_mut(&mut self) -> &mut Hints {
        &mut self.hints
    }

    /// `rho_A(theta)`.
    pub fn eval_radial(&self, theta: &Direction) -> XReal {
        debug_assert_eq!(theta.dim(), self.dim);
        self.profile.eval(theta)
    }

    /// Radial-closedness membership: `x = 0` or `||x|| <= rho_A(theta_x)`.
    pub fn membership(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        match Direction::from_point(x) {
            None => true,
            Some(theta) => XReal::from_raw(norm(x)) <= self.eval_radial(&theta),
        }
    }

    /// Radial sum: pointwise extended sum of radial functions.
    pub fn radial_sum(&self, other: &StarBody) -> Result<StarBody> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        let name = format!("rsum({}, {})", self.name, other.name);
        Ok(StarBody::new(
            self.dim,
            RadialProfile::Derived(DerivedOp::Sum {
                a: self.profile.clone(),
                b: other.profile.clone(),
            }),
            name,
        ))
    }

    /// `lambda * A` for `lambda > 0`.
    pub fn scale(&self, lambda: f64) -> Result<StarBody> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("scale factor must be positive, got {lambda}")));
        }
        let name = format!("scale({lambda}, {})", self.name);
        Ok(StarBody::new(
            self.dim,
            RadialProfile::Derived(DerivedOp::Scale { inner: self.profile.clone(), factor: lambda }),
            name,
        ))
    }

    /// The truncation `A ∩ eta B`, realized as `min(rho_A, eta)`; always
    /// bounded, and radial distances inside `eta B` are unchanged.
    pub fn truncate(&self, eta: f64) -> StarBody {
        debug_assert!(eta > 0.0);
        let name = format!("trunc({}, {eta})", self.name);
        let mut body = StarBody::new(
            self.dim,
            RadialProfile::Derived(DerivedOp::MinWithConst {
                inner: self.profile.clone(),
                bound: XReal::from_raw(eta),
            }),
            name,
        );
        body.hints.is_bounded = Some(true);
        body.hints.is_closed_claim = self.hints.is_closed_claim;
        body
    }

    /// Pointwise max over a family of bodies of equal dimension.
    pub fn max_family(bodies: &[StarBody]) -> Result<StarBody> {
        let Some(first) = bodies.first() else {
            return Err(Error::invalid("max_family needs at least one body"));
        };
        for b in bodies {
            if b.dim != first.dim {
                return Err(Error::DimensionMismatch { left: first.dim, right: b.dim });
            }
        }
        Ok(StarBody::new(
            first.dim,
            RadialProfile::Derived(DerivedOp::MaxFamily {
                members: bodies.iter().map(|b| b.profile.clone()).collect(),
            }),
            "max_family",
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn membership_examples() {
        let b = StarBody::ball(2, 1.0);
        assert!(b.membership(&[0.3, 0.4]));
        assert!(b.membership(&[0.6, 0.8]));
        assert!(!b.membership(&[0.7, 0.8]));

        let seg = StarBody::from_shape(2, Shape::Segment { to: vec![1.0, 0.0] }).unwrap();
        assert!(!seg.membership(&[0.0, 0.5]));
        assert!(seg.membership(&[0.5, 0.0]));
        assert!(seg.membership(&[0.0, 0.0]));

        // Flower of a ray: the open halfspace plus the origin.
        let flower = StarBody::new(
            2,
            RadialProfile::SeedSupport(Arc::new(
                ConvexSeed::new(2, crate::seed::SeedShape::Ray { dir: Direction::axis(2, 0) })
                    .unwrap(),
            )),
            "ray flower",
        );
        assert!(flower.membership(&[0.2, 5.0]));
        assert!(flower.membership(&[3.0, -1.0]));
        assert!(!flower.membership(&[-0.1, 1.0]));
        assert!(!flower.membership(&[0.0, 1.0]));
    }

    #[test]
    fn radial_sum_of_balls() {
        let a = StarBody::ball(2, 1.5);
        let b = StarBody::ball(2, 2.5);
        let s = a.radial_sum(&b).unwrap();
        assert_eq!(s.eval_radial(&Direction::axis(2, 0)).value(), 4.0);
    }

    #[test]
    fn radial_sum_with_full_space_is_full() {
        let a = StarBody::full_space(2);
        let b = StarBody::ball(2, 1.0);
        let s = a.radial_sum(&b).unwrap();
        assert!(s.eval_radial(&Direction::axis(2, 1)).is_infinite());
    }

    /// rsum([0, e_1], B): 1 everywhere plus an extra unit along e_1.
    #[test]
    fn radial_sum_segment_plus_ball() {
        let seg = StarBody::from_shape(2, Shape::Segment { to: vec![1.0, 0.0] }).unwrap();
        let b = StarBody::ball(2, 1.0);
        let s = seg.radial_sum(&b).unwrap();
        let grid = make_grid(2, 64, 0, true).unwrap();
        for theta in grid.dirs() {
            let bump = if theta.component(0) == 1.0 { 1.0 } else { 0.0 };
            assert_eq!(s.eval_radial(theta).value(), 1.0 + bump);
        }
    }

    #[test]
    fn radial_sum_rejects_dimension_mismatch() {
        let a = StarBody::ball(2, 1.0);
        let b = StarBody::ball(3, 1.0);
        assert!(a.radial_sum(&b).is_err());
    }

    #[test]
    fn scale_examples() {
        let b = StarBody::ball(2, 1.0);
        assert_eq!(b.scale(2.0).unwrap().eval_radial(&Direction::axis(2, 0)).value(), 2.0);
        assert!(b.scale(0.0).is_err());
        assert!(b.scale(-1.0).is_err());
        let seg = StarBody::from_shape(2, Shape::Segment { to: vec![1.0, 0.0] }).unwrap();
        let seg3 = seg.scale(3.0).unwrap();
        assert_eq!(seg3.eval_radial(&Direction::axis(2, 0)).value(), 3.0);
        let full = StarBody::full_space(2).scale(5.0).unwrap();
        assert!(full.eval_radial(&Direction::axis(2, 0)).is_infinite());
    }

    #[test]
    fn truncate_examples() {
        let two_b = StarBody::ball(2, 2.0);
        let t = two_b.truncate(1.0);
        assert_eq!(t.eval_radial(&Direction::axis(2, 0)).value(), 1.0);

        let full = StarBody::full_space(2).truncate(3.0);
        assert_eq!(full.eval_radial(&Direction::axis(2, 1)).value(), 3.0);
    }

    /// Truncation at 1 leaves E_n unchanged (its sup is 1/e < 1).
    #[test]
    fn truncate_en_spike_unchanged() {
        // Independent oracle: dense scan of t*exp(-t) on [0, n].
        let n = 5u32;
        let mut sup = 0.0f64;
        let mut t = 0.0;
        while t <= n as f64 {
            sup = sup.max(t * (-t).exp());
            t += 1e-5;
        }
        assert!((sup - (-1.0f64).exp()).abs() < 1e-9);
        assert!(sup < 1.0);

        let en = StarBody::from_shape(2, Shape::EnSpike { n }).unwrap();
        let trunc = en.truncate(1.0);
        let grid = make_grid(2, 256, 0, true).unwrap();
        for d in grid.dirs() {
            assert_eq!(en.eval_radial(d).value(), trunc.eval_radial(d).value());
        }
    }

    /// Membership/rho consistency: membership(A, lambda*theta) iff
    /// lambda <= rho(theta), for grid directions.
    #[test]
    fn membership_consistent_with_radial() {
        let grid = make_grid(2, 64, 0, true).unwrap();
        let bodies = vec![
            StarBody::ball(2, 1.3),
            StarBody::from_shape(2, Shape::EnSpike { n: 4 }).unwrap(),
            StarBody::from_shape(2, Shape::MoszynskaCone { n: 6 }).unwrap(),
            StarBody::from_shape(2, Shape::Halfspace { normal: Direction::axis(2, 1) }).unwrap(),
        ];
        for body in &bodies {
            for theta in grid.dirs() {
                let rho = body.eval_radial(theta);
                for lambda in [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 7.5] {
                    // Building lambda*theta perturbs the norm by an ulp, so
                    // stay off the exact boundary.
                    if rho.is_finite() && (lambda - rho.value()).abs() < 1e-12 {
                        continue;
                    }
                    let inside = body.membership(&theta.at(lambda));
                    assert_eq!(
                        inside,
                        XReal::from_raw(lambda) <= rho,
                        "{} lambda={lambda} rho={rho:?}",
                        body.name()
                    );
                }
                if rho.is_finite() && rho.value() > 0.0 {
                    let just_inside = rho.value() * (1.0 - 1e-12);
                    assert!(body.membership(&theta.at(just_inside)), "radial closedness");
                }
            }
        }
    }
}
