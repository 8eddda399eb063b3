use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::body::StarBody;
use crate::direction::{dot, norm, Direction};
use crate::error::{Error, Result};
use crate::euclid::aw_distance;
use crate::grid::SphereGrid;
use crate::profile::{DerivedOp, RadialProfile};
use crate::radial::{check_dims, radial_aw_distance, radial_metric, AwResult};
use crate::seed::{ConvexSeed, SeedShape};
use crate::xreal::XReal;

/// Star duality `Phi`: `rho_{Phi(A)} = 1 / rho_A` under `1/0 = inf`,
/// `1/inf = 0`. On derived reciprocal profiles the involution cancels
/// structurally, so `Phi(Phi(A))` evaluates bit-identically to `A`.
pub fn star_dual(a: &StarBody) -> StarBody {
    if let RadialProfile::Derived(DerivedOp::Reciprocal { inner }) = a.profile().as_ref() {
        return StarBody::new(a.dim(), inner.as_ref().clone(), format!("phi({})", a.name()));
    }
    StarBody::new(
        a.dim(),
        RadialProfile::Derived(DerivedOp::Reciprocal { inner: a.profile().clone() }),
        format!("phi({})", a.name()),
    )
}

/// Report of the spherical-inversion identity check
/// `Phi(A) = rc(R^d \ i(A))`, verified pointwise on a log-spaced radius
/// ladder: `lambda theta` lies outside `i(A)` iff `lambda <= 1/rho_A(theta)`,
/// where `lambda theta in i(A)` iff `rho_A(theta) >= 1/lambda`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InversionReport {
    pub directions: usize,
    pub samples: usize,
    pub violations: usize,
    pub skipped_boundary: usize,
}

/// Boundary slack for the half-open inversion boundary.
const INVERSION_BOUNDARY_SLACK: f64 = 1e-9;

pub fn inversion_check(
    a: &StarBody,
    grid: &SphereGrid,
    samples_per_direction: usize,
) -> Result<InversionReport> {
    if samples_per_direction < 3 {
        return Err(Error::invalid("need at least 3 samples per direction"));
    }
    let phi = star_dual(a);
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut skipped = 0usize;
    let m = samples_per_direction;
    for theta in grid.dirs() {
        let rho = a.eval_radial(theta);
        let rho_phi = phi.eval_radial(theta);
        for k in 0..m {
            // Ladder spanning [1e-3, 1e3].
            let lambda = 10f64.powf(-3.0 + 6.0 * k as f64 / (m as f64 - 1.0));
            if rho.is_finite() && rho.value() > 0.0 && (lambda * rho.value() - 1.0).abs() <= INVERSION_BOUNDARY_SLACK
            {
                skipped += 1;
                continue;
            }
            checked += 1;
            let in_inversion = rho >= XReal::from_raw(1.0 / lambda);
            let outside_by_phi = XReal::from_raw(lambda) <= rho_phi;
            if in_inversion == outside_by_phi {
                violations += 1;
            }
        }
    }
    Ok(InversionReport {
        directions: grid.len(),
        samples: checked,
        violations,
        skipped_boundary: skipped,
    })
}

/// Support function access (`h_K`), exposed at module level.
pub fn support(seed: &ConvexSeed, theta: &Direction) -> XReal {
    seed.support(theta)
}

/// A flower with its seed provenance.
#[derive(Clone, Debug)]
pub struct FlowerBody {
    pub body: StarBody,
    pub seed: Arc<ConvexSeed>,
}

/// The flower of a convex seed: the star body with `rho = h_K`.
pub fn flower(seed: &Arc<ConvexSeed>, grid: &SphereGrid) -> Result<FlowerBody> {
    for theta in grid.dirs() {
        let h = seed.support(theta);
        if h.is_finite() && h.value() < 0.0 {
            return Err(Error::invalid(format!(
                "support is negative at {theta:?}: the seed does not contain the origin"
            )));
        }
    }
    let mut body = StarBody::new(
        seed.dim,
        RadialProfile::SeedSupport(seed.clone()),
        format!("flower({})", seed.name),
    );
    // Compact seeds have compact (hence closed) flowers.
    body.hints_mut().is_closed_claim = match seed.shape {
        SeedShape::Segment { .. } | SeedShape::Ball { .. } | SeedShape::Polygon { .. } => {
            Some(true)
        }
        _ => None,
    };
    Ok(FlowerBody { body, seed: seed.clone() })
}

/// Flower-as-union report: over sample points `x in K`, the ball profiles
/// `<x, theta>_+` must stay below `h_K(theta)` at every grid direction, and
/// the worst gap must shrink as the sample set densifies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnionReport {
    /// `(samples used, max gap over grid directions with finite support)`.
    pub stages: Vec<(usize, f64)>,
    pub monotone: bool,
    /// True when no sample ever exceeded the support.
    pub dominated: bool,
    pub skipped_infinite_support: usize,
}

pub fn flower_union_check(
    seed: &ConvexSeed,
    grid: &SphereGrid,
    samples: &[Vec<f64>],
) -> Result<UnionReport> {
    // Validate samples through the seed's radial membership.
    for x in samples {
        if x.len() != seed.dim {
            return Err(Error::DimensionMismatch { left: x.len(), right: seed.dim });
        }
        if let Some(theta) = Direction::from_point(x) {
            let rho = seed.radial(&theta)?;
            if XReal::from_raw(norm(x)) > rho {
                return Err(Error::invalid(format!("sample {x:?} lies outside the seed")));
            }
        }
    }
    let stage_counts: Vec<usize> = {
        let n = samples.len();
        let mut cs: Vec<usize> = [n.div_ceil(4), n.div_ceil(2), n]
            .into_iter()
            .filter(|&c| c > 0)
            .collect();
        cs.dedup();
        cs
    };
    let mut stages = Vec::new();
    let mut dominated = true;
    let mut skipped = 0usize;
    for &count in &stage_counts {
        let used = &samples[..count];
        let mut max_gap = 0.0f64;
        for theta in grid.dirs() {
            let h = seed.support(theta);
            if h.is_infinite() {
                skipped += 1;
                continue;
            }
            let best = used
                .iter()
                .map(|x| dot(x, theta.coords()).max(0.0))
                .fold(0.0f64, f64::max);
            let gap = h.value() - best;
            if gap < -1e-12 {
                dominated = false;
            }
            max_gap = max_gap.max(gap.max(0.0));
        }
        stages.push((count, max_gap));
    }
    let monotone = stages.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    Ok(UnionReport { stages, monotone, dominated, skipped_infinite_support: skipped })
}

/// Polar body through the decomposition `K^o = Phi(K^clubsuit)`:
/// profile `theta -> 1 / h_K(theta)`.
pub fn polar(seed: &Arc<ConvexSeed>, grid: &SphereGrid) -> Result<StarBody> {
    let f = flower(seed, grid)?;
    Ok(star_dual(&f.body).rename(format!("polar({})", seed.name)))
}

/// Direct polar membership: `y in K^o` iff `<y, p> <= 1` for every point
/// generator and `<y, r> <= 0` for every ray generator (balls are handled by
/// `r ||y|| <= 1`). Independent of the `1/h` route.
pub fn polar_member_direct(seed: &ConvexSeed, y: &[f64]) -> bool {
    if let Some(r) = seed.is_ball() {
        return r * norm(y) <= 1.0;
    }
    let (points, rays) = seed.generators();
    points.iter().all(|p| dot(y, p) <= 1.0) && rays.iter().all(|r| dot(y, r) <= 0.0)
}

/// Radial reach of the direct polar along `theta`, by bracketed bisection on
/// the monotone membership predicate.
pub fn polar_oracle_radial(seed: &ConvexSeed, theta: &Direction) -> XReal {
    let member = |lambda: f64| polar_member_direct(seed, &theta.at(lambda));
    if !member(1e-12) {
        return XReal::ZERO;
    }
    let mut hi = 1.0f64;
    while member(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return XReal::INFINITY;
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if member(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    XReal::from_raw(lo)
}

/// Flower distance `d_club(F_1, F_2) := d_AW(K_1, K_2)` — the Attouch-Wets
/// distance between the seeds, computed on their radial star bodies. Requires
/// seed provenance (there is no intrinsic formula on bare flowers).
pub fn flower_distance(
    f1: &FlowerBody,
    f2: &FlowerBody,
    grid: &SphereGrid,
    j_max: u32,
) -> Result<AwResult> {
    let k1 = StarBody::from_seed_radial(&f1.seed)?;
    let k2 = StarBody::from_seed_radial(&f2.seed)?;
    aw_distance(&k1, &k2, grid, j_max)
}

/// Report of the duality-continuity modulus on bodies with `rho >= r0`:
/// `delta(Phi(A), Phi(X)) <= 2 delta(A, X) / r0^2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModulusReport {
    pub delta_ax: f64,
    pub delta_phi: f64,
    pub bound: f64,
    /// `rho_A >= r0` and `rho_X >= r0` on the grid.
    pub lower_bound_ok: bool,
    /// The remark's smallness hypothesis `delta(A,X) < r0/2`.
    pub delta_small_ok: bool,
    pub inequality_holds: bool,
}

pub fn phi_modulus_check(
    a: &StarBody,
    x: &StarBody,
    r0: f64,
    grid: &SphereGrid,
) -> Result<ModulusReport> {
    check_dims(a, x)?;
    if r0.is_nan() || r0 <= 0.0 {
        return Err(Error::invalid("r0 must be positive"));
    }
    let ra = a.profile().sample_on(grid);
    let rx = x.profile().sample_on(grid);
    let lower_bound_ok = ra
        .iter()
        .chain(rx.iter())
        .all(|v| v.is_finite() && v.value() >= r0 - 1e-12);
    let delta_ax = radial_metric(a, x, grid)?.value();
    let pa = star_dual(a);
    let px = star_dual(x);
    let delta_phi = radial_metric(&pa, &px, grid)?.value();
    let bound = 2.0 * delta_ax / (r0 * r0);
    Ok(ModulusReport {
        delta_ax,
        delta_phi,
        bound,
        lower_bound_ok,
        delta_small_ok: delta_ax < r0 / 2.0,
        inequality_holds: delta_phi <= bound + 1e-12,
    })
}

/// Report of the interior-ball stability lemma: if `(1/j0) B ⊆ A` and
/// `d_AWr(A, X) < 1/(2 j0)`, then `(1/(2 j0)) B ⊆ X` (strictly, on the grid).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallContainmentReport {
    pub precondition_ok: bool,
    pub d_awr: f64,
    /// Whether the lemma's hypothesis `d_AWr < 1/(2 j0)` fired.
    pub applicable: bool,
    pub min_rho_x: f64,
    pub pass: bool,
}

pub fn ball_containment_check(
    a: &StarBody,
    x: &StarBody,
    j0: u32,
    grid: &SphereGrid,
    j_max: u32,
) -> Result<BallContainmentReport> {
    check_dims(a, x)?;
    if j0 == 0 {
        return Err(Error::invalid("j0 must be >= 1"));
    }
    let inv_j0 = 1.0 / j0 as f64;
    let ra = a.profile().sample_on(grid);
    let precondition_ok = ra.iter().all(|v| *v >= XReal::from_raw(inv_j0));
    let d_awr = radial_aw_distance(a, x, grid, j_max)?.value;
    let applicable = precondition_ok && d_awr < 0.5 * inv_j0;
    let min_rho_x = x
        .profile()
        .sample_on(grid)
        .into_iter()
        .fold(XReal::INFINITY, XReal::min_with);
    let pass = !applicable || min_rho_x.value() > 0.5 * inv_j0;
    Ok(BallContainmentReport {
        precondition_ok,
        d_awr,
        applicable,
        min_rho_x: min_rho_x.value(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::shapes::Shape;

    fn grid2(n: usize) -> SphereGrid {
        make_grid(2, n, 0, true).unwrap()
    }

    #[test]
    fn phi_fixes_the_unit_ball_and_inverts_radii() {
        let grid = grid2(64);
        let b = StarBody::ball(2, 1.0);
        let phi_b = star_dual(&b);
        for d in grid.dirs() {
            assert_eq!(phi_b.eval_radial(d).value(), 1.0);
        }
        let rb = StarBody::ball(2, 4.0);
        assert_eq!(star_dual(&rb).eval_radial(&Direction::axis(2, 0)).value(), 0.25);
    }

    #[test]
    fn phi_of_segment() {
        let u = Direction::axis(2, 0);
        let seg = StarBody::from_shape(2, Shape::Segment { to: u.coords().to_vec() }).unwrap();
        let phi = star_dual(&seg);
        assert_eq!(phi.eval_radial(&u).value(), 1.0);
        assert!(phi.eval_radial(&Direction::axis(2, 1)).is_infinite());
    }

    #[test]
    fn double_dual_is_structurally_exact() {
        let grid = grid2(128);
        let bodies = [
            StarBody::from_shape(2, Shape::EnSpike { n: 3 }).unwrap(),
            StarBody::from_shape(2, Shape::MoszynskaCone { n: 7 }).unwrap(),
            StarBody::from_shape(2, Shape::Ray { dir: Direction::axis(2, 0) }).unwrap(),
            StarBody::origin(2),
            StarBody::full_space(2),
        ];
        for a in &bodies {
            let aa = star_dual(&star_dual(a));
            for d in grid.dirs() {
                let lhs = aa.eval_radial(d);
                let rhs = a.eval_radial(d);
                assert_eq!(lhs, rhs, "{} at {d:?}", a.name());
            }
        }
    }

    #[test]
    fn order_reversal_is_exact() {
        let grid = grid2(128);
        let a = StarBody::from_shape(2, Shape::EnSpike { n: 5 }).unwrap();
        let b = StarBody::ball(2, 1.0); // rho_a <= rho_b everywhere
        let pa = star_dual(&a);
        let pb = star_dual(&b);
        for d in grid.dirs() {
            assert!(a.eval_radial(d) <= b.eval_radial(d));
            assert!(pb.eval_radial(d) <= pa.eval_radial(d));
        }
    }

    #[test]
    fn inversion_check_has_no_violations() {
        let grid = grid2(64);
        for body in [
            StarBody::ball(2, 1.0),
            StarBody::ball(2, 2.0),
            StarBody::from_shape(2, Shape::Segment { to: vec![1.0, 0.0] }).unwrap(),
        ] {
            let rep = inversion_check(&body, &grid, 9).unwrap();
            assert_eq!(rep.violations, 0, "{}", body.name());
        }
    }

    #[test]
    fn flower_of_segment_is_the_diameter_ball() {
        let grid = grid2(256);
        let x = vec![0.8, 0.6];
        let seed = Arc::new(ConvexSeed::new(2, SeedShape::Segment { to: x.clone() }).unwrap());
        let f = flower(&seed, &grid).unwrap();
        for d in grid.dirs() {
            let want = dot(&x, d.coords()).max(0.0);
            assert_eq!(f.body.eval_radial(d).value(), want);
        }
    }

    #[test]
    fn flower_of_ray_is_open_halfspace_with_origin() {
        let grid = grid2(64);
        let u = Direction::axis(2, 0);
        let seed = Arc::new(ConvexSeed::new(2, SeedShape::Ray { dir: u.clone() }).unwrap());
        let f = flower(&seed, &grid).unwrap();
        assert!(f.body.eval_radial(&u).is_infinite());
        assert_eq!(f.body.eval_radial(&Direction::axis(2, 1)), XReal::ZERO);
        assert!(f.body.membership(&[0.5, -3.0]));
        assert!(!f.body.membership(&[-0.5, 3.0]));
    }

    #[test]
    fn polar_of_ball_and_square() {
        let grid = grid2(256);
        let rb = Arc::new(ConvexSeed::new(2, SeedShape::Ball { radius: 4.0 }).unwrap());
        let p = polar(&rb, &grid).unwrap();
        assert_eq!(p.eval_radial(&Direction::axis(2, 0)).value(), 0.25);

        let sq = Arc::new(crate::seed::square_seed(1.0).unwrap());
        let psq = polar(&sq, &grid).unwrap();
        for d in grid.dirs() {
            let want = 1.0 / (d.component(0).abs() + d.component(1).abs());
            assert!((psq.eval_radial(d).value() - want).abs() < 1e-12);
            let oracle = polar_oracle_radial(&sq, d);
            assert!((psq.eval_radial(d).value() - oracle.value()).abs() < 1e-9);
        }
    }

    #[test]
    fn polar_of_strip_matches_direct_description() {
        let grid = grid2(256);
        let strip = Arc::new(ConvexSeed::new(2, SeedShape::Strip).unwrap());
        let p = polar(&strip, &grid).unwrap();
        for d in grid.dirs() {
            let (t1, t2) = (d.component(0), d.component(1));
            let got = p.eval_radial(d);
            let oracle = polar_oracle_radial(&strip, d);
            if t2 > 0.0 {
                assert_eq!(got, XReal::ZERO);
                assert_eq!(oracle, XReal::ZERO);
            } else if t1 <= 0.0 {
                assert!(got.is_infinite());
                assert!(oracle.is_infinite());
            } else {
                assert!((got.value() - 1.0 / t1).abs() < 1e-9 * (1.0 + got.value()));
                assert!((got.value() - oracle.value()).abs() < 1e-9 * (1.0 + got.value()));
            }
        }
    }

    #[test]
    fn flower_distance_of_concentric_balls() {
        let grid = grid2(256);
        let b1 = Arc::new(ConvexSeed::new(2, SeedShape::Ball { radius: 1.0 }).unwrap());
        let b2 = Arc::new(ConvexSeed::new(2, SeedShape::Ball { radius: 2.0 }).unwrap());
        let f1 = flower(&b1, &grid).unwrap();
        let f2 = flower(&b2, &grid).unwrap();
        let d = flower_distance(&f1, &f2, &grid, 64).unwrap();
        assert!((d.value - 0.5).abs() < 1e-12);
        let zero = flower_distance(&f1, &f1, &grid, 64).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn modulus_check_concentric_balls() {
        let grid = grid2(64);
        let h = 0.125f64;
        let a = StarBody::ball(2, 1.0);
        let x = StarBody::ball(2, 1.0 + h);
        let rep = phi_modulus_check(&a, &x, 1.0, &grid).unwrap();
        assert!(rep.lower_bound_ok && rep.delta_small_ok && rep.inequality_holds);
        assert!((rep.delta_phi - h / (1.0 + h)).abs() < 1e-12);
        assert!((rep.bound - 2.0 * h).abs() < 1e-12);
    }

    /// The modulus bound also holds for the cone bodies against the ball,
    /// with the analytic lower bound r0 = 1/4.
    #[test]
    fn modulus_check_moszynska_vs_ball() {
        let grid = grid2(256);
        let b = StarBody::ball(2, 1.0);
        for n in [2u32, 9, 33] {
            let a = StarBody::from_shape(2, Shape::MoszynskaCone { n }).unwrap();
            let rep = phi_modulus_check(&a, &b, 0.25, &grid).unwrap();
            assert!(rep.lower_bound_ok);
            assert!(rep.inequality_holds, "n={n}: {} > {}", rep.delta_phi, rep.bound);
        }
    }

    /// Union check on a ball with m equally spaced boundary samples: the gap
    /// is bounded by the spherical-cap estimate 1 - cos(pi/m).
    #[test]
    fn union_check_ball_cap_bound() {
        let grid = grid2(128);
        let m = 100usize;
        let samples: Vec<Vec<f64>> = (0..m)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let seed = ConvexSeed::new(2, SeedShape::Ball { radius: 1.0 }).unwrap();
        let rep = flower_union_check(&seed, &grid, &samples).unwrap();
        assert!(rep.dominated && rep.monotone);
        let bound = 1.0 - (std::f64::consts::PI / m as f64).cos();
        let (_, final_gap) = rep.stages.last().unwrap();
        assert!(*final_gap <= bound + 1e-12, "gap {final_gap} vs cap bound {bound}");
    }

    /// Square with vertex samples: the support is attained at vertices, so
    /// the gap vanishes.
    #[test]
    fn union_check_square_vertices_close_the_gap() {
        let grid = grid2(64);
        let seed = crate::seed::square_seed(1.0).unwrap();
        let samples = vec![
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ];
        let rep = flower_union_check(&seed, &grid, &samples).unwrap();
        let (_, final_gap) = rep.stages.last().unwrap();
        assert!(*final_gap <= 1e-12, "gap {final_gap}");
    }

    #[test]
    fn ball_containment_examples() {
        let grid = grid2(64);
        let b = StarBody::ball(2, 1.0);
        let x = StarBody::ball(2, 0.9);
        let rep = ball_containment_check(&b, &x, 1, &grid, 64).unwrap();
        assert!(rep.precondition_ok && rep.applicable && rep.pass);
        let same = ball_containment_check(&b, &b, 1, &grid, 64).unwrap();
        assert!(same.pass);
    }

    #[test]
    fn union_check_segment_single_generator() {
        let grid = grid2(64);
        let seed = ConvexSeed::new(2, SeedShape::Segment { to: vec![0.6, 0.8] }).unwrap();
        let rep = flower_union_check(&seed, &grid, &[vec![0.6, 0.8]]).unwrap();
        assert!(rep.dominated);
        for (_, gap) in &rep.stages {
            assert!(*gap <= 1e-12);
        }
    }

    #[test]
    fn union_check_rejects_outside_samples() {
        let grid = grid2(32);
        let seed = ConvexSeed::new(2, SeedShape::Ball { radius: 1.0 }).unwrap();
        assert!(flower_union_check(&seed, &grid, &[vec![2.0, 0.0]]).is_err());
    }
}
