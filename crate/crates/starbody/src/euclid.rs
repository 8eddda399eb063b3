use serde::{Deserialize, Serialize};

use crate::body::StarBody;
use crate::direction::{distance, dot, norm, Direction};
use crate::error::Result;
use crate::grid::SphereGrid;
use crate::radial::{aw_iterate, check_dims, grid_sup, AwResult};
use crate::xreal::XReal;

/// Exact distance from `p` to the segment `[0, b]`.
pub fn point_segment_distance(p: &[f64], b: &[f64]) -> f64 {
    let bb = dot(b, b);
    if bb == 0.0 {
        return norm(p);
    }
    let t = (dot(p, b) / bb).clamp(0.0, 1.0);
    let foot: Vec<f64> = b.iter().map(|c| t * c).collect();
    distance(p, &foot)
}

/// Exact distance from `p` to the ray `{t * dir : t >= 0}`.
pub fn point_ray_distance(p: &[f64], dir: &Direction) -> f64 {
    let t = dot(p, dir.coords()).max(0.0);
    let foot = dir.at(t);
    distance(p, &foot)
}

/// Distance functional `d(x, A)` over the grid: the minimum over grid
/// directions of the exact point-to-segment distance to `[0, rho(phi) phi]`
/// (point-to-ray where `rho = inf`). Returns 0 for members.
pub fn point_distance(x: &[f64], a: &StarBody, grid: &SphereGrid) -> f64 {
    if a.membership(x) {
        return 0.0;
    }
    let rhos = a.profile().sample_on(grid);
    point_distance_sampled(x, &rhos, grid)
}

pub(crate) fn point_distance_sampled(x: &[f64], rhos: &[XReal], grid: &SphereGrid) -> f64 {
    point_distance_cutoff(x, rhos, grid, 0.0)
}

/// Point distance with an early exit: once the running minimum drops to
/// `cutoff` or below, the caller no longer cares about the exact value.
fn point_distance_cutoff(x: &[f64], rhos: &[XReal], grid: &SphereGrid, cutoff: f64) -> f64 {
    let mut best = f64::INFINITY;
    for (phi, rho) in grid.dirs().iter().zip(rhos) {
        let d = if rho.is_infinite() {
            point_ray_distance(x, phi)
        } else {
            point_segment_distance(x, &phi.at(rho.value()))
        };
        if d < best {
            best = d;
            if best <= cutoff {
                break;
            }
        }
    }
    best
}

/// Witnessed one-sided excess value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExcessResult {
    pub value: XReal,
    pub witness: Direction,
    pub witness_distance: XReal,
}

/// Excess `e(A_1, A_2) = sup_{x in A_1} d(x, A_2)`, restricted to radial
/// endpoints `rho_1(theta) theta` over the grid. The restriction is valid for
/// star targets: if `b` realizes `d(x, A_2)` then `t b` lies in `A_2` and
/// `d(t x, A_2) <= ||t x - t b|| = t d(x, A_2)` for `t in [0, 1]`, so the
/// per-ray supremum sits at the endpoint.
///
/// Directions with `rho_1 = inf` whose ray is not eventually inside `A_2`
/// (tested via `rho_2` on the same direction) make the excess infinite; rays
/// shared by both bodies contribute zero. Finite excesses over unbounded
/// opponents are handled exactly through the ray kernels.
pub fn excess(a1: &StarBody, a2: &StarBody, grid: &SphereGrid) -> Result<ExcessResult> {
    check_dims(a1, a2)?;
    let r1 = a1.profile().sample_on(grid);
    let r2 = a2.profile().sample_on(grid);
    for (i, theta) in grid.dirs().iter().enumerate() {
        if r1[i].is_infinite() && !r2[i].is_infinite() {
            return Ok(ExcessResult {
                value: XReal::INFINITY,
                witness: theta.clone(),
                witness_distance: XReal::INFINITY,
            });
        }
    }
    // All remaining endpoint candidates are finite; the same-ray gap bounds
    // each endpoint's distance, so visit in decreasing gap order.
    let mut order: Vec<(usize, f64)> = r1
        .iter()
        .zip(&r2)
        .enumerate()
        .filter_map(|(i, (f, t))| {
            if f.is_infinite() || *f <= *t {
                None // inside A_2 along its own ray (or a shared infinite ray)
            } else {
                // f > t forces t finite here.
                Some((i, f.value() - t.value()))
            }
        })
        .collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut best = 0.0f64;
    let mut witness = grid.dirs()[0].clone();
    for (i, gap) in order {
        if gap <= best {
            break;
        }
        let endpoint = grid.dirs()[i].at(r1[i].value());
        let d = point_distance_cutoff(&endpoint, &r2, grid, best);
        if d > best {
            best = d;
            witness = grid.dirs()[i].clone();
        }
    }
    Ok(ExcessResult {
        value: XReal::from_raw(best),
        witness,
        witness_distance: XReal::from_raw(best),
    })
}

/// Two-sided Hausdorff distance with witnesses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HausdorffResult {
    pub value: XReal,
    pub witness_forward: (Direction, XReal),
    pub witness_backward: (Direction, XReal),
}

pub fn hausdorff(a1: &StarBody, a2: &StarBody, grid: &SphereGrid) -> Result<HausdorffResult> {
    let fwd = excess(a1, a2, grid)?;
    let bwd = excess(a2, a1, grid)?;
    Ok(HausdorffResult {
        value: fwd.value.max_with(bwd.value),
        witness_forward: (fwd.witness, fwd.witness_distance),
        witness_backward: (bwd.witness, bwd.witness_distance),
    })
}

/// Hausdorff distance between j-truncations, from pre-sampled profiles. All
/// values are clipped at `j`, so the computation never sees infinity.
pub(crate) fn hausdorff_truncated(
    r1: &[XReal],
    r2: &[XReal],
    grid: &SphereGrid,
    j: f64,
) -> f64 {
    let jx = XReal::from_raw(j);
    let c1: Vec<XReal> = r1.iter().map(|r| r.min_with(jx)).collect();
    let c2: Vec<XReal> = r2.iter().map(|r| r.min_with(jx)).collect();
    excess_truncated(&c1, &c2, grid).max(excess_truncated(&c2, &c1, grid))
}

/// One-sided excess over finite (truncated) profiles. The same-ray gap
/// `(from - to)_+` is an upper bound on each endpoint's distance, so
/// directions are visited in decreasing gap order and skipped once the bound
/// cannot beat the running maximum.
fn excess_truncated(from: &[XReal], to: &[XReal], grid: &SphereGrid) -> f64 {
    let mut order: Vec<(usize, f64)> = from
        .iter()
        .zip(to)
        .enumerate()
        .filter_map(|(i, (f, t))| {
            let gap = f.sub_finite(*t);
            if gap > 0.0 { Some((i, gap)) } else { None }
        })
        .collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut worst = 0.0f64;
    for (i, gap) in order {
        if gap <= worst {
            break;
        }
        let endpoint = grid.dirs()[i].at(from[i].value());
        let d = point_distance_cutoff(&endpoint, to, grid, worst);
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Classical Attouch-Wets distance via Hausdorff distances of truncations:
/// `d_AW(A_1, A_2) = sup_j min(1/j, d_H(A_1 ∩ jB, A_2 ∩ jB))`.
///
/// Non-closed radially closed inputs are accepted; the result carries a
/// `closedness_unverified` flag, since the underlying truncation lemma for
/// `d(x, .)` assumes closed sets.
pub fn aw_distance(
    a1: &StarBody,
    a2: &StarBody,
    grid: &SphereGrid,
    j_max: u32,
) -> Result<AwResult> {
    check_dims(a1, a2)?;
    let r1 = a1.profile().sample_on(grid);
    let r2 = a2.profile().sample_on(grid);
    let unverified = a1.hints().is_closed_claim != Some(true)
        || a2.hints().is_closed_claim != Some(true);
    let sup1 = grid_sup(&r1);
    let sup2 = grid_sup(&r2);
    Ok(aw_iterate(sup1, sup2, j_max, unverified, |j| {
        hausdorff_truncated(&r1, &r2, grid, j as f64)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::radial::DEFAULT_J_MAX;
    use crate::shapes::Shape;

    fn grid2(n: usize) -> SphereGrid {
        make_grid(2, n, 0, true).unwrap()
    }

    #[test]
    fn point_segment_kernel() {
        // Closed-form oracle checks.
        assert_eq!(point_segment_distance(&[-1.0, 0.0], &[1.0, 0.0]), 1.0);
        assert_eq!(point_segment_distance(&[0.0, 1.0], &[1.0, 0.0]), 1.0);
        assert!((point_segment_distance(&[2.0, 1.0], &[1.0, 0.0]) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(point_segment_distance(&[0.5, 0.0], &[1.0, 0.0]), 0.0);
        // Degenerate segment is the origin.
        assert_eq!(point_segment_distance(&[3.0, 4.0], &[0.0, 0.0]), 5.0);
    }

    #[test]
    fn point_ray_kernel() {
        let e1 = Direction::axis(2, 0);
        assert_eq!(point_ray_distance(&[5.0, 0.0], &e1), 0.0);
        assert_eq!(point_ray_distance(&[-1.0, 0.0], &e1), 1.0);
        assert_eq!(point_ray_distance(&[3.0, 2.0], &e1), 2.0);
    }

    #[test]
    fn point_distance_examples() {
        let grid = grid2(512);
        let b = StarBody::ball(2, 1.0);
        let d = point_distance(&[2.0, 0.0], &b, &grid);
        assert_eq!(d, 1.0); // e_1 is on the grid

        let seg = StarBody::from_shape(2, Shape::Segment { to: vec![1.0, 0.0] }).unwrap();
        assert_eq!(point_distance(&[-1.0, 0.0], &seg, &grid), 1.0);
        assert_eq!(point_distance(&[0.0, 1.0], &seg, &grid), 1.0);
        assert_eq!(point_distance(&[0.5, 0.0], &seg, &grid), 0.0);
    }

    #[test]
    fn excess_examples() {
        let grid = grid2(512);
        let b = StarBody::ball(2, 1.0);
        let b2 = StarBody::ball(2, 2.0);
        let e = excess(&b2, &b, &grid).unwrap();
        assert!((e.value.value() - 1.0).abs() < 1e-12);
        let e0 = excess(&b, &b2, &grid).unwrap();
        assert_eq!(e0.value, XReal::ZERO);
    }

    #[test]
    fn excess_of_ray_over_halfspace_is_finite() {
        let grid = grid2(128);
        // Ray along e_1 inside the halfspace {<z, e_2> <= 0}... e_1 is on the
        // boundary, which the closed halfspace contains.
        let ray = StarBody::from_shape(2, Shape::Ray { dir: Direction::axis(2, 0) }).unwrap();
        let half =
            StarBody::from_shape(2, Shape::Halfspace { normal: Direction::axis(2, 1) }).unwrap();
        let e = excess(&ray, &half, &grid).unwrap();
        assert_eq!(e.value, XReal::ZERO);
        // Reverse direction: the halfspace has rays the segment lacks.
        let e2 = excess(&half, &ray, &grid).unwrap();
        assert!(e2.value.is_infinite());
    }

    #[test]
    fn hausdorff_examples() {
        let grid = grid2(512);
        let b = StarBody::ball(2, 1.0);
        let b2 = StarBody::ball(2, 2.0);
        let h = hausdorff(&b, &b2, &grid).unwrap();
        assert!((h.value.value() - 1.0).abs() < 1e-12);
        let same = hausdorff(&b, &b, &grid).unwrap();
        assert_eq!(same.value, XReal::ZERO);
    }

    /// d_H([0,e_1], [0,theta_n]) equals the exact projection gap when both
    /// axes are grid directions.
    #[test]
    fn hausdorff_rotating_segments_exact() {
        let n = 5f64;
        let axis = [(1.0 - 1.0 / (n * n)).sqrt(), 1.0 / n];
        let rot_dir = Direction::from_point(&axis).unwrap();
        let grid = grid2(512).with_extra_directions(&[rot_dir]);
        let seg = StarBody::from_shape(2, Shape::Segment { to: vec![1.0, 0.0] }).unwrap();
        let rot = StarBody::from_shape(2, Shape::Segment { to: axis.to_vec() }).unwrap();
        let h = hausdorff(&seg, &rot, &grid).unwrap();
        // Both excesses equal sqrt(1 - <theta_n, e_1>^2) = 1/n.
        assert!((h.value.value() - 1.0 / n).abs() < 1e-12, "{}", h.value);
    }

    #[test]
    fn aw_ball_enumeration() {
        let grid = grid2(512);
        let b = StarBody::ball(2, 1.0);
        let b2 = StarBody::ball(2, 2.0);
        let res = aw_distance(&b, &b2, &grid, DEFAULT_J_MAX).unwrap();
        assert!((res.value - 0.5).abs() < 1e-12);
        assert_eq!(res.attained_j, 2);
        assert!(!res.closedness_unverified);
        let same = aw_distance(&b, &b, &grid, DEFAULT_J_MAX).unwrap();
        assert_eq!(same.value, 0.0);
    }

    /// Ray monotonicity: d(t x, A) <= d(x, A) + slack for t in [0, 1].
    #[test]
    fn ray_monotonicity() {
        let grid = grid2(256);
        let a = StarBody::from_shape(2, Shape::MoszynskaCone { n: 4 }).unwrap();
        for k in 0..32 {
            let theta = Direction::from_angle(0.196 * k as f64);
            let x = theta.at(1.7);
            let dx = point_distance(&x, &a, &grid);
            for t in [0.25, 0.5, 0.75] {
                let tx = theta.at(1.7 * t);
                assert!(point_distance(&tx, &a, &grid) <= dx + 1e-9);
            }
        }
    }

    /// Truncation identity for the classical distance on closed bodies.
    #[test]
    fn truncation_identity_within_slack() {
        let grid = grid2(1024);
        let a = StarBody::from_shape(2, Shape::EnSpike { n: 2 }).unwrap();
        let t = a.truncate(2.0);
        let eps = grid.eps_g(2.0);
        for k in 0..16 {
            let theta = Direction::from_angle(0.39 * k as f64);
            for r in [0.1, 0.5, 1.0, 1.9] {
                let x = theta.at(r);
                let d0 = point_distance(&x, &a, &grid);
                let d1 = point_distance(&x, &t, &grid);
                assert!((d0 - d1).abs() <= eps, "{d0} vs {d1}");
            }
        }
    }
}
