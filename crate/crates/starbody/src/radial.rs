use serde::{Deserialize, Serialize};

use crate::body::StarBody;
use crate::direction::{norm, Direction};
use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::xreal::XReal;

/// Default cap for the Attouch-Wets j-iteration. The stopping rule
/// `1/(j+1) <= best` is exact for distinct bodies; the cap only matters for
/// (near-)equal bodies where the true value is 0.
pub const DEFAULT_J_MAX: u32 = 64;

/// `d_r(x, A)`: zero inside `A`, else the per-ray overshoot
/// `||x|| - rho_A(theta_x)`. Always finite.
pub fn radial_distance(x: &[f64], a: &StarBody) -> f64 {
    let Some(theta) = Direction::from_point(x) else {
        return 0.0;
    };
    let rho = a.eval_radial(&theta);
    let r = norm(x);
    if XReal::from_raw(r) <= rho {
        0.0
    } else {
        // membership failed, so rho is finite and below ||x||.
        r - rho.value()
    }
}

/// Radial excess `e_r(A_1, A_2)` over the grid: the directional reduction
/// `sup_theta (rho_{A1}(theta) - rho_{A2}(theta))_+` with extended
/// conventions (0 when `rho1 <= rho2`, `inf` when `rho1 = inf > rho2`).
pub fn radial_excess(a1: &StarBody, a2: &StarBody, grid: &SphereGrid) -> Result<XReal> {
    check_dims(a1, a2)?;
    let r1 = a1.profile().sample_on(grid);
    let r2 = a2.profile().sample_on(grid);
    Ok(r1
        .iter()
        .zip(&r2)
        .map(|(a, b)| a.pos_diff(*b))
        .fold(XReal::ZERO, XReal::max_with))
}

/// Radial metric `delta(A_1, A_2)` over the grid:
/// `sup_theta |rho_1 - rho_2|` with `|inf - inf| = 0`, `|inf - finite| = inf`.
pub fn radial_metric(a1: &StarBody, a2: &StarBody, grid: &SphereGrid) -> Result<XReal> {
    check_dims(a1, a2)?;
    let r1 = a1.profile().sample_on(grid);
    let r2 = a2.profile().sample_on(grid);
    Ok(radial_metric_sampled(&r1, &r2))
}

pub(crate) fn radial_metric_sampled(r1: &[XReal], r2: &[XReal]) -> XReal {
    r1.iter()
        .zip(r2)
        .map(|(a, b)| a.abs_diff(*b))
        .fold(XReal::ZERO, XReal::max_with)
}

/// One recorded term of the Attouch-Wets iteration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AwTerm {
    pub j: u32,
    /// Distance between the j-truncations (always finite).
    pub delta_j: f64,
    /// `min(1/j, delta_j)`.
    pub term: f64,
}

/// Why the j-iteration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopCause {
    /// `1/(j+1) <= best`: no later term can exceed the current maximum.
    EarlyBound,
    /// Both truncations stopped changing (bounded bodies inside `jB`).
    Saturated,
    /// The `J_max` cap was reached.
    JMaxReached,
}

/// Result of a telescoped Attouch-Wets distance (radial or classical).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AwResult {
    pub value: f64,
    pub attained_j: u32,
    pub terms: Vec<AwTerm>,
    /// Set to the cap when the iteration hit `J_max`.
    pub truncated_at: Option<u32>,
    pub stop_cause: StopCause,
    /// Raised when a body's closedness claim is absent or false (the
    /// truncation lemma for the classical distance assumes closed inputs).
    pub closedness_unverified: bool,
}

impl AwResult {
    pub fn hit_j_max(&self) -> bool {
        self.truncated_at.is_some()
    }
}

/// Core of both Attouch-Wets distances: iterate
/// `term_j = min(1/j, dist_j)` where `dist_j` is a distance between the
/// j-truncations supplied by `dist_fn`, tracking the running maximum.
///
/// Stops when `1/(j+1) <= best` (later terms are capped by `1/(j+1)`), when
/// both truncations saturate with a positive distance (later terms shrink),
/// or at `j_max`.
pub(crate) fn aw_iterate<F>(
    sup1: XReal,
    sup2: XReal,
    j_max: u32,
    closedness_unverified: bool,
    mut dist_fn: F,
) -> AwResult
where
    F: FnMut(u32) -> f64,
{
    assert!(j_max >= 1, "j_max must be >= 1");
    let mut best = 0.0f64;
    let mut attained = 1u32;
    let mut terms = Vec::new();
    let mut truncated_at = None;
    let mut stop_cause = StopCause::JMaxReached;
    for j in 1..=j_max {
        let d_j = dist_fn(j);
        debug_assert!(d_j.is_finite() && d_j >= 0.0);
        let term = (1.0 / j as f64).min(d_j);
        if term > best {
            best = term;
            attained = j;
        }
        terms.push(AwTerm { j, delta_j: d_j, term });
        if 1.0 / (j as f64 + 1.0) <= best {
            stop_cause = StopCause::EarlyBound;
            break;
        }
        let jx = XReal::from_raw(j as f64);
        if d_j > 0.0 && sup1 <= jx && sup2 <= jx {
            stop_cause = StopCause::Saturated;
            break;
        }
        if j == j_max {
            truncated_at = Some(j_max);
        }
    }
    AwResult {
        value: best,
        attained_j: attained,
        terms,
        truncated_at,
        stop_cause,
        closedness_unverified,
    }
}

pub(crate) fn grid_sup(values: &[XReal]) -> XReal {
    values.iter().copied().fold(XReal::ZERO, XReal::max_with)
}

/// Radial Attouch-Wets distance
/// `d_AWr(A_1, A_2) = sup_j min(1/j, delta(A_1 ∩ jB, A_2 ∩ jB))`.
pub fn radial_aw_distance(
    a1: &StarBody,
    a2: &StarBody,
    grid: &SphereGrid,
    j_max: u32,
) -> Result<AwResult> {
    check_dims(a1, a2)?;
    let r1 = a1.profile().sample_on(grid);
    let r2 = a2.profile().sample_on(grid);
    Ok(radial_aw_from_samples(&r1, &r2, j_max))
}

pub(crate) fn radial_aw_from_samples(r1: &[XReal], r2: &[XReal], j_max: u32) -> AwResult {
    let sup1 = grid_sup(r1);
    let sup2 = grid_sup(r2);
    aw_iterate(sup1, sup2, j_max, false, |j| {
        let jx = XReal::from_raw(j as f64);
        let mut worst = 0.0f64;
        for (a, b) in r1.iter().zip(r2) {
            let d = a.min_with(jx).sub_finite(b.min_with(jx)).abs();
            if d > worst {
                worst = d;
            }
        }
        worst
    })
}

/// Threshold query from the truncation lemma: for
/// `eps in (1/(j+1), 1/j]`, `d_AWr(A_1, A_2) < eps` iff
/// `delta(A_1 ∩ jB, A_2 ∩ jB) < eps`.
pub fn within_radial_aw(
    a1: &StarBody,
    a2: &StarBody,
    eps: f64,
    grid: &SphereGrid,
) -> Result<bool> {
    check_dims(a1, a2)?;
    let j = threshold_index(eps)?;
    let t1 = a1.truncate(j as f64);
    let t2 = a2.truncate(j as f64);
    let delta_j = radial_metric(&t1, &t2, grid)?;
    Ok(delta_j.value() < eps)
}

/// The unique integer with `eps in (1/(j+1), 1/j]`.
pub fn threshold_index(eps: f64) -> Result<u32> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    // Floating guard: nudge so that eps = 1/j lands on j exactly.
    let j = (1.0 / eps + 1e-12).floor().max(1.0);
    Ok(j as u32)
}

/// The structured sample set used for every "sup over x in R^d" quantity:
/// `{lambda * rho_i(theta) * theta, lambda * radius * theta}` for
/// `lambda in {0, 1/2, 1, 1 + 1e-6}`, clipped to the ball of the given
/// radius. The reduction to radial endpoints is backed by the endpoint form
/// of the radial distance functional.
pub fn structured_radii(rhos: &[XReal], radius: f64) -> Vec<f64> {
    const LAMBDAS: [f64; 4] = [0.0, 0.5, 1.0, 1.0 + 1e-6];
    let clip = radius * (1.0 + 1e-6);
    let mut out = Vec::new();
    let mut anchors: Vec<f64> = rhos.iter().filter(|r| r.is_finite()).map(|r| r.value()).collect();
    anchors.push(radius);
    for a in anchors {
        for l in LAMBDAS {
            let r = l * a;
            if r <= clip {
                out.push(r);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

/// `sup |d_r(x, A_1) - d_r(x, A_2)|` over the structured sample set inside
/// `radius * B`. Serves as the independent cross-check of the radial metric
/// on truncations.
pub fn radial_distance_sup_gap(
    a1: &StarBody,
    a2: &StarBody,
    radius: f64,
    grid: &SphereGrid,
) -> Result<XReal> {
    check_dims(a1, a2)?;
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::invalid("radius must be positive"));
    }
    let r1 = a1.profile().sample_on(grid);
    let r2 = a2.profile().sample_on(grid);
    let mut worst = 0.0f64;
    for (i, theta) in grid.dirs().iter().enumerate() {
        for r in structured_radii(&[r1[i], r2[i]], radius) {
            let x = theta.at(r);
            let gap = (radial_distance(&x, a1) - radial_distance(&x, a2)).abs();
            if gap > worst {
                worst = gap;
            }
        }
    }
    Ok(XReal::from_raw(worst))
}

pub(crate) fn check_dims(a1: &StarBody, a2: &StarBody) -> Result<()> {
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch { left: a1.dim(), right: a2.dim() });
    }
    Ok(())
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
    fn radial_distance_examples() {
        let b = StarBody::ball(2, 1.0);
        assert_eq!(radial_distance(&[2.0, 0.0], &b), 1.0);

        let seg = StarBody::from_shape(2, Shape::Segment { to: vec![1.0, 0.0] }).unwrap();
        // Off the segment's line the radial distance is the full norm.
        assert_eq!(radial_distance(&[0.0, 0.5], &seg), 0.5);
        // On the line beyond the tip: ||x|| - ||a||.
        assert_eq!(radial_distance(&[1.5, 0.0], &seg), 0.5);
        // Inside.
        assert_eq!(radial_distance(&[0.25, 0.0], &seg), 0.0);
    }

    #[test]
    fn p2_zero_iff_member() {
        let grid = grid2(64);
        let bodies = [
            StarBody::ball(2, 1.0),
            StarBody::from_shape(2, Shape::EnSpike { n: 3 }).unwrap(),
            StarBody::from_shape(2, Shape::Halfspace { normal: Direction::axis(2, 1) }).unwrap(),
        ];
        for body in &bodies {
            for theta in grid.dirs() {
                for r in [0.0, 0.2, 0.9, 1.0, 1.7, 4.0] {
                    let x = theta.at(r);
                    assert_eq!(radial_distance(&x, body) == 0.0, body.membership(&x));
                }
            }
        }
    }

    #[test]
    fn excess_examples() {
        let grid = grid2(128);
        let b = StarBody::ball(2, 1.0);
        let b2 = StarBody::ball(2, 2.0);
        assert_eq!(radial_excess(&b, &b2, &grid).unwrap(), XReal::ZERO);
        assert_eq!(radial_excess(&b2, &b, &grid).unwrap().value(), 1.0);
        let full = StarBody::full_space(2);
        assert!(radial_excess(&full, &b, &grid).unwrap().is_infinite());
    }

    /// Moszynska cones: e_r(A_n, B) = 0 and e_r(B, A_n) = 3/4 exactly (the
    /// minimum 1/4 sits on the grid axis e_2).
    #[test]
    fn excess_moszynska_floor() {
        let grid = grid2(256);
        let b = StarBody::ball(2, 1.0);
        for n in [1, 10, 42] {
            let a = StarBody::from_shape(2, Shape::MoszynskaCone { n }).unwrap();
            assert_eq!(radial_excess(&a, &b, &grid).unwrap(), XReal::ZERO);
            assert_eq!(radial_excess(&b, &a, &grid).unwrap().value(), 0.75);
        }
    }

    #[test]
    fn metric_examples() {
        let grid = grid2(128);
        let r = StarBody::ball(2, 1.5);
        let s = StarBody::ball(2, 4.0);
        assert_eq!(radial_metric(&r, &s, &grid).unwrap().value(), 2.5);

        // Segments toward different axes: gap 1 at both tips.
        let e1 = StarBody::from_shape(2, Shape::Segment { to: vec![1.0, 0.0] }).unwrap();
        let rot = StarBody::from_shape(
            2,
            Shape::Segment { to: vec![(1.0f64 - 0.25).sqrt(), 0.5] },
        )
        .unwrap();
        let g = grid.with_extra_directions(&[Direction::from_point(&[(1.0f64 - 0.25).sqrt(), 0.5])
            .unwrap()]);
        assert_eq!(radial_metric(&e1, &rot, &g).unwrap().value(), 1.0);
    }

    /// delta(E_n, {0}) = 1/e; oracle = dense 1D scan of t*exp(-t).
    #[test]
    fn metric_en_spike_floor() {
        let mut oracle = 0.0f64;
        let mut t = 0.0f64;
        while t <= 3.0 {
            oracle = oracle.max(t * (-t).exp());
            t += 1e-6;
        }
        let n = 3u32;
        let en = StarBody::from_shape(2, Shape::EnSpike { n }).unwrap();
        let origin = StarBody::origin(2);
        let grid = grid2(2048);
        let got = radial_metric(&en, &origin, &grid).unwrap().value();
        assert!((got - oracle).abs() < 1e-5, "{got} vs {oracle}");
        // With the maximizer pinned on the grid the sup is exact.
        let c = 1.0 / n as f64;
        let maxdir = Direction::from_point(&[c, (1.0 - c * c).sqrt()]).unwrap();
        let g = grid.with_extra_directions(&[maxdir]);
        let exact = radial_metric(&en, &origin, &g).unwrap().value();
        assert!((exact - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn metric_equals_max_of_excesses() {
        let grid = grid2(128);
        let a = StarBody::from_shape(2, Shape::MoszynskaCone { n: 5 }).unwrap();
        let b = StarBody::ball(2, 0.9);
        let d = radial_metric(&a, &b, &grid).unwrap();
        let e1 = radial_excess(&a, &b, &grid).unwrap();
        let e2 = radial_excess(&b, &a, &grid).unwrap();
        assert_eq!(d, e1.max_with(e2));
    }

    #[test]
    fn aw_ball_vs_double_ball_enumeration() {
        let grid = grid2(256);
        let b = StarBody::ball(2, 1.0);
        let b2 = StarBody::ball(2, 2.0);
        let res = radial_aw_distance(&b, &b2, &grid, DEFAULT_J_MAX).unwrap();
        assert_eq!(res.value, 0.5);
        assert_eq!(res.attained_j, 2);
        assert_eq!(res.terms.len(), 2);
        assert_eq!(res.terms[0].delta_j, 0.0);
        assert_eq!(res.terms[1].delta_j, 1.0);
        assert_eq!(res.stop_cause, StopCause::EarlyBound);
        assert!(res.truncated_at.is_none());
    }

    #[test]
    fn aw_identity_runs_to_cap() {
        let grid = grid2(64);
        let a = StarBody::from_shape(2, Shape::EnSpike { n: 2 }).unwrap();
        let res = radial_aw_distance(&a, &a, &grid, DEFAULT_J_MAX).unwrap();
        assert_eq!(res.value, 0.0);
        assert_eq!(res.truncated_at, Some(DEFAULT_J_MAX));
    }

    #[test]
    fn aw_full_space_vs_ball() {
        let grid = grid2(64);
        let full = StarBody::full_space(2);
        let b = StarBody::ball(2, 1.0);
        let res = radial_aw_distance(&full, &b, &grid, DEFAULT_J_MAX).unwrap();
        // delta_j = j - 1; min(1/j, j-1) is maximal at j = 2.
        assert_eq!(res.value, 0.5);
        assert_eq!(res.attained_j, 2);
    }

    #[test]
    fn aw_terms_are_monotone_in_j() {
        let grid = grid2(128);
        let a = StarBody::full_space(2);
        let b = StarBody::from_shape(2, Shape::XnPower { n: 4 }).unwrap();
        let res = radial_aw_distance(&a, &b, &grid, 16).unwrap();
        for w in res.terms.windows(2) {
            assert!(w[1].delta_j >= w[0].delta_j - 1e-15);
        }
    }

    #[test]
    fn within_examples() {
        let grid = grid2(128);
        let b = StarBody::ball(2, 1.0);
        let b2 = StarBody::ball(2, 2.0);
        // eps = 0.6 maps to j = 1 where delta_1 = 0.
        assert!(within_radial_aw(&b, &b2, 0.6, &grid).unwrap());
        // eps = 0.5 maps to j = 2 where delta_2 = 1.
        assert!(!within_radial_aw(&b, &b2, 0.5, &grid).unwrap());
        assert!(within_radial_aw(&b, &b, 0.01, &grid).unwrap());
        assert!(within_radial_aw(&b, &b2, 0.3, &grid).is_ok());
        assert!(within_radial_aw(&b, &b2, 0.0, &grid).is_err());
        assert!(within_radial_aw(&b, &b2, 1.5, &grid).is_err());
    }

    #[test]
    fn threshold_index_intervals() {
        assert_eq!(threshold_index(1.0).unwrap(), 1);
        assert_eq!(threshold_index(0.6).unwrap(), 1);
        assert_eq!(threshold_index(0.5).unwrap(), 2);
        assert_eq!(threshold_index(1.0 / 3.0).unwrap(), 3);
        assert_eq!(threshold_index(0.34).unwrap(), 2);
        assert!(threshold_index(0.0).is_err());
    }

    #[test]
    fn sup_gap_examples() {
        let grid = grid2(256);
        let b = StarBody::ball(2, 1.0);
        let b2 = StarBody::ball(2, 2.0);
        let g = radial_distance_sup_gap(&b, &b2, 3.0, &grid).unwrap();
        assert_eq!(g.value(), 1.0);
        assert_eq!(radial_distance_sup_gap(&b, &b, 5.0, &grid).unwrap(), XReal::ZERO);
    }

    /// sup |d_r(., E_n) - d_r(., {0})| inside the unit ball is the spike
    /// height 1/e (same scan oracle as the radial metric test).
    #[test]
    fn sup_gap_en_vs_origin() {
        let n = 3u32;
        let en = StarBody::from_shape(2, Shape::EnSpike { n }).unwrap();
        let origin = StarBody::origin(2);
        let c = 1.0 / n as f64;
        let grid = grid2(1024)
            .with_extra_directions(&[Direction::from_point(&[c, (1.0 - c * c).sqrt()]).unwrap()]);
        let g = radial_distance_sup_gap(&en, &origin, 1.0, &grid).unwrap();
        assert!((g.value() - (-1.0f64).exp()).abs() < 1e-12, "{g:?}");
    }

    /// Truncation identity (Lemma form): d_r(x, A ∩ eta B) = d_r(x, A)
    /// exactly for sampled ||x|| <= eta.
    #[test]
    fn truncation_identity_exact() {
        let grid = grid2(64);
        let bodies = [
            StarBody::from_shape(2, Shape::EnSpike { n: 4 }).unwrap(),
            StarBody::full_space(2),
            StarBody::from_shape(2, Shape::Halfspace { normal: Direction::axis(2, 1) }).unwrap(),
        ];
        let eta = 2.5;
        for body in &bodies {
            let t = body.truncate(eta);
            for theta in grid.dirs() {
                for r in [0.0, 0.3, 1.0, 2.0, 2.5] {
                    let x = theta.at(r);
                    if norm(&x) > eta {
                        continue; // float overshoot of the ball boundary
                    }
                    assert_eq!(radial_distance(&x, body), radial_distance(&x, &t));
                }
            }
        }
    }
}
