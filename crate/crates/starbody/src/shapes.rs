use serde::{Deserialize, Serialize};

use crate::direction::{norm, Direction};
use crate::error::{Error, Result};
use crate::xreal::XReal;

/// Alignment tolerance for "this direction is the segment/ray axis" tests.
pub const ALIGN_TOL: f64 = 1e-12;

/// Closed-form radial profiles: the named-shape and named-sequence catalog.
///
/// Every entry evaluates analytically; the corpus sequences (`EnSpike`,
/// `XnPower`, `MoszynskaCone`, `TruncatedParabola`) take their index as a
/// parameter so that a sequence is just `n -> Shape`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Shape {
    /// `rho == radius`; radius 0 is the origin body `{0}`.
    Ball { radius: f64 },
    /// `rho == inf` (all of R^d).
    FullSpace,
    /// Segment `[0, to]`.
    Segment { to: Vec<f64> },
    /// Segment `[-to, to]`.
    SymmetricSegment { to: Vec<f64> },
    /// Ray `{t*dir : t >= 0}`.
    Ray { dir: Direction },
    /// Closed halfspace `{z : <z, normal> <= 0}`.
    Halfspace { normal: Direction },
    /// Pointwise radial limit of the tilting halfspaces `{z: <z,theta_n> <= 0}`
    /// with `theta_n -> e_2`: infinite iff `theta_2 < 0` or
    /// (`theta_2 = 0` and `theta_1 <= 0`), which is the open lower halfspace
    /// plus the `-e_1` ray (a non-closed convex star body).
    HalfspaceLimit,
    /// `rho(theta) = n * |<theta,e_1>| * exp(-n * |<theta,e_1>|)`.
    EnSpike { n: u32 },
    /// `rho(theta) = |<theta,e_1>|^n`.
    XnPower { n: u32 },
    /// Unit ball minus an axis-aligned cone: vertex `e_d / 4`, opening through
    /// the (d-2)-sphere of radius `1/(n+1)` in the hyperplane
    /// `x_d = 1 - 1/(n+1)`. Radial reach along a direction is the wedge entry
    /// parameter clipped at the sphere.
    MoszynskaCone { n: u32 },
    /// Radial profile of `P_n = {(x,y): -1<=x<=1, 0<=y<=x^2/n}` (d=2):
    /// `1/|theta_1|` on the band `theta_2 >= 0, n*theta_2 <= |theta_1|`,
    /// zero elsewhere.
    TruncatedParabola { n: u32 },
}

impl Shape {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Shape::Ball { radius } => {
                if !radius.is_finite() || *radius < 0.0 {
                    return Err(Error::invalid(format!("ball radius must be >= 0, got {radius}")));
                }
            }
            Shape::Segment { to } | Shape::SymmetricSegment { to } => {
                if to.len() != dim {
                    return Err(Error::DimensionMismatch { left: to.len(), right: dim });
                }
                if norm(to) == 0.0 {
                    return Err(Error::invalid("segment endpoint must be nonzero"));
                }
            }
            Shape::Ray { dir } => {
                if dir.dim() != dim {
                    return Err(Error::DimensionMismatch { left: dir.dim(), right: dim });
                }
            }
            Shape::Halfspace { normal } => {
                if normal.dim() != dim {
                    return Err(Error::DimensionMismatch { left: normal.dim(), right: dim });
                }
            }
            Shape::EnSpike { n } | Shape::XnPower { n } => {
                if *n == 0 {
                    return Err(Error::invalid("sequence index must be >= 1"));
                }
            }
            Shape::MoszynskaCone { n } => {
                if *n == 0 {
                    return Err(Error::invalid("sequence index must be >= 1"));
                }
                if dim > 3 {
                    return Err(Error::invalid(
                        "moszynska_cone is implemented analytically for d = 2, 3 only",
                    ));
                }
            }
            Shape::TruncatedParabola { n } => {
                if *n == 0 {
                    return Err(Error::invalid("sequence index must be >= 1"));
                }
                if dim != 2 {
                    return Err(Error::invalid("truncated_parabola is 2-dimensional only"));
                }
            }
            Shape::FullSpace | Shape::HalfspaceLimit => {}
        }
        Ok(())
    }

    pub fn eval(&self, theta: &Direction) -> XReal {
        match self {
            Shape::Ball { radius } => XReal::from_raw(*radius),
            Shape::FullSpace => XReal::INFINITY,
            Shape::Segment { to } => {
                let len = norm(to);
                let d = crate::direction::dot(theta.coords(), to) / len;
                if d >= 1.0 - ALIGN_TOL { XReal::from_raw(len) } else { XReal::ZERO }
            }
            Shape::SymmetricSegment { to } => {
                let len = norm(to);
                let d = (crate::direction::dot(theta.coords(), to) / len).abs();
                if d >= 1.0 - ALIGN_TOL { XReal::from_raw(len) } else { XReal::ZERO }
            }
            Shape::Ray { dir } => {
                if theta.dot_dir(dir) >= 1.0 - ALIGN_TOL {
                    XReal::INFINITY
                } else {
                    XReal::ZERO
                }
            }
            Shape::Halfspace { normal } => {
                if theta.dot_dir(normal) <= 0.0 { XReal::INFINITY } else { XReal::ZERO }
            }
            Shape::HalfspaceLimit => {
                let t1 = theta.component(0);
                let t2 = theta.component(1);
                if t2 < 0.0 || (t2 == 0.0 && t1 <= 0.0) {
                    XReal::INFINITY
                } else {
                    XReal::ZERO
                }
            }
            Shape::EnSpike { n } => {
                let t = *n as f64 * theta.component(0).abs();
                XReal::from_raw(t * (-t).exp())
            }
            Shape::XnPower { n } => {
                XReal::from_raw(theta.component(0).abs().powi(*n as i32))
            }
            Shape::MoszynskaCone { n } => {
                let (h_over_s, _) = moszynska_cone_geometry(*n);
                let d = theta.dim();
                let td = theta.component(d - 1);
                let perp: f64 = theta.coords()[..d - 1].iter().map(|c| c * c).sum::<f64>().sqrt();
                let w = td - h_over_s * perp;
                if w <= 0.0 {
                    XReal::ONE
                } else {
                    XReal::from_raw((0.25 / w).min(1.0))
                }
            }
            Shape::TruncatedParabola { n } => {
                let c = theta.component(0);
                let s = theta.component(1);
                if s >= 0.0 && *n as f64 * s <= c.abs() && c != 0.0 {
                    XReal::from_raw(1.0 / c.abs())
                } else {
                    XReal::ZERO
                }
            }
        }
    }

    /// Lipschitz bound of the profile over the sphere, when finite. `None`
    /// marks profiles with jumps (compared only via truncations or at exact
    /// grid directions in the tests).
    pub fn lipschitz(&self) -> Option<f64> {
        match self {
            Shape::Ball { .. } | Shape::FullSpace => Some(0.0),
            Shape::EnSpike { n } => Some(*n as f64),
            Shape::XnPower { n } => Some(*n as f64),
            Shape::MoszynskaCone { n } => {
                let (h_over_s, _) = moszynska_cone_geometry(*n);
                // |d rho / d angle| <= 4 (1 + h/s) where rho = 1/4 / w, w >= 1/4.
                Some(4.0 * (1.0 + h_over_s))
            }
            _ => None,
        }
    }

    /// Analytic sup of the profile, when known.
    pub fn sup(&self) -> Option<XReal> {
        match self {
            Shape::Ball { radius } => Some(XReal::from_raw(*radius)),
            Shape::FullSpace => Some(XReal::INFINITY),
            Shape::Segment { to } | Shape::SymmetricSegment { to } => {
                Some(XReal::from_raw(norm(to)))
            }
            Shape::Ray { .. } | Shape::Halfspace { .. } | Shape::HalfspaceLimit => {
                Some(XReal::INFINITY)
            }
            // max of t*exp(-t) over [0, n] is 1/e at t = 1 (n >= 1).
            Shape::EnSpike { .. } => Some(XReal::from_raw((-1.0f64).exp())),
            Shape::XnPower { .. } => Some(XReal::ONE),
            Shape::MoszynskaCone { .. } => Some(XReal::ONE),
            Shape::TruncatedParabola { n } => {
                let nf = *n as f64;
                Some(XReal::from_raw((1.0 + 1.0 / (nf * nf)).sqrt()))
            }
        }
    }

    /// Analytic inf of the profile, when known.
    pub fn inf(&self) -> Option<XReal> {
        match self {
            Shape::Ball { radius } => Some(XReal::from_raw(*radius)),
            Shape::FullSpace => Some(XReal::INFINITY),
            Shape::MoszynskaCone { .. } => Some(XReal::from_raw(0.25)),
            Shape::EnSpike { .. }
            | Shape::XnPower { .. }
            | Shape::Segment { .. }
            | Shape::SymmetricSegment { .. }
            | Shape::Ray { .. }
            | Shape::Halfspace { .. }
            | Shape::HalfspaceLimit
            | Shape::TruncatedParabola { .. } => Some(XReal::ZERO),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Shape::Ball { radius } if *radius == 0.0 => "origin".to_string(),
            Shape::Ball { radius } => format!("ball(r={radius})"),
            Shape::FullSpace => "full_space".to_string(),
            Shape::Segment { to } => format!("segment(to={to:?})"),
            Shape::SymmetricSegment { to } => format!("symmetric_segment(to={to:?})"),
            Shape::Ray { dir } => format!("ray({:?})", dir.coords()),
            Shape::Halfspace { normal } => format!("halfspace(normal={:?})", normal.coords()),
            Shape::HalfspaceLimit => "halfspace_limit".to_string(),
            Shape::EnSpike { n } => format!("en_spike({n})"),
            Shape::XnPower { n } => format!("xn_power({n})"),
            Shape::MoszynskaCone { n } => format!("moszynska_cone({n})"),
            Shape::TruncatedParabola { n } => format!("truncated_parabola({n})"),
        }
    }
}

/// The cone geometry behind `MoszynskaCone`: returns `(h/s, s)` where the
/// wedge apex sits at `e_d/4`, `h = c - 1/4` is the apex-to-hyperplane height,
/// `c = n/(n+1)`, and `s = 1/(n+1)` is the sphere radius in that hyperplane.
pub fn moszynska_cone_geometry(n: u32) -> (f64, f64) {
    let nf = n as f64;
    let c = nf / (nf + 1.0);
    let h = c - 0.25;
    let s = 1.0 / (nf + 1.0);
    (h / s, s)
}

/// Set membership of `x` in the cone-clipped ball (independent of the radial
/// formula; used by the raster oracles).
pub fn moszynska_member(x: &[f64], n: u32) -> bool {
    let d = x.len();
    if norm(x) > 1.0 {
        return false;
    }
    let (h_over_s, _) = moszynska_cone_geometry(n);
    let perp: f64 = x[..d - 1].iter().map(|c| c * c).sum::<f64>().sqrt();
    // Complement of the open wedge interior.
    x[d - 1] - 0.25 <= h_over_s * perp
}

/// Set membership in the truncated parabola `P_n` (the literal planar set,
/// which is not itself star-shaped; used by the raster oracle).
pub fn parabola_member(x: f64, y: f64, n: u32) -> bool {
    (-1.0..=1.0).contains(&x) && y >= 0.0 && y <= x * x / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir2(x: f64, y: f64) -> Direction {
        Direction::from_point(&[x, y]).unwrap()
    }

    #[test]
    fn ball_and_full_space() {
        let b = Shape::Ball { radius: 1.0 };
        assert_eq!(b.eval(&dir2(0.6, 0.8)), XReal::ONE);
        assert_eq!(Shape::FullSpace.eval(&dir2(1.0, 0.0)), XReal::INFINITY);
    }

    #[test]
    fn ray_is_infinite_on_axis_and_zero_off() {
        let r = Shape::Ray { dir: Direction::axis(2, 0) };
        assert_eq!(r.eval(&Direction::axis(2, 0)), XReal::INFINITY);
        assert_eq!(r.eval(&dir2(0.6, 0.8)), XReal::ZERO);
    }

    #[test]
    fn en_spike_matches_t_exp_minus_t() {
        // <theta,e_1> = t/n gives rho = t * exp(-t).
        let n = 7u32;
        let t = 2.5f64;
        let c = t / n as f64;
        let th = dir2(c, (1.0 - c * c).sqrt());
        let got = Shape::EnSpike { n }.eval(&th).value();
        assert!((got - t * (-t).exp()).abs() < 1e-12);
    }

    #[test]
    fn moszynska_axis_value_is_quarter() {
        for n in [1u32, 5, 20, 60] {
            let v = Shape::MoszynskaCone { n }.eval(&Direction::axis(2, 1));
            assert_eq!(v.value(), 0.25, "n={n}");
        }
    }

    /// Raster oracle: quarter value on the axis from set membership alone.
    #[test]
    fn moszynska_axis_value_from_membership_bisection() {
        for n in [1u32, 12, 60] {
            let mut lo = 0.0f64;
            let mut hi = 2.0f64;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if moszynska_member(&[0.0, mid], n) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((lo - 0.25).abs() < 1e-12, "n={n}: {lo}");
        }
    }

    /// Membership raster vs closed form along many rays (d=2 and d=3).
    #[test]
    fn moszynska_profile_agrees_with_membership_oracle() {
        for (d, n) in [(2usize, 3u32), (2, 17), (3, 9)] {
            let shape = Shape::MoszynskaCone { n };
            for k in 0..180 {
                let ang = std::f64::consts::PI * k as f64 / 90.0;
                let theta = if d == 2 {
                    Direction::from_angle(ang)
                } else {
                    Direction::from_point(&[0.3 * ang.cos(), 0.3 * ang.sin(), 1.0 - 0.01 * k as f64])
                        .unwrap()
                };
                let mut lo = 0.0f64;
                let mut hi = 1.5f64;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if moszynska_member(&theta.at(mid), n) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let closed = shape.eval(&theta).value();
                assert!(
                    (closed - lo).abs() < 1e-10,
                    "d={d} n={n} theta={theta:?}: closed {closed} vs oracle {lo}"
                );
            }
        }
    }

    #[test]
    fn parabola_profile_band() {
        let n = 4u32;
        let p = Shape::TruncatedParabola { n };
        assert_eq!(p.eval(&Direction::axis(2, 0)).value(), 1.0);
        assert_eq!(p.eval(&Direction::axis(2, 0).antipode()).value(), 1.0);
        assert_eq!(p.eval(&Direction::axis(2, 1)), XReal::ZERO);
        // Inside the band: n*s <= |c|.
        let s = 0.1;
        let c = (1.0f64 - s * s).sqrt();
        assert!(n as f64 * s <= c);
        assert!((p.eval(&dir2(c, s)).value() - 1.0 / c).abs() < 1e-15);
        // Outside the band.
        assert_eq!(p.eval(&dir2(0.2, (1.0f64 - 0.04).sqrt())), XReal::ZERO);
    }

    #[test]
    fn halfspace_limit_profile() {
        let h = Shape::HalfspaceLimit;
        assert_eq!(h.eval(&dir2(0.0, -1.0)), XReal::INFINITY);
        assert_eq!(h.eval(&dir2(-1.0, 0.0)), XReal::INFINITY);
        assert_eq!(h.eval(&dir2(1.0, 0.0)), XReal::ZERO);
        assert_eq!(h.eval(&dir2(0.0, 1.0)), XReal::ZERO);
        assert_eq!(h.eval(&dir2(0.6, -0.8)), XReal::INFINITY);
    }
}
