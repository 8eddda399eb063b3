use serde::{Deserialize, Serialize};

use crate::direction::{dot, norm, Direction};
use crate::error::{Error, Result};
use crate::shapes::ALIGN_TOL;
use crate::xreal::XReal;

/// Convex sets given by paired radial and support evaluators. Seeds are the
/// inputs of the flower/polar machinery; `support >= radial` holds pointwise
/// for any convex set containing the origin.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum SeedShape {
    /// Segment `[0, to]`.
    Segment { to: Vec<f64> },
    /// Ray `R_u = {t u : t >= 0}`.
    Ray { dir: Direction },
    /// Ball of the given radius about the origin.
    Ball { radius: f64 },
    /// 2D convex polygon containing the origin, counterclockwise vertex list.
    /// Radial via exact edge intersection, support via vertex maximum.
    Polygon { vertices: Vec<[f64; 2]> },
    /// The product strip `[0,1] x [0, inf)` in the `(e_1, e_2)` plane.
    Strip,
    /// `Strip` united with `{(x,y): x >= 1, y >= slope (x-1)}`; the
    /// flower-wedge sequence element. V-representation: points `(0,0),(1,0)`,
    /// rays `(0,1)` and `(1,slope)`.
    Wedge { slope: f64 },
    /// General cone+hull V-representation in any dimension. Support is exact
    /// (`inf` as soon as a ray generator has positive inner product); the
    /// radial map is available only for the named shapes above.
    VRep { points: Vec<Vec<f64>>, rays: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexSeed {
    pub dim: usize,
    pub shape: SeedShape,
    pub name: String,
}

impl ConvexSeed {
    pub fn new(dim: usize, shape: SeedShape) -> Result<ConvexSeed> {
        let name = describe(&shape);
        let seed = ConvexSeed { dim, shape, name };
        seed.validate()?;
        Ok(seed)
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::invalid("seed dimension must be >= 2"));
        }
        match &self.shape {
            SeedShape::Segment { to } => {
                if to.len() != self.dim {
                    return Err(Error::DimensionMismatch { left: to.len(), right: self.dim });
                }
                if norm(to) == 0.0 {
                    return Err(Error::invalid("segment endpoint must be nonzero"));
                }
            }
            SeedShape::Ray { dir } => {
                if dir.dim() != self.dim {
                    return Err(Error::DimensionMismatch { left: dir.dim(), right: self.dim });
                }
            }
            SeedShape::Ball { radius } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::invalid("seed ball radius must be positive"));
                }
            }
            SeedShape::Polygon { vertices } => {
                if self.dim != 2 {
                    return Err(Error::invalid("polygon seeds are 2-dimensional"));
                }
                if vertices.len() < 3 {
                    return Err(Error::invalid("polygon needs at least 3 vertices"));
                }
                if !polygon_is_convex_ccw(vertices) {
                    return Err(Error::invalid(
                        "polygon must be convex with counterclockwise vertices",
                    ));
                }
                if !polygon_contains_origin(vertices) {
                    return Err(Error::invalid("polygon must contain the origin"));
                }
            }
            SeedShape::Strip | SeedShape::Wedge { .. } => {
                // Planar shapes embed into higher dimensions.
                if let SeedShape::Wedge { slope } = &self.shape {
                    if !slope.is_finite() || *slope <= 0.0 {
                        return Err(Error::invalid("wedge slope must be positive"));
                    }
                }
            }
            SeedShape::VRep { points, rays } => {
                for p in points {
                    if p.len() != self.dim {
                        return Err(Error::DimensionMismatch { left: p.len(), right: self.dim });
                    }
                }
                for r in rays {
                    if r.len() != self.dim {
                        return Err(Error::DimensionMismatch { left: r.len(), right: self.dim });
                    }
                    if norm(r) == 0.0 {
                        return Err(Error::invalid("zero ray generator"));
                    }
                }
                if points.is_empty() && rays.is_empty() {
                    return Err(Error::invalid("empty V-representation"));
                }
                if !points.iter().any(|p| norm(p) == 0.0) {
                    return Err(Error::invalid("V-representation must list the origin"));
                }
            }
        }
        Ok(())
    }

    /// Support function `h_K(theta) = sup_{x in K} <x, theta>`.
    pub fn support(&self, theta: &Direction) -> XReal {
        debug_assert_eq!(theta.dim(), self.dim);
        match &self.shape {
            SeedShape::Segment { to } => {
                XReal::from_raw(dot(to, theta.coords()).max(0.0))
            }
            SeedShape::Ray { dir } => {
                if theta.dot_dir(dir) > 0.0 { XReal::INFINITY } else { XReal::ZERO }
            }
            SeedShape::Ball { radius } => XReal::from_raw(*radius),
            SeedShape::Polygon { vertices } => {
                let m = vertices
                    .iter()
                    .map(|v| v[0] * theta.component(0) + v[1] * theta.component(1))
                    .fold(f64::NEG_INFINITY, f64::max);
                XReal::from_raw(m.max(0.0))
            }
            SeedShape::Strip => {
                let (t1, t2) = (theta.component(0), theta.component(1));
                if t2 > 0.0 { XReal::INFINITY } else { XReal::from_raw(t1.max(0.0)) }
            }
            SeedShape::Wedge { slope } => {
                let (t1, t2) = (theta.component(0), theta.component(1));
                if t2 > 0.0 || t1 + slope * t2 > 0.0 {
                    XReal::INFINITY
                } else {
                    XReal::from_raw(t1.max(0.0))
                }
            }
            SeedShape::VRep { points, rays } => {
                if rays.iter().any(|r| dot(r, theta.coords()) > 0.0) {
                    return XReal::INFINITY;
                }
                let m = points
                    .iter()
                    .map(|p| dot(p, theta.coords()))
                    .fold(f64::NEG_INFINITY, f64::max);
                XReal::from_raw(m.max(0.0))
            }
        }
    }

    /// Radial function of the seed, exact for the named shapes. The general
    /// `VRep` has no closed radial form and is rejected.
    pub fn radial(&self, theta: &Direction) -> Result<XReal> {
        debug_assert_eq!(theta.dim(), self.dim);
        Ok(match &self.shape {
            SeedShape::Segment { to } => {
                let len = norm(to);
                if dot(theta.coords(), to) / len >= 1.0 - ALIGN_TOL {
                    XReal::from_raw(len)
                } else {
                    XReal::ZERO
                }
            }
            SeedShape::Ray { dir } => {
                if theta.dot_dir(dir) >= 1.0 - ALIGN_TOL {
                    XReal::INFINITY
                } else {
                    XReal::ZERO
                }
            }
            SeedShape::Ball { radius } => XReal::from_raw(*radius),
            SeedShape::Polygon { vertices } => polygon_radial(vertices, theta),
            SeedShape::Strip => {
                let (c, s) = self.planar_components(theta)?;
                if s < 0.0 || c < 0.0 {
                    XReal::ZERO
                } else if c == 0.0 {
                    XReal::INFINITY
                } else {
                    XReal::from_raw(1.0 / c)
                }
            }
            SeedShape::Wedge { slope } => {
                let (c, s) = self.planar_components(theta)?;
                if s < 0.0 || c < 0.0 {
                    XReal::ZERO
                } else if s >= slope * c {
                    // Includes c = 0 (the e_2 ray) and the wedge edge itself.
                    XReal::INFINITY
                } else {
                    XReal::from_raw(slope / (slope * c - s))
                }
            }
            SeedShape::VRep { .. } => {
                return Err(Error::invalid(
                    "no exact radial map for a general V-representation",
                ));
            }
        })
    }

    /// For planar shapes embedded in R^d: the `(e_1, e_2)` components when the
    /// direction lies in that plane, else the radial map is zero off-plane.
    fn planar_components(&self, theta: &Direction) -> Result<(f64, f64)> {
        let off: f64 = theta.coords()[2..].iter().map(|c| c * c).sum::<f64>().sqrt();
        if off > ALIGN_TOL {
            // Ray leaves the plane immediately: reach 0 unless pointing at 0.
            return Ok((-1.0, -1.0));
        }
        Ok((theta.component(0), theta.component(1)))
    }

    /// Generator description `(points, rays)` for the direct polar-membership
    /// oracle `y in K^o iff <y,p> <= 1 for all p and <y,r> <= 0 for all r`.
    /// Available for every catalog shape.
    pub fn generators(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        match &self.shape {
            SeedShape::Segment { to } => (vec![vec![0.0; self.dim], to.clone()], vec![]),
            SeedShape::Ray { dir } => {
                (vec![vec![0.0; self.dim]], vec![dir.coords().to_vec()])
            }
            SeedShape::Ball { .. } => {
                // Not polyhedral; the polar oracle special-cases balls.
                (vec![vec![0.0; self.dim]], vec![])
            }
            SeedShape::Polygon { vertices } => (
                vertices.iter().map(|v| vec![v[0], v[1]]).collect(),
                vec![],
            ),
            SeedShape::Strip => {
                let mut p0 = vec![0.0; self.dim];
                let mut p1 = vec![0.0; self.dim];
                p1[0] = 1.0;
                let mut r = vec![0.0; self.dim];
                r[1] = 1.0;
                p0[0] = 0.0;
                (vec![p0, p1], vec![r])
            }
            SeedShape::Wedge { slope } => {
                let mut p1 = vec![0.0; self.dim];
                p1[0] = 1.0;
                let mut r1 = vec![0.0; self.dim];
                r1[1] = 1.0;
                let mut r2 = vec![0.0; self.dim];
                r2[0] = 1.0;
                r2[1] = *slope;
                (vec![vec![0.0; self.dim], p1], vec![r1, r2])
            }
            SeedShape::VRep { points, rays } => (points.clone(), rays.clone()),
        }
    }

    pub fn is_ball(&self) -> Option<f64> {
        match &self.shape {
            SeedShape::Ball { radius } => Some(*radius),
            _ => None,
        }
    }
}

fn cross2(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn polygon_is_convex_ccw(verts: &[[f64; 2]]) -> bool {
    let n = verts.len();
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let c = verts[(i + 2) % n];
        let ab = [b[0] - a[0], b[1] - a[1]];
        let bc = [c[0] - b[0], c[1] - b[1]];
        if cross2(&ab, &bc) < -1e-12 {
            return false;
        }
    }
    true
}

fn polygon_contains_origin(verts: &[[f64; 2]]) -> bool {
    let n = verts.len();
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let ab = [b[0] - a[0], b[1] - a[1]];
        let ao = [-a[0], -a[1]];
        if cross2(&ab, &ao) < -1e-12 {
            return false;
        }
    }
    true
}

/// Exact radial reach of a convex CCW polygon containing 0: the largest
/// positive ray parameter among the edge intersections.
fn polygon_radial(verts: &[[f64; 2]], theta: &Direction) -> XReal {
    let (tx, ty) = (theta.component(0), theta.component(1));
    let n = verts.len();
    let mut best = 0.0f64;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let ex = b[0] - a[0];
        let ey = b[1] - a[1];
        // Solve t*theta = a + s*(b - a).
        let det = ey * tx - ex * ty;
        if det.abs() < 1e-15 {
            continue;
        }
        let t = (a[1] * ex - a[0] * ey) / -det;
        let s = if ex.abs() >= ey.abs() {
            (t * tx - a[0]) / ex
        } else {
            (t * ty - a[1]) / ey
        };
        if t > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&s) {
            best = best.max(t);
        }
    }
    XReal::from_raw(best)
}

fn describe(shape: &SeedShape) -> String {
    match shape {
        SeedShape::Segment { to } => format!("seed-segment(to={to:?})"),
        SeedShape::Ray { dir } => format!("seed-ray({:?})", dir.coords()),
        SeedShape::Ball { radius } => format!("seed-ball(r={radius})"),
        SeedShape::Polygon { vertices } => format!("seed-polygon({} vertices)", vertices.len()),
        SeedShape::Strip => "seed-strip".to_string(),
        SeedShape::Wedge { slope } => format!("seed-wedge(slope={slope})"),
        SeedShape::VRep { points, rays } => {
            format!("seed-vrep({} points, {} rays)", points.len(), rays.len())
        }
    }
}

/// Convenience: the axis-aligned square `[-a, a]^2`.
pub fn square_seed(half_width: f64) -> Result<ConvexSeed> {
    ConvexSeed::new(
        2,
        SeedShape::Polygon {
            vertices: vec![
                [half_width, -half_width],
                [half_width, half_width],
                [-half_width, half_width],
                [-half_width, -half_width],
            ],
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir2(x: f64, y: f64) -> Direction {
        Direction::from_point(&[x, y]).unwrap()
    }

    #[test]
    fn segment_support_is_positive_part() {
        let s = ConvexSeed::new(2, SeedShape::Segment { to: vec![1.0, 0.0] }).unwrap();
        assert_eq!(s.support(&dir2(1.0, 0.0)).value(), 1.0);
        assert_eq!(s.support(&dir2(-1.0, 0.0)).value(), 0.0);
        let d = dir2(0.6, 0.8);
        assert!((s.support(&d).value() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn strip_support_matches_direct_sup() {
        let s = ConvexSeed::new(2, SeedShape::Strip).unwrap();
        assert_eq!(s.support(&dir2(0.0, 1.0)), XReal::INFINITY);
        assert_eq!(s.support(&dir2(0.6, 0.8)), XReal::INFINITY);
        assert_eq!(s.support(&dir2(1.0, 0.0)).value(), 1.0);
        assert_eq!(s.support(&dir2(-1.0, 0.0)).value(), 0.0);
        assert!((s.support(&dir2(0.6, -0.8)).value() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn strip_radial() {
        let s = ConvexSeed::new(2, SeedShape::Strip).unwrap();
        assert_eq!(s.radial(&dir2(0.0, 1.0)).unwrap(), XReal::INFINITY);
        assert_eq!(s.radial(&dir2(1.0, 0.0)).unwrap().value(), 1.0);
        assert!((s.radial(&dir2(0.6, 0.8)).unwrap().value() - 1.0 / 0.6).abs() < 1e-12);
        assert_eq!(s.radial(&dir2(-0.6, 0.8)).unwrap(), XReal::ZERO);
        assert_eq!(s.radial(&dir2(0.6, -0.8)).unwrap(), XReal::ZERO);
    }

    #[test]
    fn wedge_support_and_radial() {
        let w = ConvexSeed::new(2, SeedShape::Wedge { slope: 4.0 }).unwrap();
        // h(e_1) = inf because the ray (1, slope) has positive e_1 component.
        assert_eq!(w.support(&dir2(1.0, 0.0)), XReal::INFINITY);
        assert_eq!(w.radial(&dir2(1.0, 0.0)).unwrap().value(), 1.0);
        // Direction inside the wedge cone: infinite reach.
        assert_eq!(w.radial(&dir2(0.1, (1.0f64 - 0.01).sqrt())).unwrap(), XReal::INFINITY);
        // Below the wedge edge but to the right: finite reach beyond the strip.
        let th = dir2(0.9, (1.0f64 - 0.81).sqrt());
        let expect = 4.0 / (4.0 * 0.9 - th.component(1));
        assert!((w.radial(&th).unwrap().value() - expect).abs() < 1e-12);
        assert!(expect > 1.0 / 0.9);
    }

    #[test]
    fn square_polygon_radial_and_support() {
        let sq = square_seed(1.0).unwrap();
        // Along +e_1 the boundary is at x = 1.
        assert!((sq.radial(&dir2(1.0, 0.0)).unwrap().value() - 1.0).abs() < 1e-12);
        // Along the diagonal the corner is at sqrt(2).
        let diag = dir2(1.0, 1.0);
        assert!((sq.radial(&diag).unwrap().value() - 2f64.sqrt()).abs() < 1e-12);
        assert!((sq.support(&diag).value() - 2f64.sqrt()).abs() < 1e-12);
        // Generic direction: support h(theta) = |t1| + |t2|.
        let th = dir2(0.6, -0.8);
        assert!((sq.support(&th).value() - 1.4).abs() < 1e-12);
        assert!((sq.radial(&th).unwrap().value() - 1.0 / 0.8).abs() < 1e-12);
    }

    #[test]
    fn support_dominates_radial_on_probes() {
        let seeds = vec![
            ConvexSeed::new(2, SeedShape::Segment { to: vec![0.3, 0.7] }).unwrap(),
            ConvexSeed::new(2, SeedShape::Ball { radius: 2.0 }).unwrap(),
            square_seed(1.5).unwrap(),
            ConvexSeed::new(2, SeedShape::Strip).unwrap(),
            ConvexSeed::new(2, SeedShape::Wedge { slope: 3.0 }).unwrap(),
        ];
        for seed in &seeds {
            for k in 0..64 {
                let th = Direction::from_angle(2.0 * std::f64::consts::PI * k as f64 / 64.0);
                let r = seed.radial(&th).unwrap();
                let h = seed.support(&th);
                assert!(h.value() >= r.value() - 1e-12, "{}: {th:?}", seed.name);
            }
        }
    }

    #[test]
    fn vrep_has_no_radial() {
        let v = ConvexSeed::new(
            2,
            SeedShape::VRep { points: vec![vec![0.0, 0.0], vec![1.0, 0.0]], rays: vec![] },
        )
        .unwrap();
        assert!(v.radial(&dir2(1.0, 0.0)).is_err());
        assert_eq!(v.support(&dir2(1.0, 0.0)).value(), 1.0);
    }

    #[test]
    fn polygon_must_contain_origin() {
        let bad = ConvexSeed::new(
            2,
            SeedShape::Polygon {
                vertices: vec![[2.0, 1.0], [3.0, 1.0], [3.0, 2.0], [2.0, 2.0]],
            },
        );
        assert!(bad.is_err());
    }
}
