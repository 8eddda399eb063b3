//! Randomized invariant suites over sampled bodies plus the corpus: metric
//! axioms, the classical-vs-radial inequalities, duality identities, and the
//! truncation lemmas. The CLI `check` command dispatches these; the
//! acceptance tests drive several of them directly.

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::body::StarBody;
use crate::direction::Direction;
use crate::dual::{
    ball_containment_check, flower, flower_distance, inversion_check, phi_modulus_check, polar,
    polar_oracle_radial, star_dual,
};
use crate::error::Result;
use crate::euclid::{aw_distance, hausdorff, point_distance};
use crate::grid::SphereGrid;
use crate::profile::RadialProfile;
use crate::radial::{
    radial_aw_distance, radial_distance, radial_excess, radial_metric, structured_radii,
    within_radial_aw, DEFAULT_J_MAX,
};
use crate::seed::{square_seed, ConvexSeed, SeedShape};
use crate::shapes::Shape;
use crate::xreal::XReal;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    /// Worst signed margin seen (positive = how far past the allowed bound).
    pub worst_excess: f64,
    pub note: Option<String>,
}

impl CheckResult {
    fn new(suite: &str, name: &str) -> CheckResult {
        CheckResult {
            suite: suite.to_string(),
            name: name.to_string(),
            checked: 0,
            violations: 0,
            worst_excess: f64::NEG_INFINITY,
            note: None,
        }
    }

    fn record(&mut self, excess: f64) {
        self.checked += 1;
        if excess > self.worst_excess {
            self.worst_excess = excess;
        }
        if excess > 0.0 {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Seeded random bounded bodies: sampled profiles with a smooth base radius
/// plus a few Gaussian bumps, clamped to `[0.3, 5]` so that duality moduli
/// stay testable.
pub fn random_bodies(
    grid: &Arc<SphereGrid>,
    count: usize,
    seed: u64,
) -> Vec<StarBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs = grid.dirs().to_vec();
    (0..count)
        .map(|k| {
            let base: f64 = rng.random_range(0.4..1.8);
            let bumps: usize = rng.random_range(0..4);
            let mut centers = Vec::new();
            for _ in 0..bumps {
                let c = rng.random_range(0..dirs.len());
                let width: f64 = rng.random_range(0.08..0.6);
                let amp: f64 = rng.random_range(-0.4..1.2) * base;
                centers.push((c, width, amp));
            }
            let values: Vec<XReal> = dirs
                .iter()
                .map(|d| {
                    let mut v = base;
                    for (c, w, a) in &centers {
                        let ang = d.angle_to(&dirs[*c]);
                        v += a * (-(ang * ang) / (w * w)).exp();
                    }
                    XReal::from_raw(v.clamp(0.3, 5.0))
                })
                .collect();
            let mut body = StarBody::new(
                grid.dim(),
                RadialProfile::Sampled { grid: grid.clone(), values: Arc::new(values) },
                format!("random-{seed}-{k}"),
            );
            body.hints_mut().is_closed_claim = Some(true);
            body
        })
        .collect()
}

/// Metric axioms for delta and d_AWr on the same random set, plus the
/// threshold-query consistency.
pub fn suite_metric_axioms(
    grid: &Arc<SphereGrid>,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckResult>> {
    const TOL: f64 = 1e-12;
    let bodies = random_bodies(grid, trials.max(3), seed);
    let mut sym = CheckResult::new("metric-axioms", "delta symmetry (exact)");
    let mut idy = CheckResult::new("metric-axioms", "delta identity (exact)");
    let mut tri = CheckResult::new("metric-axioms", "delta triangle (1e-12)");
    let mut sym_aw = CheckResult::new("metric-axioms", "d_AWr symmetry (exact)");
    let mut idy_aw = CheckResult::new("metric-axioms", "d_AWr identity (exact)");
    let mut tri_aw = CheckResult::new("metric-axioms", "d_AWr triangle (1e-12)");
    let mut within = CheckResult::new("metric-axioms", "within-threshold consistency");

    for w in bodies.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        let dab = radial_metric(a, b, grid)?.value();
        let dba = radial_metric(b, a, grid)?.value();
        let dac = radial_metric(a, c, grid)?.value();
        let dbc = radial_metric(b, c, grid)?.value();
        sym.record((dab - dba).abs());
        idy.record(radial_metric(a, a, grid)?.value());
        tri.record(dac - (dab + dbc) - TOL);

        let rab = radial_aw_distance(a, b, grid, DEFAULT_J_MAX)?.value;
        let rba = radial_aw_distance(b, a, grid, DEFAULT_J_MAX)?.value;
        let rac = radial_aw_distance(a, c, grid, DEFAULT_J_MAX)?.value;
        let rbc = radial_aw_distance(b, c, grid, DEFAULT_J_MAX)?.value;
        sym_aw.record((rab - rba).abs());
        idy_aw.record(radial_aw_distance(a, a, grid, DEFAULT_J_MAX)?.value);
        tri_aw.record(rac - (rab + rbc) - TOL);

        // Threshold-query consistency away from the epsilon boundary.
        let eps_g = grid.eps_g(2.0);
        for eps in [0.9, 0.5, 0.33, 0.21, 0.125, 0.08] {
            if (rab - eps).abs() <= eps_g {
                continue;
            }
            let q = within_radial_aw(a, b, eps, grid)?;
            within.record(if q == (rab < eps) { 0.0 } else { 1.0 });
        }
    }
    Ok(vec![sym, idy, tri, sym_aw, idy_aw, tri_aw, within])
}

/// The ordering inequalities between classical and radial quantities:
/// `d_H <= delta`, `d_AW <= d_AWr`, `d(x,.) <= d_r(x,.)`, `e <= e_r`.
pub fn suite_inequalities(
    grid: &Arc<SphereGrid>,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckResult>> {
    const TOL: f64 = 1e-12;
    let bodies = random_bodies(grid, trials.max(2), seed);
    let mut h_le_d = CheckResult::new("inequalities", "d_H <= delta (grid-exact)");
    let mut aw_le = CheckResult::new("inequalities", "d_AW <= d_AWr (grid-exact)");
    let mut p4 = CheckResult::new("inequalities", "d(x,.) <= d_r(x,.) on samples");
    let mut p5 = CheckResult::new("inequalities", "e <= e_r (grid-exact)");

    for w in bodies.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let dh = hausdorff(a, b, grid)?.value.value();
        let delta = radial_metric(a, b, grid)?.value();
        h_le_d.record(dh - delta - TOL);

        let daw = aw_distance(a, b, grid, DEFAULT_J_MAX)?.value;
        let dawr = radial_aw_distance(a, b, grid, DEFAULT_J_MAX)?.value;
        aw_le.record(daw - dawr - TOL);

        let ea = crate::euclid::excess(a, b, grid)?.value.value();
        let ra = radial_excess(a, b, grid)?.value();
        p5.record(ea - ra - TOL);

        let rhos_a = a.profile().sample_on(grid);
        let rhos_b = b.profile().sample_on(grid);
        for (i, theta) in grid.dirs().iter().enumerate().step_by(17) {
            for r in structured_radii(&[rhos_a[i], rhos_b[i]], 3.0) {
                let x = theta.at(r);
                p4.record(point_distance(&x, b, grid) - radial_distance(&x, b) - TOL);
            }
        }
    }
    Ok(vec![h_le_d, aw_le, p4, p5])
}

fn catalog_bodies(dim: usize) -> Vec<StarBody> {
    let mut out = vec![
        StarBody::ball(dim, 1.0),
        StarBody::ball(dim, 2.5),
        StarBody::origin(dim),
        StarBody::full_space(dim),
        StarBody::from_shape(dim, Shape::EnSpike { n: 4 }).unwrap(),
        StarBody::from_shape(dim, Shape::XnPower { n: 6 }).unwrap(),
        StarBody::from_shape(dim, Shape::Ray { dir: Direction::axis(dim, 0) }).unwrap(),
        StarBody::from_shape(dim, Shape::Halfspace { normal: Direction::axis(dim, 1) }).unwrap(),
    ];
    if dim <= 3 {
        out.push(StarBody::from_shape(dim, Shape::MoszynskaCone { n: 9 }).unwrap());
    }
    if dim == 2 {
        out.push(StarBody::from_shape(dim, Shape::TruncatedParabola { n: 5 }).unwrap());
    }
    let mut seg = vec![0.0; dim];
    seg[0] = 1.0;
    out.push(StarBody::from_shape(dim, Shape::Segment { to: seg }).unwrap());
    out
}

fn catalog_seeds(dim: usize) -> Vec<Arc<ConvexSeed>> {
    let mut out = vec![
        Arc::new(ConvexSeed::new(dim, SeedShape::Ball { radius: 1.0 }).unwrap()),
        Arc::new(ConvexSeed::new(dim, SeedShape::Ball { radius: 2.0 }).unwrap()),
        Arc::new(
            ConvexSeed::new(dim, SeedShape::Segment { to: axis_vec(dim, 0, 1.0) }).unwrap(),
        ),
        Arc::new(ConvexSeed::new(dim, SeedShape::Ray { dir: Direction::axis(dim, 0) }).unwrap()),
        Arc::new(ConvexSeed::new(dim, SeedShape::Strip).unwrap()),
        Arc::new(ConvexSeed::new(dim, SeedShape::Wedge { slope: 16.0 }).unwrap()),
    ];
    if dim == 2 {
        out.push(Arc::new(square_seed(1.0).unwrap()));
    }
    out
}

fn axis_vec(dim: usize, k: usize, v: f64) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    x[k] = v;
    x
}

/// Duality identities: involution, order reversal, unique fixed point,
/// the polar decomposition with its independent oracle, the flower isometry,
/// the inversion identity, the continuity modulus, and ball containment.
pub fn suite_duality(
    grid: &Arc<SphereGrid>,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckResult>> {
    let mut involution = CheckResult::new("duality", "Phi(Phi(A)) = A (exact)");
    let mut reversal = CheckResult::new("duality", "order reversal (exact)");
    let mut fixed = CheckResult::new("duality", "unique fixed point is the unit ball");
    let mut decomp = CheckResult::new("duality", "rho_polar * h = 1 (1e-12)");
    let mut oracle = CheckResult::new("duality", "polar matches bisection oracle (1e-9)");
    let mut isometry = CheckResult::new("duality", "flower isometry |d_H - delta| <= 2 eps_g");
    let mut inversion = CheckResult::new("duality", "spherical inversion identity");
    let mut modulus = CheckResult::new("duality", "Phi modulus 2 delta / r0^2");
    let mut contain = CheckResult::new("duality", "interior-ball containment lemma");

    let mut bodies = catalog_bodies(grid.dim());
    bodies.extend(random_bodies(grid, trials.min(32), seed));

    for a in &bodies {
        let aa = star_dual(&star_dual(a));
        let mut worst = 0.0f64;
        let mut fixed_everywhere = true;
        let phi_a = star_dual(a);
        for d in grid.dirs() {
            let lhs = aa.eval_radial(d);
            let rhs = a.eval_radial(d);
            if lhs != rhs {
                worst = 1.0;
            }
            let pv = phi_a.eval_radial(d);
            if pv.abs_diff(rhs).value() > 1e-12 {
                fixed_everywhere = false;
            }
        }
        involution.record(worst);
        if fixed_everywhere {
            // Phi(A) = A on the grid must force rho == 1 pointwise.
            let off = grid
                .dirs()
                .iter()
                .map(|d| a.eval_radial(d).abs_diff(XReal::ONE).value())
                .fold(0.0f64, f64::max);
            fixed.record(off - 1e-9);
        } else {
            fixed.record(0.0);
        }
        let rep = inversion_check(a, grid, 9)?;
        inversion.record(rep.violations as f64);
    }

    // Order reversal on comparable pairs A ⊆ A + rB.
    for (k, a) in bodies.iter().enumerate() {
        let bigger = a.radial_sum(&StarBody::ball(grid.dim(), 0.25 + 0.1 * (k % 3) as f64))?;
        let pa = star_dual(a);
        let pb = star_dual(&bigger);
        let mut bad = 0.0f64;
        for d in grid.dirs() {
            if pb.eval_radial(d) > pa.eval_radial(d) {
                bad = 1.0;
            }
        }
        reversal.record(bad);
    }

    // Decomposition, oracle, and isometry over the seed catalog.
    let seeds = catalog_seeds(grid.dim());
    for s in &seeds {
        let p = polar(s, grid)?;
        for d in grid.dirs() {
            let h = s.support(d);
            if h.is_finite() && h.value() > 0.0 {
                let prod = p.eval_radial(d).value() * h.value();
                decomp.record((prod - 1.0).abs() - 1e-12);
            }
            let orc = polar_oracle_radial(s, d);
            let got = p.eval_radial(d);
            let err = if orc.is_infinite() || got.is_infinite() {
                if orc.is_infinite() == got.is_infinite() { 0.0 } else { 1.0 }
            } else {
                (orc.value() - got.value()).abs()
            };
            oracle.record(err - 1e-9);
        }
    }
    // Flower isometry needs compact pairs.
    let compact: Vec<&Arc<ConvexSeed>> = seeds
        .iter()
        .filter(|s| {
            matches!(
                s.shape,
                SeedShape::Ball { .. } | SeedShape::Segment { .. } | SeedShape::Polygon { .. }
            )
        })
        .collect();
    let eps_g = grid.eps_g(2.0);
    for i in 0..compact.len() {
        for jdx in (i + 1)..compact.len() {
            let (a, k) = (compact[i], compact[jdx]);
            let fa = flower(a, grid)?;
            let fk = flower(k, grid)?;
            let dh = hausdorff(
                &StarBody::from_seed_radial(a)?,
                &StarBody::from_seed_radial(k)?,
                grid,
            )?
            .value
            .value();
            let delta = radial_metric(&fa.body, &fk.body, grid)?.value();
            isometry.record((dh - delta).abs() - 2.0 * eps_g);
            // d_club sanity: distance of flowers through their seeds.
            let _ = flower_distance(&fa, &fk, grid, DEFAULT_J_MAX)?;
        }
    }

    // Continuity modulus on lower-bounded random bodies (values >= 0.3).
    let rnd = random_bodies(grid, trials.clamp(2, 16), seed ^ 0x5ca1e);
    for w in rnd.windows(2) {
        let rep = phi_modulus_check(&w[0], &w[1], 0.3, grid)?;
        if rep.lower_bound_ok {
            modulus.record(rep.delta_phi - rep.bound - 1e-12);
        }
    }

    // Ball containment under uniformly small perturbations.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xba11);
    for _ in 0..trials.min(32) {
        let j0 = rng.random_range(1..4u32);
        let base = 1.0 / j0 as f64 + rng.random_range(0.0..0.5);
        let a = StarBody::ball(grid.dim(), base);
        let values: Vec<XReal> = (0..grid.len())
            .map(|_| {
                XReal::from_raw(base + rng.random_range(-1.0..1.0) / (4.0 * j0 as f64))
            })
            .collect();
        let x = StarBody::new(
            grid.dim(),
            RadialProfile::Sampled { grid: grid.clone(), values: Arc::new(values) },
            "perturbed",
        );
        let rep = ball_containment_check(&a, &x, j0, grid, DEFAULT_J_MAX)?;
        contain.record(if rep.pass { 0.0 } else { 1.0 });
    }

    Ok(vec![involution, reversal, fixed, decomp, oracle, isometry, inversion, modulus, contain])
}

/// Truncation lemmas: the radial identity inside the ball (exact), the
/// classical identity within grid slack, monotone clipped distances, and
/// bit-exact derived truncations.
pub fn suite_truncation(
    grid: &Arc<SphereGrid>,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckResult>> {
    let mut rad_id = CheckResult::new("truncation", "d_r(x, A ∩ etaB) = d_r(x, A) (exact)");
    let mut euc_id = CheckResult::new("truncation", "d(x, A ∩ etaB) = d(x, A) (eps_g)");
    let mut mono = CheckResult::new("truncation", "j -> delta_j nondecreasing");
    let mut exact = CheckResult::new("truncation", "derived truncation bit-exact");
    let mut lemma2 = CheckResult::new("truncation", "delta on truncations = sup gap (eps_g)");

    let mut bodies = catalog_bodies(grid.dim());
    bodies.extend(random_bodies(grid, trials.min(24), seed));
    let eps_g = grid.eps_g(2.0);

    for (k, a) in bodies.iter().enumerate() {
        let eta = 1.0 + (k % 4) as f64 * 0.75;
        let t = a.truncate(eta);
        let rhos = a.profile().sample_on(grid);
        for (i, theta) in grid.dirs().iter().enumerate().step_by(13) {
            // Bit-exact derived evaluation.
            let tv = t.eval_radial(theta);
            let want = rhos[i].min_with(XReal::from_raw(eta));
            exact.record(if tv == want { 0.0 } else { 1.0 });
            for r in structured_radii(&[rhos[i]], eta) {
                let x = theta.at(r);
                if crate::direction::norm(&x) > eta {
                    continue;
                }
                let d0 = radial_distance(&x, a);
                let d1 = radial_distance(&x, &t);
                rad_id.record((d0 - d1).abs());
                if a.hints().is_closed_claim == Some(true) {
                    let e0 = point_distance(&x, a, grid);
                    let e1 = point_distance(&x, &t, grid);
                    euc_id.record((e0 - e1).abs() - eps_g);
                }
            }
        }
    }

    for w in bodies.windows(2) {
        let res = radial_aw_distance(&w[0], &w[1], grid, 16)?;
        let increasing = res.terms.windows(2).all(|t| t[1].delta_j >= t[0].delta_j - 1e-15);
        mono.record(if increasing { 0.0 } else { 1.0 });

        // Lemma form: delta of eta-truncations equals the structured-sample
        // sup of |d_r difference| inside eta B.
        let eta = 2.0;
        let ta = w[0].truncate(eta);
        let tb = w[1].truncate(eta);
        let delta = radial_metric(&ta, &tb, grid)?.value();
        let gap = crate::radial::radial_distance_sup_gap(&w[0], &w[1], eta, grid)?.value();
        lemma2.record((delta - gap).abs() - eps_g);
    }

    Ok(vec![rad_id, euc_id, mono, exact, lemma2])
}

/// Bundles every suite, as dispatched by `check --suite all`.
pub fn run_suite(
    which: &str,
    grid: &Arc<SphereGrid>,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    match which {
        "metric-axioms" => out.extend(suite_metric_axioms(grid, trials, seed)?),
        "inequalities" => out.extend(suite_inequalities(grid, trials, seed)?),
        "duality" => out.extend(suite_duality(grid, trials, seed)?),
        "truncation" => out.extend(suite_truncation(grid, trials, seed)?),
        "all" => {
            out.extend(suite_metric_axioms(grid, trials, seed)?);
            out.extend(suite_inequalities(grid, trials, seed)?);
            out.extend(suite_duality(grid, trials, seed)?);
            out.extend(suite_truncation(grid, trials, seed)?);
        }
        other => {
            return Err(crate::error::Error::UnknownCatalogEntry {
                kind: "check suite",
                name: other.to_string(),
                valid: "metric-axioms, inequalities, duality, truncation, all".to_string(),
            });
        }
    }
    Ok(out)
}
