//! Class-membership checkers: the four-condition inward-normal property, its
//! normal-cone dual, the polar small-ball inequality, the symmetric-graph
//! foot constraint, separated-pair classes, patchwise local classes, and
//! affine-map preservation. Checkers are pure and deterministic: sampling
//! budgets and tolerances arrive through `CheckConfig`.

use crate::convex::{ConvexBody, ConvexError};
use crate::domain::{
    BoundarySample, ClippedDomain, DomainError, Region, ShapeDomain,
};
use crate::geom::{dist_to_ray, Point, Vec2, DEFAULT_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error("domain produced no boundary samples")]
    EmptyBoundary,
    #[error("operation requires a star-polar domain")]
    NotStarPolar,
    #[error("operation requires a symmetric graph domain")]
    NotGraph,
    #[error("operation requires a separated pair domain")]
    NotPair,
    #[error("patch balls {0} and {1} overlap")]
    PatchOverlap(usize, usize),
    #[error("domain boundary escapes the patch cover (worst clearance {0:.6})")]
    BoundaryNotCovered(f64),
    #[error("affine map is singular (|det| = {0:.3e})")]
    SingularMap(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Absolute geometric tolerance for sign and membership tests.
    pub tol: f64,
    /// Boundary sampling budget.
    pub boundary_samples: usize,
    /// Interior sampling budget for cone-emptiness scans.
    pub interior_samples: usize,
    /// Membership probes along each outward ray.
    pub ray_steps: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tol: DEFAULT_TOL,
            boundary_samples: 512,
            interior_samples: 2048,
            ray_steps: 256,
        }
    }
}

impl CheckConfig {
    pub fn with_samples(n: usize) -> Self {
        CheckConfig { boundary_samples: n, ..Default::default() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub sample: BoundarySample,
    pub offending: Point,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub name: String,
    /// `None` marks conditions reported informationally only.
    pub pass: Option<bool>,
    pub margin: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub pass: bool,
    /// Signed clearance of the binding quantitative condition
    /// (positive = satisfied with slack).
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub condition_breakdown: Vec<ConditionOutcome>,
    pub samples_used: usize,
    pub skipped_nonsmooth: usize,
}

impl CheckReport {
    fn outcome(name: &str, pass: Option<bool>, margin: Option<f64>, note: Option<String>) -> ConditionOutcome {
        ConditionOutcome { name: name.into(), pass, margin, note }
    }
}

/// Radius of the ambient ball the ray marches exit from.
fn ambient_radius<R: Region + ?Sized>(dom: &R, c: &ConvexBody) -> (Point, f64) {
    let bb = dom.bbox().union(c.bounding_box());
    (bb.center(), bb.diagonal() + 1.0)
}

/// Signed clearance of the inward ray `x + t*nu` against `C`:
/// balls report `radius - d(center, ray)`; segments and polytopes report
/// `-d(ray, C)` (zero on a hit). Also returns the nearest point of `C`
/// to the ray for witness reporting.
fn ray_clearance(c: &ConvexBody, x: Point, nu: Vec2) -> (f64, Point) {
    match c {
        ConvexBody::Ball { center, radius } => {
            (radius - dist_to_ray(*center, x, nu), *center)
        }
        ConvexBody::Segment { a, b } => {
            let (d, p) = ray_segment_distance(x, nu, *a, *b);
            (-d, p)
        }
        ConvexBody::Polytope { vertices } => {
            if ray_hits_convex_polygon(x, nu, vertices) {
                (0.0, x)
            } else {
                let n = vertices.len();
                let mut best = (f64::INFINITY, vertices[0]);
                for i in 0..n {
                    let (d, p) = ray_segment_distance(x, nu, vertices[i], vertices[(i + 1) % n]);
                    if d < best.0 {
                        best = (d, p);
                    }
                }
                (-best.0, best.1)
            }
        }
    }
}

/// Distance between the ray `x + t*nu, t >= 0` and segment `[a, b]`, with
/// the nearest segment point.
fn ray_segment_distance(x: Point, nu: Vec2, a: Point, b: Point) -> (f64, Point) {
    // Proper intersection?
    let ab = b - a;
    let denom = nu.cross(ab);
    if denom.abs() > 1e-15 {
        let t = (a - x).cross(ab) / denom;
        let u = (a - x).cross(nu) / denom;
        if t >= 0.0 && (0.0..=1.0).contains(&u) {
            return (0.0, a + ab * u);
        }
    }
    // Otherwise the minimum is attained at an endpoint configuration.
    let mut best = (dist_to_ray(a, x, nu), a);
    let db = dist_to_ray(b, x, nu);
    if db < best.0 {
        best = (db, b);
    }
    let pa = crate::geom::closest_on_segment(x, a, b);
    let dx = x.dist(pa);
    if dx < best.0 {
        best = (dx, pa);
    }
    (best.0, best.1)
}

/// Ray–convex-polygon hit test by half-plane clipping of the parameter range.
fn ray_hits_convex_polygon(x: Point, nu: Vec2, vertices: &[Point]) -> bool {
    let n = vertices.len();
    let (mut t_lo, mut t_hi) = (0.0f64, f64::INFINITY);
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let edge = b - a;
        // Inside: edge x (p - a) >= 0 for CCW order.
        let f0 = edge.cross(x - a);
        let df = edge.cross(nu);
        if df.abs() < 1e-15 {
            if f0 < 0.0 {
                return false;
            }
        } else {
            let t = -f0 / df;
            if df > 0.0 {
                t_lo = t_lo.max(t);
            } else {
                t_hi = t_hi.min(t);
            }
        }
        if t_lo > t_hi {
            return false;
        }
    }
    true
}

/// Four-condition inward-normal check of `dom` against the reference body
/// `c`. Condition (2) — local Lipschitz boundary — is not decidable from
/// finite samples and is reported informationally without affecting `pass`.
pub fn check_c_gnp<R: Region + ?Sized>(
    dom: &R,
    c: &ConvexBody,
    cfg: &CheckConfig,
) -> Result<CheckReport, CheckError> {
    c.validate()?;
    let samples = dom.boundary(cfg.boundary_samples)?;
    if samples.is_empty() {
        return Err(CheckError::EmptyBoundary);
    }
    let (d_center, d_radius) = ambient_radius(dom, c);

    // (1) the interior of C lies in the domain.
    let interior_pts = convex_interior_grid(c, 256);
    let total1 = interior_pts.len().max(1);
    let fail1 = interior_pts.iter().filter(|p| !dom.contains_point(**p)).count();
    let cond1_ok = fail1 == 0;
    let cond1_margin = if cond1_ok { 0.0 } else { -(fail1 as f64 / total1 as f64) };
    let cond1_note = if interior_pts.is_empty() {
        Some("reference body has empty planar interior; condition holds vacuously".to_string())
    } else {
        None
    };

    // (2) informational regularity statistic.
    let n_nonsmooth = samples.iter().filter(|s| !s.smooth).count();
    let cond2_note = format!(
        "{} of {} boundary samples non-smooth; Lipschitz regularity is not decidable from finite samples",
        n_nonsmooth,
        samples.len()
    );

    // (3) outward rays leave the domain once and for all.
    let (c_boundary, _) = c.boundary_with_normals(cfg.boundary_samples.min(256));
    let mut disconnected = 0usize;
    for (cp, nu) in &c_boundary {
        let t_exit = (d_radius + (*cp - d_center).norm()) * 1.05;
        let mut runs = 0usize;
        let mut prev_in = false;
        for k in 0..cfg.ray_steps {
            let t = t_exit * (k as f64 + 0.5) / cfg.ray_steps as f64;
            let inside = dom.contains_point(*cp + *nu * t);
            if inside && !prev_in {
                runs += 1;
            }
            prev_in = inside;
        }
        if runs > 1 {
            disconnected += 1;
        }
    }
    let cond3_ok = disconnected == 0;
    let cond3_margin = if cond3_ok {
        0.0
    } else {
        -(disconnected as f64 / c_boundary.len().max(1) as f64)
    };

    // (4) every inward normal ray from a smooth sample off C meets C.
    let mut worst4 = f64::INFINITY;
    let mut witness: Option<Witness> = None;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for s in &samples {
        if c.contains(s.point, cfg.tol) {
            continue; // condition quantifies over the boundary away from C
        }
        let Some(nu) = s.inward_normal else {
            skipped += 1;
            continue;
        };
        used += 1;
        let (clearance, nearest) = ray_clearance(c, s.point, nu);
        if clearance < worst4 {
            worst4 = clearance;
            witness = Some(Witness { sample: s.clone(), offending: nearest });
        }
    }
    if used == 0 {
        worst4 = 0.0;
    }
    let cond4_ok = worst4 >= -cfg.tol;

    let pass = cond1_ok && cond3_ok && cond4_ok;
    Ok(CheckReport {
        pass,
        worst_margin: worst4,
        witness: if pass { None } else { witness },
        condition_breakdown: vec![
            CheckReport::outcome("containment", Some(cond1_ok), Some(cond1_margin), cond1_note),
            CheckReport::outcome("boundary_regularity", None, None, Some(cond2_note)),
            CheckReport::outcome("outward_ray_connected", Some(cond3_ok), Some(cond3_margin), None),
            CheckReport::outcome("inward_ray_meets_body", Some(cond4_ok), Some(worst4), None),
        ],
        samples_used: used,
        skipped_nonsmooth: skipped,
    })
}

/// Grid of strictly interior points of a convex body (empty for segments).
fn convex_interior_grid(c: &ConvexBody, target: usize) -> Vec<Point> {
    match c {
        ConvexBody::Segment { .. } => Vec::new(),
        ConvexBody::Ball { center, radius } if *radius <= 0.0 => vec![*center],
        _ => {
            let bb = c.bounding_box();
            let k = (target as f64).sqrt().ceil() as usize;
            let inset = -1e-7 * bb.diagonal().max(1e-6);
            let mut pts = Vec::new();
            for j in 0..k {
                for i in 0..k {
                    let p = Vec2::new(
                        bb.lo.x + (i as f64 + 0.5) * bb.width() / k as f64,
                        bb.lo.y + (j as f64 + 0.5) * bb.height() / k as f64,
                    );
                    if c.contains(p, inset) {
                        pts.push(p);
                    }
                }
            }
            pts
        }
    }
}

/// Normal-cone characterization: for every boundary sample `x` off `C` and
/// every interior sample `y`, the cone at `x` avoids `y`. The margin is the
/// negated worst normalized cone violation (0 when no pair violates).
pub fn check_c_sp<R: Region + ?Sized>(
    dom: &R,
    c: &ConvexBody,
    cfg: &CheckConfig,
) -> Result<CheckReport, CheckError> {
    c.validate()?;
    let samples = dom.boundary(cfg.boundary_samples)?;
    if samples.is_empty() {
        return Err(CheckError::EmptyBoundary);
    }
    let interior = dom.interior_grid(cfg.interior_samples);
    let mut worst = 0.0f64;
    let mut witness: Option<Witness> = None;
    let mut pairs = 0usize;
    for s in &samples {
        if c.contains(s.point, cfg.tol) {
            continue;
        }
        for y in &interior {
            let sep = y.dist(s.point);
            if sep <= cfg.tol {
                continue;
            }
            pairs += 1;
            let sup = c.cone_sup(s.point, *y);
            // y inside the cone (sup <= 0) violates emptiness.
            let violation = (-sup).max(0.0) / sep;
            if violation > worst {
                worst = violation;
                witness = Some(Witness { sample: s.clone(), offending: *y });
            }
        }
    }
    let margin = -worst;
    let pass = margin >= -cfg.tol;
    Ok(CheckReport {
        pass,
        worst_margin: margin,
        witness: if pass { None } else { witness },
        condition_breakdown: vec![CheckReport::outcome(
            "normal_cone_avoids_domain",
            Some(pass),
            Some(margin),
            Some(format!("{pairs} boundary-interior pairs scanned")),
        )],
        samples_used: samples.len(),
        skipped_nonsmooth: samples.iter().filter(|s| !s.smooth).count(),
    })
}

/// Polar small-ball inequality for star-shaped domains:
/// `(g g')^2 / (g^2 + g'^2) <= eps^2` at every angle, with `g'` by central
/// periodic differences. The margin is `eps^2` minus the grid maximum.
pub fn check_eps_ball_gnp(dom: &ShapeDomain, eps: f64, cfg: &CheckConfig) -> Result<CheckReport, CheckError> {
    let ShapeDomain::StarPolar { g, .. } = dom else {
        return Err(CheckError::NotStarPolar);
    };
    if !(eps > 0.0) {
        return Err(CheckError::Precondition("eps must be positive".into()));
    }
    if g.iter().any(|&v| v <= eps) {
        return Err(CheckError::Precondition(
            "polar radius must stay above eps everywhere".into(),
        ));
    }
    let m = g.len();
    let h = TAU / m as f64;
    let mut max_val = 0.0f64;
    let mut argmax = 0usize;
    for k in 0..m {
        let dg = (g[(k + 1) % m] - g[(k + m - 1) % m]) / (2.0 * h);
        let val = (g[k] * dg).powi(2) / (g[k] * g[k] + dg * dg);
        if val > max_val {
            max_val = val;
            argmax = k;
        }
    }
    let margin = eps * eps - max_val;
    let pass = margin >= -cfg.tol;
    let witness_pt = match dom {
        ShapeDomain::StarPolar { center, theta0, g, .. } => {
            let th = theta0 + TAU * argmax as f64 / m as f64;
            *center + Vec2::dir(th) * g[argmax]
        }
        _ => unreachable!(),
    };
    Ok(CheckReport {
        pass,
        worst_margin: margin,
        witness: if pass {
            None
        } else {
            Some(Witness {
                sample: BoundarySample {
                    point: witness_pt,
                    inward_normal: None,
                    smooth: true,
                    param: TAU * argmax as f64 / m as f64,
                },
                offending: witness_pt,
            })
        },
        condition_breakdown: vec![CheckReport::outcome(
            "polar_ball_inequality",
            Some(pass),
            Some(margin),
            None,
        )],
        samples_used: m,
        skipped_nonsmooth: 0,
    })
}

/// Foot constraint for symmetric graphs: at every smooth node the inward
/// normal from `(x, phi(x))` meets the axis at `x + phi*phi'`, which must
/// stay within the graph's own interval (the reference segment).
pub fn check_graph_gnp(dom: &ShapeDomain, cfg: &CheckConfig) -> Result<CheckReport, CheckError> {
    let ShapeDomain::Graph { xs, phi, dphi } = dom else {
        return Err(CheckError::NotGraph);
    };
    dom.validate()?;
    let (x_lo, x_hi) = (xs[0], *xs.last().unwrap());
    let mut worst = f64::INFINITY;
    let mut witness: Option<Witness> = None;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for i in 0..xs.len() {
        let slope = match dphi {
            Some(d) => d[i],
            None => {
                let (lo, hi) = (i.saturating_sub(1), (i + 1).min(xs.len() - 1));
                Some((phi[hi] - phi[lo]) / (xs[hi] - xs[lo]))
            }
        };
        let Some(s) = slope else {
            skipped += 1;
            continue;
        };
        if phi[i] == 0.0 {
            skipped += 1;
            continue;
        }
        used += 1;
        let foot = xs[i] + phi[i] * s;
        let margin = (x_hi - foot).min(foot - x_lo);
        if margin < worst {
            worst = margin;
            witness = Some(Witness {
                sample: BoundarySample {
                    point: Vec2::new(xs[i], phi[i]),
                    inward_normal: Some(Vec2::new(s, -1.0).normalized()),
                    smooth: true,
                    param: xs[i],
                },
                offending: Vec2::new(foot, 0.0),
            });
        }
    }
    if used == 0 {
        return Err(CheckError::Precondition("graph has no smooth nodes".into()));
    }
    let pass = worst >= -cfg.tol;
    Ok(CheckReport {
        pass,
        worst_margin: worst,
        witness: if pass { None } else { witness },
        condition_breakdown: vec![CheckReport::outcome(
            "normal_foot_in_interval",
            Some(pass),
            Some(worst),
            Some(format!("interval [{x_lo:.4}, {x_hi:.4}]")),
        )],
        samples_used: used,
        skipped_nonsmooth: skipped,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    Distance,
    Projection,
}

/// Separated-pair class check: both components carry their own reference
/// body, and the first component keeps distance `delta` from the second's
/// closure (or from its projection onto the convexified closure).
pub fn check_pair_class(
    dom: &ShapeDomain,
    c1: &ConvexBody,
    c2: &ConvexBody,
    mode: PairMode,
    delta: f64,
    cfg: &CheckConfig,
) -> Result<CheckReport, CheckError> {
    let ShapeDomain::DisjointPair { first, second, .. } = dom else {
        return Err(CheckError::NotPair);
    };
    let rep1 = check_c_gnp(first.as_ref(), c1, cfg)?;
    let rep2 = check_c_gnp(second.as_ref(), c2, cfg)?;

    let mut pts1: Vec<Point> = first
        .boundary(cfg.boundary_samples)?
        .iter()
        .map(|s| s.point)
        .collect();
    pts1.extend(first.interior_grid(cfg.interior_samples / 2));
    let separation = match mode {
        PairMode::Distance => {
            let b2: Vec<Point> = second
                .boundary(cfg.boundary_samples)?
                .iter()
                .map(|s| s.point)
                .collect();
            let mut sep = f64::INFINITY;
            for p in &pts1 {
                if second.contains_point(*p) {
                    sep = 0.0;
                    break;
                }
                for q in &b2 {
                    sep = sep.min(p.dist(*q));
                }
            }
            sep
        }
        PairMode::Projection => {
            let b2: Vec<Point> = second
                .boundary(cfg.boundary_samples)?
                .iter()
                .map(|s| s.point)
                .collect();
            let hull = ConvexBody::hull_of(&b2)?;
            pts1.iter()
                .map(|p| p.dist(hull.project(*p)))
                .fold(f64::INFINITY, f64::min)
        }
    };
    let sep_margin = separation - delta;
    let pass = rep1.pass && rep2.pass && sep_margin >= -cfg.tol;
    Ok(CheckReport {
        pass,
        worst_margin: sep_margin.min(rep1.worst_margin).min(rep2.worst_margin),
        witness: rep1.witness.or(rep2.witness),
        condition_breakdown: vec![
            CheckReport::outcome("first_component", Some(rep1.pass), Some(rep1.worst_margin), None),
            CheckReport::outcome("second_component", Some(rep2.pass), Some(rep2.worst_margin), None),
            CheckReport::outcome(
                "separation",
                Some(sep_margin >= -cfg.tol),
                Some(sep_margin),
                Some(format!("measured {separation:.6} against delta {delta:.6}")),
            ),
        ],
        samples_used: rep1.samples_used + rep2.samples_used,
        skipped_nonsmooth: rep1.skipped_nonsmooth + rep2.skipped_nonsmooth,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Patch {
    pub center: Point,
    pub radius: f64,
    pub body: ConvexBody,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalMode {
    Gnp,
    Nc,
}

/// Local-class check: the boundary must be covered by the closed patch
/// balls, and each patch-clipped piece of the domain must satisfy the normal
/// property (or cone emptiness) against its patch body.
pub fn check_local_class(
    dom: &ShapeDomain,
    patches: &[Patch],
    mode: LocalMode,
    cfg: &CheckConfig,
) -> Result<CheckReport, CheckError> {
    for i in 0..patches.len() {
        for j in i + 1..patches.len() {
            if patches[i].center.dist(patches[j].center)
                < patches[i].radius + patches[j].radius - cfg.tol
            {
                return Err(CheckError::PatchOverlap(i, j));
            }
        }
    }
    // Boundary coverage by the closed patch balls.
    let samples = dom.boundary(cfg.boundary_samples)?;
    if samples.is_empty() {
        return Err(CheckError::EmptyBoundary);
    }
    let mut coverage = f64::INFINITY;
    for s in &samples {
        let best = patches
            .iter()
            .map(|p| p.radius - s.point.dist(p.center))
            .fold(f64::NEG_INFINITY, f64::max);
        coverage = coverage.min(best);
    }
    if coverage < -cfg.tol {
        return Err(CheckError::BoundaryNotCovered(coverage));
    }

    let mut breakdown = vec![CheckReport::outcome(
        "boundary_coverage",
        Some(true),
        Some(coverage),
        None,
    )];
    let mut pass = true;
    let mut worst = coverage;
    let mut witness = None;
    let mut used = 0;
    let mut skipped = 0;
    for (i, p) in patches.iter().enumerate() {
        let clipped = ClippedDomain { base: dom, center: p.center, radius: p.radius };
        let rep = match mode {
            LocalMode::Gnp => check_c_gnp(&clipped, &p.body, cfg)?,
            LocalMode::Nc => check_c_sp(&clipped, &p.body, cfg)?,
        };
        pass &= rep.pass;
        worst = worst.min(rep.worst_margin);
        if witness.is_none() {
            witness = rep.witness.clone();
        }
        used += rep.samples_used;
        skipped += rep.skipped_nonsmooth;
        breakdown.push(CheckReport::outcome(
            &format!("patch_{i}"),
            Some(rep.pass),
            Some(rep.worst_margin),
            None,
        ));
    }
    Ok(CheckReport {
        pass,
        worst_margin: worst,
        witness: if pass { None } else { witness },
        condition_breakdown: breakdown,
        samples_used: used,
        skipped_nonsmooth: skipped,
    })
}

/// 2x2 matrix in row-major order.
pub type Mat2 = [[f64; 2]; 2];

fn mat_det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn mat_apply(m: &Mat2, v: Vec2) -> Vec2 {
    Vec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
}

fn mat_inv(m: &Mat2) -> Mat2 {
    let d = mat_det(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

/// Inverse-transpose action on normals.
fn mat_inv_t(m: &Mat2) -> Mat2 {
    let inv = mat_inv(m);
    [[inv[0][0], inv[1][0]], [inv[0][1], inv[1][1]]]
}

fn is_similarity(m: &Mat2) -> Option<(f64, f64)> {
    // M^T M = s^2 I and det > 0: returns (scale, rotation angle).
    let c0 = Vec2::new(m[0][0], m[1][0]);
    let c1 = Vec2::new(m[0][1], m[1][1]);
    let s2 = c0.norm2();
    if (c1.norm2() - s2).abs() <= 1e-12 * s2.max(1e-12)
        && c0.dot(c1).abs() <= 1e-12 * s2.max(1e-12)
        && mat_det(m) > 0.0
    {
        Some((s2.sqrt(), c0.angle()))
    } else {
        None
    }
}

/// Image of a domain under `x -> Mx + t`. Star-polar domains stay
/// star-polar; everything else maps through the sampled-curve form with
/// normals transported by the inverse transpose.
pub fn affine_image_domain(
    dom: &ShapeDomain,
    m: &Mat2,
    t: Vec2,
    n: usize,
) -> Result<ShapeDomain, CheckError> {
    let det = mat_det(m);
    if det.abs() <= 1e-9 {
        return Err(CheckError::SingularMap(det.abs()));
    }
    if !dom.is_planar() {
        return Err(CheckError::Domain(DomainError::NotPlanar));
    }
    if let Some((s, angle)) = is_similarity(m) {
        // Exact paths that keep margins bit-comparable under isometries.
        match dom {
            ShapeDomain::StarPolar { center, theta0, g, dg } => {
                return Ok(ShapeDomain::StarPolar {
                    center: mat_apply(m, *center) + t,
                    theta0: theta0 + angle,
                    g: g.iter().map(|v| v * s).collect(),
                    dg: dg.as_ref().map(|d| d.iter().map(|v| v * s).collect()),
                });
            }
            ShapeDomain::BallUnion { balls } => {
                return Ok(ShapeDomain::BallUnion {
                    balls: balls
                        .iter()
                        .map(|b| crate::domain::BallSpec {
                            center: mat_apply(m, b.center) + t,
                            radius: b.radius * s,
                        })
                        .collect(),
                });
            }
            ShapeDomain::DisjointPair { first, second, delta } => {
                return Ok(ShapeDomain::DisjointPair {
                    first: Box::new(affine_image_domain(first, m, t, n)?),
                    second: Box::new(affine_image_domain(second, m, t, n)?),
                    delta: delta * s,
                });
            }
            _ => {}
        }
    }
    if let ShapeDomain::StarPolar { center, theta0, g, .. } = dom {
        // General affine image of a star-shaped set is star-shaped about the
        // mapped center: resample the polar radius through the inverse map.
        let minv = mat_inv(m);
        let k = n.max(g.len()).max(720);
        let new_g: Vec<f64> = (0..k)
            .map(|j| {
                let u = Vec2::dir(TAU * j as f64 / k as f64);
                let v = mat_apply(&minv, u);
                let g_val = crate::domain::periodic_interp(g, (v.angle() - theta0).rem_euclid(TAU));
                g_val / v.norm()
            })
            .collect();
        return ShapeDomain::star_polar(mat_apply(m, *center) + t, 0.0, new_g, None)
            .map_err(CheckError::Domain);
    }
    // Sampled-curve fallback.
    let curve = dom.to_closed_curve(n.max(1024))?;
    let ShapeDomain::ClosedCurve { loops, samples } = curve else { unreachable!() };
    let mit = mat_inv_t(m);
    let loops = loops
        .iter()
        .map(|l| l.iter().map(|p| mat_apply(m, *p) + t).collect())
        .collect();
    let samples = samples
        .iter()
        .map(|s| BoundarySample {
            point: mat_apply(m, s.point) + t,
            inward_normal: s.inward_normal.map(|nu| mat_apply(&mit, nu).normalized()),
            smooth: s.smooth,
            param: s.param,
        })
        .collect();
    ShapeDomain::closed_curve(loops, samples).map_err(CheckError::Domain)
}

/// Image of the reference body: balls stay balls under similarities and
/// become polytope approximations of the image ellipse otherwise.
pub fn affine_image_convex(
    c: &ConvexBody,
    m: &Mat2,
    t: Vec2,
    ellipse_vertices: usize,
) -> Result<ConvexBody, CheckError> {
    let det = mat_det(m);
    if det.abs() <= 1e-9 {
        return Err(CheckError::SingularMap(det.abs()));
    }
    let map = |p: Point| mat_apply(m, p) + t;
    Ok(match c {
        ConvexBody::Ball { center, radius } => {
            if let Some((s, _)) = is_similarity(m) {
                ConvexBody::Ball { center: map(*center), radius: radius * s }
            } else {
                let k = ellipse_vertices.max(64);
                let mut verts: Vec<Point> = (0..k)
                    .map(|j| map(*center + Vec2::dir(TAU * j as f64 / k as f64) * *radius))
                    .collect();
                if det < 0.0 {
                    verts.reverse();
                }
                ConvexBody::polytope(verts)?
            }
        }
        ConvexBody::Segment { a, b } => ConvexBody::Segment { a: map(*a), b: map(*b) },
        ConvexBody::Polytope { vertices } => {
            let mut verts: Vec<Point> = vertices.iter().map(|v| map(*v)).collect();
            if det < 0.0 {
                verts.reverse();
            }
            ConvexBody::polytope(verts)?
        }
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineCheckReport {
    pub pre: CheckReport,
    pub post: CheckReport,
}

/// Re-run the normal-property check after mapping both the domain and the
/// reference body by `x -> Mx + t`.
pub fn affine_map_check(
    dom: &ShapeDomain,
    c: &ConvexBody,
    m: &Mat2,
    t: Vec2,
    cfg: &CheckConfig,
) -> Result<AffineCheckReport, CheckError> {
    let pre = check_c_gnp(dom, c, cfg)?;
    let mapped_dom = affine_image_domain(dom, m, t, cfg.boundary_samples)?;
    let mapped_c = affine_image_convex(c, m, t, 64)?;
    let post = check_c_gnp(&mapped_dom, &mapped_c, cfg)?;
    Ok(AffineCheckReport { pre, post })
}
