//! Domain representations: star-shaped polar graphs, symmetric graphs, ball
//! unions, separated pairs, 1-D interval unions, and sampled closed curves.
//! Boundary sampling carries analytic inward normals wherever the defining
//! data provides them; numerical differentiation is reserved for test oracles.

use crate::geom::{point_in_loops, polyline_length, Point, Rect, Vec2, DEFAULT_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("operation requires a planar domain")]
    NotPlanar,
}

/// Boundary point with optional analytic inward unit normal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundarySample {
    pub point: Point,
    pub inward_normal: Option<Vec2>,
    pub smooth: bool,
    /// Curve parameter the sample came from (angle, abscissa, or arc index).
    pub param: f64,
}

impl BoundarySample {
    pub fn smooth_at(point: Point, normal: Vec2, param: f64) -> Self {
        BoundarySample { point, inward_normal: Some(normal), smooth: true, param }
    }

    pub fn corner(point: Point, param: f64) -> Self {
        BoundarySample { point, inward_normal: None, smooth: false, param }
    }
}

/// A ball summand of a `BallUnion`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: Point,
    pub radius: f64,
}

/// A discretizable open set.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeDomain {
    /// Star-shaped about `center`: radius samples `g` on the uniform angle
    /// grid `theta0 + 2*pi*k/len`. `dg` holds analytic derivative samples
    /// when the generating radius function is known in closed form.
    StarPolar {
        center: Point,
        theta0: f64,
        g: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dg: Option<Vec<f64>>,
    },
    /// Mirror-symmetric about the x-axis: `|y| < phi(x)` with `phi` sampled
    /// on the sorted grid `xs` (uniform in the common case) and interpolated
    /// linearly. `dphi[i] = None` marks a kink at node `i`.
    Graph {
        xs: Vec<f64>,
        phi: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dphi: Option<Vec<Option<f64>>>,
    },
    BallUnion { balls: Vec<BallSpec> },
    /// Two components whose closures stay at distance >= `delta`.
    DisjointPair {
        first: Box<ShapeDomain>,
        second: Box<ShapeDomain>,
        delta: f64,
    },
    /// Finite union of disjoint open intervals on the line.
    Intervals1D { intervals: Vec<(f64, f64)> },
    /// Open set enclosed (even-odd) by sampled closed polylines, with
    /// precomputed boundary samples carrying analytic normals.
    ClosedCurve {
        loops: Vec<Vec<Point>>,
        samples: Vec<BoundarySample>,
    },
}

/// Minimal region interface the checkers run against; implemented by whole
/// domains and by patch-clipped views.
pub trait Region {
    fn contains_point(&self, p: Point) -> bool;
    fn bbox(&self) -> Rect;
    fn boundary(&self, n: usize) -> Result<Vec<BoundarySample>, DomainError>;

    /// Deterministic interior samples: bounding-box grid filtered by
    /// membership, thinned to about `target` points.
    fn interior_grid(&self, target: usize) -> Vec<Point> {
        let bb = self.bbox();
        let (w, h) = (bb.width().max(1e-12), bb.height().max(1e-12));
        // Grid sized for ~3x the target before membership filtering.
        let cell = (w * h / (3.0 * target.max(1) as f64)).sqrt();
        let nx = ((w / cell).ceil() as usize).max(2);
        let ny = ((h / cell).ceil() as usize).max(2);
        let mut pts = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let p = Vec2::new(
                    bb.lo.x + (i as f64 + 0.5) * w / nx as f64,
                    bb.lo.y + (j as f64 + 0.5) * h / ny as f64,
                );
                if self.contains_point(p) {
                    pts.push(p);
                }
            }
        }
        if pts.len() > target && target > 0 {
            let stride = pts.len() as f64 / target as f64;
            let mut thin = Vec::with_capacity(target);
            let mut acc = 0.0;
            while (acc as usize) < pts.len() && thin.len() < target {
                thin.push(pts[acc as usize]);
                acc += stride;
            }
            thin
        } else {
            pts
        }
    }
}

impl ShapeDomain {
    pub fn star_polar(
        center: Point,
        theta0: f64,
        g: Vec<f64>,
        dg: Option<Vec<f64>>,
    ) -> Result<Self, DomainError> {
        if g.len() < 16 {
            return Err(DomainError::DegenerateDomain(format!(
                "star polar grid size {} < 16",
                g.len()
            )));
        }
        if g.iter().any(|&v| !(v > 0.0)) {
            return Err(DomainError::DegenerateDomain("star polar radius must stay positive".into()));
        }
        if let Some(d) = &dg {
            if d.len() != g.len() {
                return Err(DomainError::DegenerateDomain("dg length mismatch".into()));
            }
        }
        Ok(ShapeDomain::StarPolar { center, theta0, g, dg })
    }

    /// Graph with explicit sorted grid. `phi = 0` at interior nodes pinches
    /// the domain there (cusp-chain style), which is permitted.
    pub fn graph(
        xs: Vec<f64>,
        phi: Vec<f64>,
        dphi: Option<Vec<Option<f64>>>,
    ) -> Result<Self, DomainError> {
        if xs.len() < 2 || xs.len() != phi.len() {
            return Err(DomainError::DegenerateDomain("graph needs matching xs/phi, len >= 2".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DomainError::DegenerateDomain("graph grid must be strictly increasing".into()));
        }
        if phi.iter().any(|&v| v < 0.0) {
            return Err(DomainError::DegenerateDomain("graph phi must be nonnegative".into()));
        }
        if phi.iter().all(|&v| v == 0.0) {
            return Err(DomainError::DegenerateDomain("graph phi vanishes identically".into()));
        }
        if let Some(d) = &dphi {
            if d.len() != phi.len() {
                return Err(DomainError::DegenerateDomain("dphi length mismatch".into()));
            }
        }
        Ok(ShapeDomain::Graph { xs, phi, dphi })
    }

    pub fn graph_uniform(
        x_lo: f64,
        x_hi: f64,
        phi: Vec<f64>,
        dphi: Option<Vec<Option<f64>>>,
    ) -> Result<Self, DomainError> {
        let m = phi.len();
        let xs = (0..m)
            .map(|i| x_lo + (x_hi - x_lo) * i as f64 / (m - 1) as f64)
            .collect();
        Self::graph(xs, phi, dphi)
    }

    pub fn ball_union(balls: Vec<BallSpec>) -> Result<Self, DomainError> {
        if balls.is_empty() {
            return Err(DomainError::DegenerateDomain("ball union is empty".into()));
        }
        if balls.iter().any(|b| !(b.radius > 0.0)) {
            return Err(DomainError::DegenerateDomain("ball radii must be positive".into()));
        }
        Ok(ShapeDomain::BallUnion { balls })
    }

    /// Checks the separation invariant by boundary sampling at construction.
    pub fn disjoint_pair(
        first: ShapeDomain,
        second: ShapeDomain,
        delta: f64,
    ) -> Result<Self, DomainError> {
        if !(delta > 0.0) {
            return Err(DomainError::DegenerateDomain("pair separation delta must be positive".into()));
        }
        let sep = min_boundary_distance(&first, &second, 256)?;
        if sep < delta - DEFAULT_TOL {
            return Err(DomainError::DegenerateDomain(format!(
                "components at distance {sep:.6} < declared delta {delta:.6}"
            )));
        }
        Ok(ShapeDomain::DisjointPair { first: Box::new(first), second: Box::new(second), delta })
    }

    pub fn intervals_1d(intervals: Vec<(f64, f64)>) -> Result<Self, DomainError> {
        if intervals.is_empty() {
            return Err(DomainError::DegenerateDomain("interval union is empty".into()));
        }
        let mut sorted = intervals.clone();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in sorted.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(DomainError::DegenerateDomain("intervals overlap".into()));
            }
        }
        if sorted.iter().any(|(a, b)| !(b > a) || !a.is_finite() || !b.is_finite()) {
            return Err(DomainError::DegenerateDomain("intervals must be finite and nonempty".into()));
        }
        Ok(ShapeDomain::Intervals1D { intervals: sorted })
    }

    pub fn closed_curve(
        loops: Vec<Vec<Point>>,
        samples: Vec<BoundarySample>,
    ) -> Result<Self, DomainError> {
        if loops.iter().any(|l| l.len() < 3) {
            return Err(DomainError::DegenerateDomain("closed curve loop with < 3 points".into()));
        }
        Ok(ShapeDomain::ClosedCurve { loops, samples })
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        match self {
            ShapeDomain::StarPolar { center, theta0, g, dg } => {
                Self::star_polar(*center, *theta0, g.clone(), dg.clone()).map(|_| ())
            }
            ShapeDomain::Graph { xs, phi, dphi } => {
                Self::graph(xs.clone(), phi.clone(), dphi.clone()).map(|_| ())
            }
            ShapeDomain::BallUnion { balls } => Self::ball_union(balls.clone()).map(|_| ()),
            ShapeDomain::DisjointPair { first, second, delta } => {
                first.validate()?;
                second.validate()?;
                if !(*delta > 0.0) {
                    return Err(DomainError::DegenerateDomain("nonpositive delta".into()));
                }
                Ok(())
            }
            ShapeDomain::Intervals1D { intervals } => {
                Self::intervals_1d(intervals.clone()).map(|_| ())
            }
            ShapeDomain::ClosedCurve { loops, samples } => {
                Self::closed_curve(loops.clone(), samples.clone()).map(|_| ())
            }
        }
    }

    pub fn is_planar(&self) -> bool {
        !matches!(self, ShapeDomain::Intervals1D { .. })
    }

    /// Interpolated polar radius for star-polar domains (periodic linear).
    pub fn star_radius_at(&self, theta: f64) -> Option<f64> {
        match self {
            ShapeDomain::StarPolar { theta0, g, .. } => {
                Some(periodic_interp(g, (theta - theta0).rem_euclid(TAU)))
            }
            _ => None,
        }
    }

    /// Smallest geometric feature the discretization must resolve.
    pub fn feature_size(&self) -> f64 {
        match self {
            ShapeDomain::StarPolar { g, .. } => g.iter().cloned().fold(f64::INFINITY, f64::min),
            ShapeDomain::Graph { phi, .. } => phi.iter().cloned().fold(0.0f64, f64::max),
            ShapeDomain::BallUnion { balls } => {
                balls.iter().map(|b| b.radius).fold(f64::INFINITY, f64::min)
            }
            ShapeDomain::DisjointPair { first, second, delta } => {
                first.feature_size().min(second.feature_size()).min(*delta)
            }
            ShapeDomain::Intervals1D { intervals } => intervals
                .iter()
                .map(|(a, b)| b - a)
                .fold(f64::INFINITY, f64::min),
            ShapeDomain::ClosedCurve { loops, .. } => {
                // Shortest loop edge is a conservative proxy.
                let mut m = f64::INFINITY;
                for lp in loops {
                    for w in lp.windows(2) {
                        let d = w[0].dist(w[1]);
                        if d > 1e-12 {
                            m = m.min(d * 8.0);
                        }
                    }
                }
                m
            }
        }
    }

    /// Ordered closed boundary polylines, one per component where possible.
    pub fn boundary_loops(&self, n: usize) -> Vec<Vec<Point>> {
        match self {
            ShapeDomain::StarPolar { center, theta0, g, .. } => {
                let m = g.len();
                let pts = (0..m)
                    .map(|k| {
                        let th = theta0 + TAU * k as f64 / m as f64;
                        *center + Vec2::dir(th) * g[k]
                    })
                    .collect();
                vec![pts]
            }
            ShapeDomain::Graph { xs, phi, .. } => {
                let mut upper: Vec<Point> =
                    xs.iter().zip(phi).map(|(&x, &p)| Vec2::new(x, p)).collect();
                let lower: Vec<Point> = xs
                    .iter()
                    .zip(phi)
                    .rev()
                    .map(|(&x, &p)| Vec2::new(x, -p))
                    .collect();
                upper.extend(lower);
                vec![upper]
            }
            ShapeDomain::BallUnion { balls } => balls
                .iter()
                .map(|b| {
                    let k = n.max(64);
                    (0..k)
                        .map(|j| b.center + Vec2::dir(TAU * j as f64 / k as f64) * b.radius)
                        .collect()
                })
                .collect(),
            ShapeDomain::DisjointPair { first, second, .. } => {
                let mut l = first.boundary_loops(n / 2);
                l.extend(second.boundary_loops(n / 2));
                l
            }
            ShapeDomain::Intervals1D { .. } => Vec::new(),
            ShapeDomain::ClosedCurve { loops, .. } => loops.clone(),
        }
    }

    /// Polygonal boundary length built from the loops.
    pub fn perimeter_estimate(&self, n: usize) -> f64 {
        self.boundary_loops(n)
            .iter()
            .map(|l| {
                let mut closed = l.clone();
                if let Some(&first) = l.first() {
                    closed.push(first);
                }
                polyline_length(&closed)
            })
            .sum()
    }

    /// Scale all defining coordinates by `factor` about `center`.
    /// Exact on every variant; graphs dilated off-axis fall back to a
    /// sampled closed curve.
    pub fn dilate(&self, factor: f64, center: Point) -> Result<ShapeDomain, DomainError> {
        if !(factor > 0.0) {
            return Err(DomainError::DegenerateDomain("dilation factor must be positive".into()));
        }
        let map = |p: Point| center + (p - center) * factor;
        Ok(match self {
            ShapeDomain::StarPolar { center: sc, theta0, g, dg } => ShapeDomain::StarPolar {
                center: map(*sc),
                theta0: *theta0,
                g: g.iter().map(|v| v * factor).collect(),
                dg: dg.as_ref().map(|d| d.iter().map(|v| v * factor).collect()),
            },
            ShapeDomain::Graph { xs, phi, dphi } => {
                if center.y.abs() <= DEFAULT_TOL {
                    ShapeDomain::Graph {
                        xs: xs.iter().map(|x| center.x + (x - center.x) * factor).collect(),
                        phi: phi.iter().map(|v| v * factor).collect(),
                        dphi: dphi.clone(),
                    }
                } else {
                    self.to_closed_curve(1024)?.dilate(factor, center)?
                }
            }
            ShapeDomain::BallUnion { balls } => ShapeDomain::BallUnion {
                balls: balls
                    .iter()
                    .map(|b| BallSpec { center: map(b.center), radius: b.radius * factor })
                    .collect(),
            },
            ShapeDomain::DisjointPair { first, second, delta } => ShapeDomain::DisjointPair {
                first: Box::new(first.dilate(factor, center)?),
                second: Box::new(second.dilate(factor, center)?),
                delta: delta * factor,
            },
            ShapeDomain::Intervals1D { intervals } => ShapeDomain::Intervals1D {
                intervals: intervals
                    .iter()
                    .map(|(a, b)| (center.x + (a - center.x) * factor, center.x + (b - center.x) * factor))
                    .collect(),
            },
            ShapeDomain::ClosedCurve { loops, samples } => ShapeDomain::ClosedCurve {
                loops: loops
                    .iter()
                    .map(|l| l.iter().map(|p| map(*p)).collect())
                    .collect(),
                samples: samples
                    .iter()
                    .map(|s| BoundarySample {
                        point: map(s.point),
                        inward_normal: s.inward_normal,
                        smooth: s.smooth,
                        param: s.param,
                    })
                    .collect(),
            },
        })
    }

    /// Convert to the sampled closed-curve representation (membership by
    /// even-odd crossing over the loops).
    pub fn to_closed_curve(&self, n: usize) -> Result<ShapeDomain, DomainError> {
        if !self.is_planar() {
            return Err(DomainError::NotPlanar);
        }
        if let ShapeDomain::ClosedCurve { .. } = self {
            return Ok(self.clone());
        }
        ShapeDomain::closed_curve(self.boundary_loops(n), self.boundary(n)?)
    }

    /// Min and max polar radius about `origin`, by ray casting the loops
    /// (exact node values for star-polar domains about their own center).
    pub fn polar_radius_range(&self, origin: Point) -> Result<(f64, f64), DomainError> {
        match self {
            ShapeDomain::StarPolar { center, g, .. } if center.dist(origin) <= DEFAULT_TOL => {
                let lo = g.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = g.iter().cloned().fold(0.0f64, f64::max);
                Ok((lo, hi))
            }
            _ => {
                let loops = self.boundary_loops(512);
                if loops.is_empty() {
                    return Err(DomainError::NotPlanar);
                }
                let mut lo = f64::INFINITY;
                let mut hi: f64 = 0.0;
                for lp in &loops {
                    for p in lp {
                        let r = p.dist(origin);
                        lo = lo.min(r);
                        hi = hi.max(r);
                    }
                }
                Ok((lo, hi))
            }
        }
    }
}

impl Region for ShapeDomain {
    fn contains_point(&self, p: Point) -> bool {
        match self {
            ShapeDomain::StarPolar { center, theta0, g, .. } => {
                let d = p - *center;
                let r = d.norm();
                if r == 0.0 {
                    return true;
                }
                let th = (d.angle() - theta0).rem_euclid(TAU);
                r < periodic_interp(g, th)
            }
            ShapeDomain::Graph { xs, phi, .. } => {
                let (&x_lo, &x_hi) = (xs.first().unwrap(), xs.last().unwrap());
                if p.x <= x_lo || p.x >= x_hi {
                    return false;
                }
                p.y.abs() < grid_interp(xs, phi, p.x)
            }
            ShapeDomain::BallUnion { balls } => {
                balls.iter().any(|b| p.dist(b.center) < b.radius)
            }
            ShapeDomain::DisjointPair { first, second, .. } => {
                first.contains_point(p) || second.contains_point(p)
            }
            ShapeDomain::Intervals1D { intervals } => {
                intervals.iter().any(|(a, b)| p.x > *a && p.x < *b)
            }
            ShapeDomain::ClosedCurve { loops, .. } => point_in_loops(p, loops),
        }
    }

    fn bbox(&self) -> Rect {
        match self {
            ShapeDomain::StarPolar { center, g, .. } => {
                let r = g.iter().cloned().fold(0.0f64, f64::max);
                Rect::around(*center, r)
            }
            ShapeDomain::Graph { xs, phi, .. } => {
                let h = phi.iter().cloned().fold(0.0f64, f64::max);
                Rect::new(
                    Vec2::new(*xs.first().unwrap(), -h),
                    Vec2::new(*xs.last().unwrap(), h),
                )
            }
            ShapeDomain::BallUnion { balls } => {
                let mut r = Rect::around(balls[0].center, balls[0].radius);
                for b in &balls[1..] {
                    r = r.union(Rect::around(b.center, b.radius));
                }
                r
            }
            ShapeDomain::DisjointPair { first, second, .. } => first.bbox().union(second.bbox()),
            ShapeDomain::Intervals1D { intervals } => {
                let lo = intervals.iter().map(|i| i.0).fold(f64::INFINITY, f64::min);
                let hi = intervals.iter().map(|i| i.1).fold(f64::NEG_INFINITY, f64::max);
                Rect::new(Vec2::new(lo, 0.0), Vec2::new(hi, 0.0))
            }
            ShapeDomain::ClosedCurve { loops, .. } => {
                Rect::from_points(loops.iter().flatten().copied()).unwrap()
            }
        }
    }

    fn boundary(&self, n: usize) -> Result<Vec<BoundarySample>, DomainError> {
        self.validate()?;
        let n = n.max(16);
        Ok(match self {
            ShapeDomain::StarPolar { center, theta0, g, dg } => {
                sample_star_polar(*center, *theta0, g, dg.as_deref(), n)
            }
            ShapeDomain::Graph { xs, phi, dphi } => sample_graph(xs, phi, dphi.as_deref(), n),
            ShapeDomain::BallUnion { balls } => sample_ball_union(balls, n),
            ShapeDomain::DisjointPair { first, second, .. } => {
                let mut s = first.boundary(n / 2)?;
                let shift = 1e6; // keep params of the two components apart
                s.extend(second.boundary(n / 2)?.into_iter().map(|mut b| {
                    b.param += shift;
                    b
                }));
                s
            }
            ShapeDomain::Intervals1D { intervals } => {
                let mut s = Vec::new();
                for (i, (a, b)) in intervals.iter().enumerate() {
                    s.push(BoundarySample::smooth_at(
                        Vec2::new(*a, 0.0),
                        Vec2::new(1.0, 0.0),
                        i as f64 * 2.0,
                    ));
                    s.push(BoundarySample::smooth_at(
                        Vec2::new(*b, 0.0),
                        Vec2::new(-1.0, 0.0),
                        i as f64 * 2.0 + 1.0,
                    ));
                }
                s
            }
            ShapeDomain::ClosedCurve { samples, .. } => {
                if samples.len() <= n {
                    samples.clone()
                } else {
                    let stride = samples.len() as f64 / n as f64;
                    (0..n).map(|k| samples[(k as f64 * stride) as usize].clone()).collect()
                }
            }
        })
    }
}

fn sample_star_polar(
    center: Point,
    theta0: f64,
    g: &[f64],
    dg: Option<&[f64]>,
    n: usize,
) -> Vec<BoundarySample> {
    let m = g.len();
    // Fall back to interpolant slopes when no analytic derivative is stored.
    let numeric_dg: Vec<f64>;
    let dg = match dg {
        Some(d) => d,
        None => {
            let h = TAU / m as f64;
            numeric_dg = (0..m)
                .map(|k| (g[(k + 1) % m] - g[(k + m - 1) % m]) / (2.0 * h))
                .collect();
            &numeric_dg
        }
    };
    (0..n)
        .map(|k| {
            let frac = k as f64 * m as f64 / n as f64;
            let idx = frac.floor() as usize % m;
            let t = frac - frac.floor();
            let gk = g[idx] * (1.0 - t) + g[(idx + 1) % m] * t;
            let dgk = dg[idx] * (1.0 - t) + dg[(idx + 1) % m] * t;
            let th = theta0 + TAU * frac / m as f64;
            let e_r = Vec2::dir(th);
            let e_t = e_r.perp();
            let point = center + e_r * gk;
            // Inward normal of a polar graph: (g' e_theta - g e_r) normalized.
            let nu = (e_t * dgk - e_r * gk).normalized();
            BoundarySample::smooth_at(point, nu, th)
        })
        .collect()
}

fn sample_graph(
    xs: &[f64],
    phi: &[f64],
    dphi: Option<&[Option<f64>]>,
    n: usize,
) -> Vec<BoundarySample> {
    let m = xs.len();
    let numeric: Vec<Option<f64>>;
    let dphi = match dphi {
        Some(d) => d,
        None => {
            numeric = (0..m)
                .map(|i| {
                    let (lo, hi) = (i.saturating_sub(1), (i + 1).min(m - 1));
                    Some((phi[hi] - phi[lo]) / (xs[hi] - xs[lo]))
                })
                .collect();
            &numeric
        }
    };
    // Upper-curve arc length per node, for spacing-aware node selection.
    let mut cum = vec![0.0f64];
    for i in 1..m {
        let d = Vec2::new(xs[i] - xs[i - 1], phi[i] - phi[i - 1]).norm();
        cum.push(cum[i - 1] + d);
    }
    let total = *cum.last().unwrap();
    let per_side = (n / 2).max(8);
    let mut picked: Vec<usize> = Vec::with_capacity(per_side);
    let mut next_target = 0.0;
    for i in 0..m {
        if cum[i] + 1e-15 >= next_target {
            // Skip nodes buried in a flat zero stretch: not boundary points.
            let left_flat = i == 0 || (phi[i - 1] == 0.0 && phi[i] == 0.0);
            let right_flat = i == m - 1 || (phi[i] == 0.0 && phi[i + 1] == 0.0);
            if !(phi[i] == 0.0 && left_flat && right_flat) {
                picked.push(i);
            }
            next_target += total / per_side as f64;
        }
    }
    let mut out = Vec::with_capacity(2 * picked.len() + 8);
    for &i in &picked {
        let p_up = Vec2::new(xs[i], phi[i]);
        let interior = i > 0 && i + 1 < m;
        match dphi[i] {
            Some(s) if phi[i] > 0.0 => {
                let den = (1.0 + s * s).sqrt();
                // Upper part: inward points downward.
                out.push(BoundarySample::smooth_at(p_up, Vec2::new(s, -1.0) / den, xs[i]));
                out.push(BoundarySample::smooth_at(
                    Vec2::new(xs[i], -phi[i]),
                    Vec2::new(s, 1.0) / den,
                    xs[i],
                ));
            }
            _ => {
                // Kinks, cusps (phi = 0 pinch points), and endpoints.
                out.push(BoundarySample::corner(p_up, xs[i]));
                if phi[i] > 0.0 && interior {
                    out.push(BoundarySample::corner(Vec2::new(xs[i], -phi[i]), xs[i]));
                }
            }
        }
    }
    // Vertical caps when the graph is open at an end.
    for (idx, inward_x) in [(0usize, 1.0f64), (m - 1, -1.0f64)] {
        if phi[idx] > DEFAULT_TOL {
            let caps = 4;
            for k in 0..caps {
                let y = phi[idx] * ((k as f64 + 0.5) / caps as f64 * 2.0 - 1.0);
                out.push(BoundarySample::smooth_at(
                    Vec2::new(xs[idx], y),
                    Vec2::new(inward_x, 0.0),
                    xs[idx],
                ));
            }
        }
    }
    out
}

fn sample_ball_union(balls: &[BallSpec], n: usize) -> Vec<BoundarySample> {
    let total_r: f64 = balls.iter().map(|b| b.radius).sum();
    let mut out = Vec::with_capacity(n + balls.len());
    for (bi, b) in balls.iter().enumerate() {
        let share = ((b.radius / total_r) * n as f64).ceil().max(8.0) as usize;
        for k in 0..share {
            let th = TAU * k as f64 / share as f64;
            let p = b.center + Vec2::dir(th) * b.radius;
            // Drop points strictly inside a sibling; flag tangency contacts.
            let mut interior = false;
            let mut contact = false;
            for (bj, o) in balls.iter().enumerate() {
                if bi == bj {
                    continue;
                }
                let d = p.dist(o.center);
                if d < o.radius - DEFAULT_TOL {
                    interior = true;
                    break;
                }
                if (d - o.radius).abs() <= DEFAULT_TOL {
                    contact = true;
                }
            }
            if interior {
                continue;
            }
            let param = bi as f64 * TAU + th;
            if contact {
                out.push(BoundarySample::corner(p, param));
            } else {
                out.push(BoundarySample::smooth_at(p, (b.center - p) / b.radius, param));
            }
        }
    }
    out
}

/// Minimum distance between boundary samples of two domains.
pub fn min_boundary_distance(
    a: &ShapeDomain,
    b: &ShapeDomain,
    n: usize,
) -> Result<f64, DomainError> {
    let sa = a.boundary(n)?;
    let sb = b.boundary(n)?;
    let mut best = f64::INFINITY;
    for p in &sa {
        for q in &sb {
            best = best.min(p.point.dist(q.point));
        }
    }
    Ok(best)
}

/// Periodic linear interpolation of uniform samples over `[0, 2*pi)`.
pub fn periodic_interp(vals: &[f64], t: f64) -> f64 {
    let m = vals.len();
    let u = t.rem_euclid(TAU) / TAU * m as f64;
    let i = (u.floor() as usize) % m;
    let frac = u - u.floor();
    vals[i] * (1.0 - frac) + vals[(i + 1) % m] * frac
}

/// Linear interpolation on a sorted grid, clamped at the ends.
pub fn grid_interp(xs: &[f64], vals: &[f64], x: f64) -> f64 {
    let m = xs.len();
    if x <= xs[0] {
        return vals[0];
    }
    if x >= xs[m - 1] {
        return vals[m - 1];
    }
    let mut i = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => i,
        Err(i) => i - 1,
    };
    if i >= m - 1 {
        i = m - 2;
    }
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    vals[i] * (1.0 - t) + vals[i + 1] * t
}

/// A domain clipped to an open patch ball, as used by the local classes.
pub struct ClippedDomain<'a> {
    pub base: &'a ShapeDomain,
    pub center: Point,
    pub radius: f64,
}

impl Region for ClippedDomain<'_> {
    fn contains_point(&self, p: Point) -> bool {
        p.dist(self.center) < self.radius && self.base.contains_point(p)
    }

    fn bbox(&self) -> Rect {
        let b = self.base.bbox();
        let c = Rect::around(self.center, self.radius);
        Rect::new(
            Vec2::new(b.lo.x.max(c.lo.x), b.lo.y.max(c.lo.y)),
            Vec2::new(b.hi.x.min(c.hi.x), b.hi.y.min(c.hi.y)),
        )
    }

    fn boundary(&self, n: usize) -> Result<Vec<BoundarySample>, DomainError> {
        // Base boundary restricted to the patch, plus the patch arc inside
        // the base (the cut the intersection introduces).
        let mut out: Vec<BoundarySample> = self
            .base
            .boundary(n)?
            .into_iter()
            .filter(|s| s.point.dist(self.center) < self.radius - DEFAULT_TOL)
            .collect();
        let arc_n = n.max(64);
        for k in 0..arc_n {
            let th = TAU * k as f64 / arc_n as f64;
            let p = self.center + Vec2::dir(th) * self.radius;
            if self.base.contains_point(p) {
                out.push(BoundarySample::smooth_at(p, Vec2::dir(th) * -1.0, th + 1e7));
            }
        }
        Ok(out)
    }
}
