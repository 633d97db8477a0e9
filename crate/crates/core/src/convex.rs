//! Convex reference bodies and the queries the normal-property checkers rely
//! on: metric projection, support function, outward boundary normals, and the
//! normal-cone membership test. Three variants are supported — ball, segment,
//! polytope — so the supremum in the cone test always has a closed form.

use crate::geom::{closest_on_segment, dist_to_segment, Point, Rect, Vec2, DEFAULT_TOL};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvexError {
    #[error("invalid convex body: {0}")]
    InvalidBody(String),
    #[error("point ({0:.6}, {1:.6}) is not on the boundary")]
    NotOnBoundary(f64, f64),
    #[error("outward normal is not unique at ({0:.6}, {1:.6})")]
    VertexSingularity(f64, f64),
}

/// A compact convex set in the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConvexBody {
    /// Closed ball; radius 0 is the degenerate point body.
    Ball { center: Point, radius: f64 },
    Segment { a: Point, b: Point },
    /// Strictly convex polygon, counterclockwise vertices.
    Polytope { vertices: Vec<Point> },
}

impl ConvexBody {
    pub fn ball(center: Point, radius: f64) -> Result<Self, ConvexError> {
        if !(radius >= 0.0) {
            return Err(ConvexError::InvalidBody(format!("ball radius {radius} < 0")));
        }
        Ok(ConvexBody::Ball { center, radius })
    }

    pub fn segment(a: Point, b: Point) -> Result<Self, ConvexError> {
        if a.dist(b) <= DEFAULT_TOL {
            return Err(ConvexError::InvalidBody("segment endpoints coincide".into()));
        }
        Ok(ConvexBody::Segment { a, b })
    }

    /// Vertices must be in strictly convex counterclockwise order.
    pub fn polytope(vertices: Vec<Point>) -> Result<Self, ConvexError> {
        if vertices.len() < 3 {
            return Err(ConvexError::InvalidBody(format!(
                "polytope needs >= 3 vertices, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) <= 0.0 {
                return Err(ConvexError::InvalidBody(format!(
                    "vertices not strictly convex counterclockwise near index {i}"
                )));
            }
        }
        Ok(ConvexBody::Polytope { vertices })
    }

    /// Convex hull of a point cloud, normalized to a `Polytope`
    /// (monotone chain; collinear points dropped).
    pub fn hull_of(points: &[Point]) -> Result<Self, ConvexError> {
        if points.len() < 3 {
            return Err(ConvexError::InvalidBody("hull needs >= 3 points".into()));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|p, q| p.x.partial_cmp(&q.x).unwrap().then(p.y.partial_cmp(&q.y).unwrap()));
        pts.dedup_by(|p, q| p.dist(*q) < 1e-12);
        let build = |iter: &mut dyn Iterator<Item = Point>| {
            let mut chain: Vec<Point> = Vec::new();
            for p in iter {
                while chain.len() >= 2 {
                    let a = chain[chain.len() - 2];
                    let b = chain[chain.len() - 1];
                    if (b - a).cross(p - b) <= 1e-12 {
                        chain.pop();
                    } else {
                        break;
                    }
                }
                chain.push(p);
            }
            chain
        };
        let mut lower = build(&mut pts.iter().copied());
        let mut upper = build(&mut pts.iter().rev().copied());
        lower.pop();
        upper.pop();
        lower.append(&mut upper);
        Self::polytope(lower)
    }

    pub fn validate(&self) -> Result<(), ConvexError> {
        match self {
            ConvexBody::Ball { center, radius } => Self::ball(*center, *radius).map(|_| ()),
            ConvexBody::Segment { a, b } => Self::segment(*a, *b).map(|_| ()),
            ConvexBody::Polytope { vertices } => Self::polytope(vertices.clone()).map(|_| ()),
        }
    }

    pub fn bounding_box(&self) -> Rect {
        match self {
            ConvexBody::Ball { center, radius } => Rect::around(*center, *radius),
            ConvexBody::Segment { a, b } => Rect::from_points([*a, *b]).unwrap(),
            ConvexBody::Polytope { vertices } => Rect::from_points(vertices.iter().copied()).unwrap(),
        }
    }

    /// Metric projection of `x` onto the body. Total on valid bodies; unique
    /// by convexity.
    pub fn project(&self, x: Point) -> Point {
        match self {
            ConvexBody::Ball { center, radius } => {
                let d = x - *center;
                let n = d.norm();
                if n <= *radius {
                    x
                } else {
                    *center + d * (*radius / n)
                }
            }
            ConvexBody::Segment { a, b } => closest_on_segment(x, *a, *b),
            ConvexBody::Polytope { vertices } => {
                if self.contains(x, 0.0) {
                    return x;
                }
                let n = vertices.len();
                let mut best = vertices[0];
                let mut best_d = f64::INFINITY;
                for i in 0..n {
                    let p = closest_on_segment(x, vertices[i], vertices[(i + 1) % n]);
                    let d = x.dist(p);
                    if d < best_d {
                        best_d = d;
                        best = p;
                    }
                }
                best
            }
        }
    }

    pub fn distance_to(&self, x: Point) -> f64 {
        x.dist(self.project(x))
    }

    /// Membership with absolute slack `tol` (negative `tol` shrinks).
    pub fn contains(&self, x: Point, tol: f64) -> bool {
        match self {
            ConvexBody::Ball { center, radius } => x.dist(*center) <= radius + tol,
            ConvexBody::Segment { a, b } => dist_to_segment(x, *a, *b) <= tol,
            ConvexBody::Polytope { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    // Inside is to the left of each CCW edge.
                    (b - a).cross(x - a) >= -tol * (b - a).norm()
                })
            }
        }
    }

    /// Support function `max_{c in C} dir . c`; `dir` must be unit.
    pub fn support(&self, dir: Vec2) -> f64 {
        debug_assert!(dir.is_unit(1e-12));
        match self {
            ConvexBody::Ball { center, radius } => dir.dot(*center) + radius,
            ConvexBody::Segment { a, b } => dir.dot(*a).max(dir.dot(*b)),
            ConvexBody::Polytope { vertices } => vertices
                .iter()
                .map(|v| dir.dot(*v))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// `sup_{c in C} (y - x).(c - x)` — the quantity defining the normal cone
    /// at apex `x`. Closed form per variant (linear in `c`).
    pub fn cone_sup(&self, x: Point, y: Point) -> f64 {
        let d = y - x;
        match self {
            ConvexBody::Ball { center, radius } => d.dot(*center - x) + radius * d.norm(),
            ConvexBody::Segment { a, b } => d.dot(*a - x).max(d.dot(*b - x)),
            ConvexBody::Polytope { vertices } => vertices
                .iter()
                .map(|v| d.dot(*v - x))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Whether `y` lies in the normal cone with apex `x`:
    /// `(y - x).(c - x) <= 0` for every `c in C`, up to `tol`.
    pub fn normal_cone_contains(&self, x: Point, y: Point, tol: f64) -> bool {
        self.cone_sup(x, y) <= tol
    }

    /// Outward unit normal at a boundary point. Errors where the normal is
    /// not unique (polytope vertices, segment points, degenerate balls).
    pub fn boundary_normal(&self, c: Point, tol: f64) -> Result<Vec2, ConvexError> {
        match self {
            ConvexBody::Ball { center, radius } => {
                if *radius <= tol {
                    return Err(ConvexError::VertexSingularity(c.x, c.y));
                }
                if (c.dist(*center) - radius).abs() > tol {
                    return Err(ConvexError::NotOnBoundary(c.x, c.y));
                }
                Ok((c - *center).normalized())
            }
            ConvexBody::Segment { a, b } => {
                if dist_to_segment(c, *a, *b) > tol {
                    return Err(ConvexError::NotOnBoundary(c.x, c.y));
                }
                // Both sides are outward; no canonical choice.
                Err(ConvexError::VertexSingularity(c.x, c.y))
            }
            ConvexBody::Polytope { vertices } => {
                let n = vertices.len();
                if vertices.iter().any(|v| v.dist(c) <= tol) {
                    return Err(ConvexError::VertexSingularity(c.x, c.y));
                }
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    if dist_to_segment(c, a, b) <= tol {
                        return Ok(-(b - a).perp().normalized());
                    }
                }
                Err(ConvexError::NotOnBoundary(c.x, c.y))
            }
        }
    }

    /// Boundary points with outward normals, grouped into smooth pieces.
    /// Each group is a maximal run along which adjacent-sample difference
    /// quotients are meaningful; `cyclic` marks closed runs. Balls give one
    /// cyclic group; segments one open group per side (endpoint caps are
    /// excluded); polytopes one cyclic face-ordered group (cross-vertex
    /// pairs carry the corner's normal jump).
    pub fn boundary_normal_groups(&self, n: usize) -> Vec<(Vec<(Point, Vec2)>, bool)> {
        let n = n.max(8);
        match self {
            ConvexBody::Ball { center, radius } => {
                if *radius == 0.0 {
                    return Vec::new();
                }
                let pts = (0..n)
                    .map(|k| {
                        let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                        let u = Vec2::dir(th);
                        (*center + u * *radius, u)
                    })
                    .collect();
                vec![(pts, true)]
            }
            ConvexBody::Segment { a, b } => {
                let side = (*b - *a).perp().normalized();
                let half = (n / 2).max(4);
                let sample_side = |nu: Vec2| -> Vec<(Point, Vec2)> {
                    (0..half)
                        .map(|k| {
                            // Offset into the open segment: endpoints excluded.
                            let t = (k as f64 + 0.5) / half as f64;
                            (a.lerp(*b, t), nu)
                        })
                        .collect()
                };
                vec![(sample_side(side), false), (sample_side(-side), false)]
            }
            ConvexBody::Polytope { vertices } => {
                let m = vertices.len();
                let lengths: Vec<f64> =
                    (0..m).map(|i| vertices[i].dist(vertices[(i + 1) % m])).collect();
                let total: f64 = lengths.iter().sum();
                let mut pts = Vec::with_capacity(n);
                for i in 0..m {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % m];
                    let nu = -(b - a).perp().normalized();
                    let k = ((lengths[i] / total) * n as f64).ceil().max(1.0) as usize;
                    for j in 0..k {
                        let t = (j as f64 + 0.5) / k as f64;
                        pts.push((a.lerp(b, t), nu));
                    }
                }
                vec![(pts, true)]
            }
        }
    }

    /// Flattened form of [`Self::boundary_normal_groups`] with the fraction
    /// of the boundary carrying normals.
    pub fn boundary_with_normals(&self, n: usize) -> (Vec<(Point, Vec2)>, f64) {
        let groups = self.boundary_normal_groups(n);
        let covered = if groups.is_empty() { 0.0 } else { 1.0 };
        (groups.into_iter().flat_map(|(g, _)| g).collect(), covered)
    }

    /// Dense boundary polyline (used for diameter and distance estimates).
    pub fn boundary_polyline(&self, n: usize) -> Vec<Point> {
        match self {
            ConvexBody::Ball { center, radius } => (0..n)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    *center + Vec2::dir(th) * *radius
                })
                .collect(),
            ConvexBody::Segment { a, b } => vec![*a, *b],
            ConvexBody::Polytope { vertices } => vertices.clone(),
        }
    }

    /// Scale every defining coordinate by `factor` about `center`.
    pub fn dilate(&self, factor: f64, center: Point) -> ConvexBody {
        let map = |p: Point| center + (p - center) * factor;
        match self {
            ConvexBody::Ball { center: c, radius } => ConvexBody::Ball {
                center: map(*c),
                radius: radius * factor,
            },
            ConvexBody::Segment { a, b } => ConvexBody::Segment { a: map(*a), b: map(*b) },
            ConvexBody::Polytope { vertices } => ConvexBody::Polytope {
                vertices: vertices.iter().map(|v| map(*v)).collect(),
            },
        }
    }
}

/// Unit square `[0,1]^2` used across tests and suites.
pub fn unit_square() -> ConvexBody {
    ConvexBody::polytope(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ])
    .unwrap()
}
