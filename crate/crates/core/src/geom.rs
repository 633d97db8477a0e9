//! Planar primitives shared by every module: points/vectors, boxes,
//! segment and ray distance kernels, and the even-odd polygon test.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Default absolute geometric tolerance, in domain length units.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point or vector in the plane. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 2]", from = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub type Point = Vec2;

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2 { x: a[0], y: a[1] }
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at angle `theta` from the positive x-axis.
    pub fn dir(theta: f64) -> Self {
        Vec2::new(theta.cos(), theta.sin())
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// 2-D cross product (signed parallelogram area).
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn rotate(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_unit(self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub lo: Point,
    pub hi: Point,
}

impl Rect {
    pub fn new(lo: Point, hi: Point) -> Self {
        Rect { lo, hi }
    }

    pub fn around(center: Point, half: f64) -> Self {
        let h = Vec2::new(half, half);
        Rect { lo: center - h, hi: center + h }
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(pts: I) -> Option<Self> {
        let mut it = pts.into_iter();
        let first = it.next()?;
        let mut r = Rect { lo: first, hi: first };
        for p in it {
            r.include(p);
        }
        Some(r)
    }

    pub fn include(&mut self, p: Point) {
        self.lo.x = self.lo.x.min(p.x);
        self.lo.y = self.lo.y.min(p.y);
        self.hi.x = self.hi.x.max(p.x);
        self.hi.y = self.hi.y.max(p.y);
    }

    pub fn union(self, o: Rect) -> Rect {
        let mut r = self;
        r.include(o.lo);
        r.include(o.hi);
        r
    }

    pub fn pad(self, m: f64) -> Rect {
        let d = Vec2::new(m, m);
        Rect { lo: self.lo - d, hi: self.hi + d }
    }

    pub fn center(self) -> Point {
        (self.lo + self.hi) * 0.5
    }

    pub fn width(self) -> f64 {
        self.hi.x - self.lo.x
    }

    pub fn height(self) -> f64 {
        self.hi.y - self.lo.y
    }

    pub fn diagonal(self) -> f64 {
        (self.hi - self.lo).norm()
    }

    pub fn contains(self, p: Point) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }
}

/// Nearest point to `p` on segment `[a, b]`.
pub fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let ab = b - a;
    let l2 = ab.norm2();
    if l2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / l2).clamp(0.0, 1.0);
    a + ab * t
}

pub fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    p.dist(closest_on_segment(p, a, b))
}

/// Nearest point to `p` on the ray `origin + t*dir`, `t >= 0` (`dir` need not be unit).
pub fn closest_on_ray(p: Point, origin: Point, dir: Vec2) -> Point {
    let l2 = dir.norm2();
    if l2 == 0.0 {
        return origin;
    }
    let t = ((p - origin).dot(dir) / l2).max(0.0);
    origin + dir * t
}

pub fn dist_to_ray(p: Point, origin: Point, dir: Vec2) -> f64 {
    p.dist(closest_on_ray(p, origin, dir))
}

/// Even-odd crossing test against one closed polyline (implicitly closed).
/// Robust to self-intersecting loops; points on the boundary are unspecified.
pub fn point_in_loop(p: Point, loop_pts: &[Point]) -> bool {
    let mut inside = false;
    let n = loop_pts.len();
    for i in 0..n {
        let a = loop_pts[i];
        let b = loop_pts[(i + 1) % n];
        if (b.y > p.y) != (a.y > p.y) {
            let x_cross = (a.x - b.x) * (p.y - b.y) / (a.y - b.y) + b.x;
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// Even-odd over a set of loops (XOR of the per-loop parities).
pub fn point_in_loops(p: Point, loops: &[Vec<Point>]) -> bool {
    let mut inside = false;
    for lp in loops {
        if point_in_loop(p, lp) {
            inside = !inside;
        }
    }
    inside
}

/// Total length of an open polyline.
pub fn polyline_length(pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Least-squares fit of `y = a + b*x`; returns `(a, b, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (a, b, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_projection_clamps_to_endpoints() {
        let a = Vec2::new(0.0, 0.0);
        let b = Vec2::new(1.0, 0.0);
        assert_eq!(closest_on_segment(Vec2::new(2.0, 1.0), a, b), b);
        assert_eq!(closest_on_segment(Vec2::new(-1.0, 1.0), a, b), a);
        let m = closest_on_segment(Vec2::new(0.5, 3.0), a, b);
        assert!((m.x - 0.5).abs() < 1e-15 && m.y == 0.0);
    }

    #[test]
    fn ray_distance_behind_origin() {
        // Point behind the ray origin measures to the origin itself.
        let d = dist_to_ray(Vec2::new(-1.0, 0.0), Vec2::ZERO, Vec2::new(1.0, 0.0));
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn even_odd_square() {
        let sq = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(point_in_loop(Vec2::new(0.5, 0.5), &sq));
        assert!(!point_in_loop(Vec2::new(1.5, 0.5), &sq));
    }

    #[test]
    fn fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let (a, b, r2) = linear_fit(&xs, &ys);
        assert!((a - 1.0).abs() < 1e-12);
        assert!((b - 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
