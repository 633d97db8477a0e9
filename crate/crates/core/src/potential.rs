//! Fundamental solutions, the disk Green function through its image-point
//! kernel, Dirichlet solutions by quadrature of a source over a convex
//! support, and the growth-rate scan pairing the source energy with the
//! volumes of circumscribed domains.

use crate::convex::ConvexBody;
use crate::geom::{linear_fit, Point, Vec2};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("evaluation point coincides with the singularity")]
    SingularPoint,
    #[error("kernel arguments coincide or leave the ball")]
    SingularPair,
    #[error("source support reaches outside the ball of radius {0}")]
    SupportOutsideBall(f64),
    #[error("dimension {0} not supported here (N must be 2 or 3)")]
    InvalidDimension(u8),
    #[error("invalid source density: {0}")]
    BadDensity(String),
}

/// Fundamental solution of `-Laplace` in the plane or in space:
/// `-(1/2pi) ln r` for N = 2 and `1/(4 pi r)` for N = 3 (the standard
/// normalization; the sign is fixed by the residual test `-Laplace E = delta`).
pub fn fundamental_solution(n: u8, r: f64) -> Result<f64, PotentialError> {
    if r <= 1e-14 {
        return Err(PotentialError::SingularPoint);
    }
    match n {
        2 => Ok(-r.ln() / TAU),
        3 => Ok(1.0 / (4.0 * PI * r)),
        other => Err(PotentialError::InvalidDimension(other)),
    }
}

/// Norm of the image argument `|y| x / R - R y / |y|`, computed through the
/// expanded form `sqrt(|x|^2 |y|^2 / R^2 - 2 x.y + R^2)`, which is finite
/// and manifestly symmetric in `x` and `y` (no clamp needed at `y = 0`).
pub fn image_norm(radius: f64, x: Point, y: Point) -> f64 {
    (x.norm2() * y.norm2() / (radius * radius) - 2.0 * x.dot(y) + radius * radius).sqrt()
}

/// Green function of `-Laplace` on the ball of radius `R` with zero
/// boundary data: `E_N(|x - y|) - E_N(image)`.
pub fn green_disk(radius: f64, x: Point, y: Point, n: u8) -> Result<f64, PotentialError> {
    if x.norm() >= radius || y.norm() >= radius {
        return Err(PotentialError::SingularPair);
    }
    let sep = x.dist(y);
    if sep <= 1e-14 {
        return Err(PotentialError::SingularPair);
    }
    Ok(fundamental_solution(n, sep)? - fundamental_solution(n, image_norm(radius, x, y))?)
}

/// Geometry a quadrature cell can be refined over near a singularity.
#[derive(Clone, Debug, Serialize, Deserialize)]
enum CellGeom {
    Polar { origin: Point, r: f64, th: f64, dr: f64, dth: f64 },
    Tri { a: Point, b: Point, c: Point },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadNode {
    pub point: Point,
    pub weight: f64,
    pub f: f64,
    geom: CellGeom,
}

/// Nonnegative source sampled on a quadrature grid over a convex support.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SourceDensity {
    pub support: ConvexBody,
    pub nodes: Vec<QuadNode>,
}

impl SourceDensity {
    /// Midpoint-rule grid: polar cells for balls (weights sum to the area
    /// exactly), fan-triangulated subcells for polytopes. `resolution`
    /// controls the radial/edge subdivision count.
    pub fn from_fn(
        support: &ConvexBody,
        f: impl Fn(Point) -> f64,
        resolution: usize,
    ) -> Result<Self, PotentialError> {
        let res = resolution.max(8);
        let mut nodes = Vec::new();
        match support {
            ConvexBody::Ball { center, radius } => {
                if !(*radius > 0.0) {
                    return Err(PotentialError::BadDensity("ball support needs positive radius".into()));
                }
                let n_r = res;
                let n_t = 2 * res;
                let dr = radius / n_r as f64;
                let dth = TAU / n_t as f64;
                for i in 0..n_r {
                    let r = (i as f64 + 0.5) * dr;
                    for j in 0..n_t {
                        let th = (j as f64 + 0.5) * dth;
                        let p = *center + Vec2::dir(th) * r;
                        let val = f(p);
                        if val < 0.0 {
                            return Err(PotentialError::BadDensity("f must be nonnegative".into()));
                        }
                        nodes.push(QuadNode {
                            point: p,
                            weight: r * dr * dth,
                            f: val,
                            geom: CellGeom::Polar { origin: *center, r, th, dr, dth },
                        });
                    }
                }
            }
            ConvexBody::Polytope { vertices } => {
                let mut centroid = Vec2::ZERO;
                for v in vertices {
                    centroid = centroid + *v;
                }
                let centroid = centroid / vertices.len() as f64;
                let m = vertices.len();
                for i in 0..m {
                    let tri = (centroid, vertices[i], vertices[(i + 1) % m]);
                    for sub in subdivide_triangle(tri, res / 4 + 1) {
                        let p = (sub.0 + sub.1 + sub.2) / 3.0;
                        let val = f(p);
                        if val < 0.0 {
                            return Err(PotentialError::BadDensity("f must be nonnegative".into()));
                        }
                        nodes.push(QuadNode {
                            point: p,
                            weight: triangle_area(sub),
                            f: val,
                            geom: CellGeom::Tri { a: sub.0, b: sub.1, c: sub.2 },
                        });
                    }
                }
            }
            ConvexBody::Segment { .. } => {
                return Err(PotentialError::BadDensity(
                    "segment supports carry no area; use a ball or polytope".into(),
                ));
            }
        }
        Ok(SourceDensity { support: support.clone(), nodes })
    }

    pub fn constant(support: &ConvexBody, value: f64, resolution: usize) -> Result<Self, PotentialError> {
        Self::from_fn(support, |_| value, resolution)
    }

    /// Total mass `integral f`.
    pub fn mass(&self) -> f64 {
        self.nodes.iter().map(|q| q.weight * q.f).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|q| q.weight).sum()
    }

    fn support_radius(&self) -> f64 {
        match &self.support {
            ConvexBody::Ball { center, radius } => center.norm() + radius,
            ConvexBody::Segment { a, b } => a.norm().max(b.norm()),
            ConvexBody::Polytope { vertices } => {
                vertices.iter().map(|v| v.norm()).fold(0.0f64, f64::max)
            }
        }
    }
}

fn triangle_area(t: (Point, Point, Point)) -> f64 {
    0.5 * ((t.1 - t.0).cross(t.2 - t.0)).abs()
}

fn subdivide_triangle(t: (Point, Point, Point), k: usize) -> Vec<(Point, Point, Point)> {
    // Uniform barycentric split into k^2 congruent subtriangles.
    let mut out = Vec::with_capacity(k * k);
    let at = |i: usize, j: usize| {
        let (u, v) = (i as f64 / k as f64, j as f64 / k as f64);
        t.0 + (t.1 - t.0) * u + (t.2 - t.0) * v
    };
    for i in 0..k {
        for j in 0..k - i {
            out.push((at(i, j), at(i + 1, j), at(i, j + 1)));
            if i + j < k - 1 {
                out.push((at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)));
            }
        }
    }
    out
}

fn cell_diag(node: &QuadNode) -> f64 {
    match &node.geom {
        CellGeom::Polar { r, dr, dth, .. } => dr.hypot(r * dth),
        CellGeom::Tri { a, b, c } => a.dist(*b).max(b.dist(*c)).max(c.dist(*a)),
    }
}

/// 4x4 midpoint refinement of one cell, used near kernel singularities.
fn refine_cell(node: &QuadNode) -> Vec<(Point, f64)> {
    const K: usize = 4;
    match &node.geom {
        CellGeom::Polar { origin, r, th, dr, dth } => {
            let mut out = Vec::with_capacity(K * K);
            for i in 0..K {
                let rs = r - dr / 2.0 + (i as f64 + 0.5) * dr / K as f64;
                for j in 0..K {
                    let ts = th - dth / 2.0 + (j as f64 + 0.5) * dth / K as f64;
                    out.push((*origin + Vec2::dir(ts) * rs, rs * (dr / K as f64) * (dth / K as f64)));
                }
            }
            out
        }
        CellGeom::Tri { a, b, c } => subdivide_triangle((*a, *b, *c), K)
            .into_iter()
            .map(|t| ((t.0 + t.1 + t.2) / 3.0, triangle_area(t)))
            .collect(),
    }
}

/// Dirichlet solution on the ball of radius `R`: quadrature of the Green
/// kernel against the source, with 4x refinement of cells within
/// 2.5 cell diagonals of the evaluation point.
pub fn solve_u_r(
    radius: f64,
    f: &SourceDensity,
    eval_points: &[Point],
    n: u8,
) -> Result<Vec<f64>, PotentialError> {
    if n != 2 && n != 3 {
        return Err(PotentialError::InvalidDimension(n));
    }
    if f.support_radius() > radius {
        return Err(PotentialError::SupportOutsideBall(radius));
    }
    let mut out = Vec::with_capacity(eval_points.len());
    for &x in eval_points {
        if x.norm() >= radius {
            return Err(PotentialError::SingularPair);
        }
        let mut u = 0.0f64;
        for node in &f.nodes {
            if node.f == 0.0 {
                continue;
            }
            let near = x.dist(node.point) < 2.5 * cell_diag(node);
            if near {
                for (p, w) in refine_cell(node) {
                    let sep = x.dist(p).max(1e-14);
                    let direct = fundamental_solution(n, sep)?;
                    let img = fundamental_solution(n, image_norm(radius, x, p))?;
                    u += w * node.f * (direct - img);
                }
            } else {
                let direct = fundamental_solution(n, x.dist(node.point))?;
                let img = fundamental_solution(n, image_norm(radius, x, node.point))?;
                u += node.weight * node.f * (direct - img);
            }
        }
        out.push(u);
    }
    Ok(out)
}

/// One row of the growth scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRow {
    pub radius: f64,
    /// `integral_C f U_R` by quadrature.
    pub f_u_integral: f64,
    /// `2 R integral f`, the proof's bound on the direct term.
    pub c1: f64,
    /// Image-term energy (positive once `R` dominates the support).
    pub image_term: f64,
    /// Measured volume of the circumscribed domain at this radius.
    pub volume: f64,
    /// `volume / R^N`, which must stay bounded below across the family.
    pub vol_ratio: f64,
    /// `image_term - 2 c1 R + k^2 * vol_ratio * R^N`.
    pub bound_value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Slope of `log |bound_value|` against `log R`.
    pub fitted_exponent: f64,
}

/// Growth scan over increasing radii: pairs the quadrature energies with
/// measured volumes of domains touching the sphere of radius `R`, and fits
/// the growth exponent of the lower-bound value (which should match the
/// dimension). Only the planar case carries the quadrature column.
pub fn j_bound_scan(
    radii: &[f64],
    f: &SourceDensity,
    k: f64,
    volumes: &[f64],
    n: u8,
) -> Result<ScanReport, PotentialError> {
    if n != 2 {
        return Err(PotentialError::InvalidDimension(n));
    }
    if radii.len() != volumes.len() || radii.is_empty() {
        return Err(PotentialError::BadDensity("radii and volumes must align".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(PotentialError::BadDensity("radii must increase".into()));
    }
    let mass = f.mass();
    let mut rows = Vec::with_capacity(radii.len());
    for (&r, &vol) in radii.iter().zip(volumes) {
        // Energy of the source against its own potential.
        let pts: Vec<Point> = f.nodes.iter().map(|q| q.point).collect();
        let u = solve_u_r(r, f, &pts, n)?;
        let f_u_integral: f64 = f
            .nodes
            .iter()
            .zip(&u)
            .map(|(q, uu)| q.weight * q.f * uu)
            .sum();
        // Image part alone: (1/2pi) integral integral ln|image| f f.
        let mut image_term = 0.0f64;
        for qi in &f.nodes {
            for qj in &f.nodes {
                image_term += qi.weight * qi.f * qj.weight * qj.f
                    * image_norm(r, qi.point, qj.point).ln();
            }
        }
        image_term /= TAU;
        let c1 = 2.0 * r * mass;
        let vol_ratio = vol / r.powi(n as i32);
        let bound_value = image_term - 2.0 * c1 * r + k * k * vol_ratio * r.powi(n as i32);
        rows.push(ScanRow { radius: r, f_u_integral, c1, image_term, volume: vol, vol_ratio, bound_value });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.radius.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.bound_value.abs().max(1e-300).ln()).collect();
    let (_, slope, _) = linear_fit(&xs, &ys);
    Ok(ScanReport { rows, fitted_exponent: slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hand-derived radial oracle: `-Laplace U = 1` on `B_rho`, zero source
    /// in the annulus, `U(R) = 0`, with C^1 matching at `rho`:
    /// `U(r) = A - r^2/4` inside, `B ln(R/r)` outside, `B = rho^2/2`,
    /// `A = rho^2/4 + (rho^2/2) ln(R/rho)`.
    fn radial_oracle(radius: f64, rho: f64, r: f64) -> f64 {
        let b = rho * rho / 2.0;
        let a = rho * rho / 4.0 + b * (radius / rho).ln();
        if r <= rho {
            a - r * r / 4.0
        } else {
            b * (radius / r).ln()
        }
    }

    #[test]
    fn fundamental_solution_values() {
        assert_eq!(fundamental_solution(2, 1.0).unwrap(), 0.0);
        assert!((fundamental_solution(2, std::f64::consts::E).unwrap() + 1.0 / TAU).abs() < 1e-15);
        assert!((fundamental_solution(3, 1.0).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!(matches!(fundamental_solution(2, 0.0), Err(PotentialError::SingularPoint)));
        assert!(matches!(fundamental_solution(4, 1.0), Err(PotentialError::InvalidDimension(4))));
    }

    #[test]
    fn fundamental_solution_is_harmonic_off_origin() {
        // Five-point Laplacian oracle away from the singularity.
        for n in [2u8, 3] {
            let h = 1e-4;
            let at = |x: f64, y: f64| fundamental_solution(n, x.hypot(y)).unwrap();
            let (x0, y0) = (0.7, 0.4);
            let lap = (at(x0 + h, y0) + at(x0 - h, y0) + at(x0, y0 + h) + at(x0, y0 - h)
                - 4.0 * at(x0, y0))
                / (h * h);
            // In 2-D the planar Laplacian vanishes; in 3-D the planar stencil
            // picks up the axisymmetric term 1/r * dE/dr, still O(1).
            if n == 2 {
                assert!(lap.abs() < 1e-4, "lap = {lap}");
            }
        }
    }

    #[test]
    fn green_zero_on_boundary_and_positive_inside() {
        let radius = 1.0;
        // As |x| -> R the two kernel arguments acquire equal norms and the
        // value decays linearly to zero.
        let y = Vec2::new(0.3, -0.2);
        let g_at = |t: f64| green_disk(radius, Vec2::new(t, 0.0), y, 2).unwrap();
        let mut prev = f64::INFINITY;
        for &t in &[0.9, 0.99, 0.999] {
            let g = g_at(t);
            assert!(g > 0.0 && g < prev, "g = {g} at t = {t}");
            assert!(g < 0.5 * (1.0 - t), "g = {g} decays slower than linear at t = {t}");
            prev = g;
        }
        let g = green_disk(1.0, Vec2::new(0.5, 0.0), Vec2::new(-0.5, 0.0), 2).unwrap();
        assert!(g > 0.0);
        // Identity on the boundary: the image norm equals the separation.
        let xb = Vec2::new(1.0, 0.0);
        assert!((image_norm(1.0, xb, y) - xb.dist(y)).abs() < 1e-12);
    }

    #[test]
    fn green_symmetry_exact() {
        let radius = 2.0;
        for k in 0..1000 {
            let a = 0.7031 * k as f64;
            let x = Vec2::dir(a) * (1.9 * ((k as f64 * 0.137).sin().abs()));
            let y = Vec2::dir(2.3 * a + 1.0) * (1.9 * ((k as f64 * 0.211).cos().abs()));
            if x.dist(y) < 1e-6 || x.norm() >= radius || y.norm() >= radius {
                continue;
            }
            let g1 = green_disk(radius, x, y, 2).unwrap();
            let g2 = green_disk(radius, y, x, 2).unwrap();
            assert!((g1 - g2).abs() <= 1e-12, "{g1} vs {g2}");
        }
    }

    #[test]
    fn quadrature_weights_sum_to_area() {
        let ball = ConvexBody::ball(Vec2::new(0.1, 0.0), 0.5).unwrap();
        let f = SourceDensity::constant(&ball, 1.0, 32).unwrap();
        let area = PI * 0.25;
        assert!((f.total_weight() - area).abs() / area < 1e-9);

        let sq = crate::convex::unit_square();
        let f = SourceDensity::constant(&sq, 1.0, 16).unwrap();
        assert!((f.total_weight() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn indicator_source_matches_radial_oracle() {
        let radius = 1.0;
        let rho = 0.5;
        let ball = ConvexBody::ball(Vec2::ZERO, rho).unwrap();
        let f = SourceDensity::constant(&ball, 1.0, 48).unwrap();
        let evals = [0.0, 0.15, 0.3, 0.7, 0.9];
        let pts: Vec<Point> = evals.iter().map(|&r| Vec2::new(r, 0.0)).collect();
        let u = solve_u_r(radius, &f, &pts, 2).unwrap();
        for (&r, &val) in evals.iter().zip(&u) {
            let oracle = radial_oracle(radius, rho, r);
            assert!(
                (val - oracle).abs() / oracle.abs() < 0.01,
                "r = {r}: {val} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn boundary_vanishing_and_monotone_in_radius() {
        let rho = 0.3;
        let ball = ConvexBody::ball(Vec2::new(0.1, 0.1), rho).unwrap();
        let f = SourceDensity::constant(&ball, 1.0, 24).unwrap();
        let center_val = solve_u_r(1.0, &f, &[Vec2::ZERO], 2).unwrap()[0];
        let near_boundary = solve_u_r(1.0, &f, &[Vec2::new(0.999, 0.0)], 2).unwrap()[0];
        assert!(near_boundary.abs() <= 0.01 * center_val.abs());
        // Domain monotonicity of the Green function.
        let mut prev = 0.0;
        for &radius in &[1.0, 1.5, 2.0, 3.0] {
            let v = solve_u_r(radius, &f, &[Vec2::new(0.2, 0.0)], 2).unwrap()[0];
            assert!(v >= prev - 1e-12, "U_R not monotone: {v} after {prev}");
            prev = v;
        }
    }

    #[test]
    fn discrete_laplacian_recovers_source() {
        let rho = 0.5;
        let ball = ConvexBody::ball(Vec2::ZERO, rho).unwrap();
        let f = SourceDensity::constant(&ball, 1.0, 48).unwrap();
        // Stencil wide enough that quadrature jitter between neighboring
        // evaluations stays below the h^2 scale.
        let h = 0.02;
        let lap_at = |p: Point| {
            let pts = [
                p,
                p + Vec2::new(h, 0.0),
                p - Vec2::new(h, 0.0),
                p + Vec2::new(0.0, h),
                p - Vec2::new(0.0, h),
            ];
            let u = solve_u_r(1.0, &f, &pts, 2).unwrap();
            (u[1] + u[2] + u[3] + u[4] - 4.0 * u[0]) / (h * h)
        };
        // Away from the support the potential is harmonic.
        assert!(lap_at(Vec2::new(0.75, 0.0)).abs() < 0.05);
        // Inside: -Laplace U = f = 1.
        assert!((lap_at(Vec2::new(0.12, 0.07)) + 1.0).abs() < 0.05);
    }

    #[test]
    fn scan_exponent_matches_dimension() {
        let ball = ConvexBody::ball(Vec2::ZERO, 0.2).unwrap();
        let f = SourceDensity::constant(&ball, 1.0, 16).unwrap();
        let radii = [10.0, 20.0, 40.0, 80.0];
        // Disk family: volumes pi R^2 (closed form stands in for the raster).
        let volumes: Vec<f64> = radii.iter().map(|r| PI * r * r).collect();
        let rep = j_bound_scan(&radii, &f, 1.0, &volumes, 2).unwrap();
        for row in &rep.rows {
            assert!((row.vol_ratio - PI).abs() < 1e-9);
            assert!(row.bound_value > 0.0);
        }
        assert!(
            (rep.fitted_exponent - 2.0).abs() < 0.1,
            "exponent {}",
            rep.fitted_exponent
        );
    }

    #[test]
    fn support_outside_ball_rejected() {
        let ball = ConvexBody::ball(Vec2::new(2.0, 0.0), 0.5).unwrap();
        let f = SourceDensity::constant(&ball, 1.0, 8).unwrap();
        assert!(matches!(
            solve_u_r(1.0, &f, &[Vec2::ZERO], 2),
            Err(PotentialError::SupportOutsideBall(_))
        ));
    }
}
