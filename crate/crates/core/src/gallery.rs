//! Named example domains used throughout the checkers and suites: the
//! circle-involute region, the cusp chain, the divergent triangle comb,
//! tangent two-disk candidates, offsets of convex bodies, shrinking pairs,
//! and the 1-D interval counterexample sequence.

use crate::convex::ConvexBody;
use crate::domain::{BallSpec, BoundarySample, ShapeDomain};
use crate::geom::{Point, Vec2};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalleryError {
    #[error("unknown gallery name: {0}")]
    UnknownGallery(String),
    #[error("parameter {0} must be positive")]
    NonPositiveParam(&'static str),
    #[error("gallery construction failed: {0}")]
    Construction(String),
}

fn build_err(e: impl std::fmt::Display) -> GalleryError {
    GalleryError::Construction(e.to_string())
}

/// Disk of radius `r` about the origin as a star-polar domain.
pub fn star_circle(r: f64, n_theta: usize) -> Result<ShapeDomain, GalleryError> {
    if !(r > 0.0) {
        return Err(GalleryError::NonPositiveParam("radius"));
    }
    ShapeDomain::star_polar(Vec2::ZERO, 0.0, vec![r; n_theta.max(16)], Some(vec![0.0; n_theta.max(16)]))
        .map_err(build_err)
}

/// Star-polar domain `g(theta) = base + amp*cos(theta)` with analytic slopes.
pub fn star_polar_cosine(base: f64, amp: f64, n_theta: usize) -> Result<ShapeDomain, GalleryError> {
    if !(base > amp.abs()) {
        return Err(GalleryError::NonPositiveParam("base - |amp|"));
    }
    let n = n_theta.max(16);
    let g = (0..n).map(|k| base + amp * (TAU * k as f64 / n as f64).cos()).collect();
    let dg = (0..n).map(|k| -amp * (TAU * k as f64 / n as f64).sin()).collect();
    ShapeDomain::star_polar(Vec2::ZERO, 0.0, g, Some(dg)).map_err(build_err)
}

/// Chain of tangent balls `B(3/2^(n+1), 1/2^(n+1))`, n = 1..=n_max, whose
/// union has cusps at the points `(1/2^n, 0)`.
pub fn cusp_chain(n_max: usize) -> Result<ShapeDomain, GalleryError> {
    if n_max == 0 {
        return Err(GalleryError::NonPositiveParam("n_max"));
    }
    let balls = (1..=n_max)
        .map(|n| {
            let s = 2f64.powi(-(n as i32 + 1));
            BallSpec { center: Vec2::new(3.0 * s, 0.0), radius: s }
        })
        .collect();
    ShapeDomain::ball_union(balls).map_err(build_err)
}

/// Height of the n-th comb triangle.
pub fn comb_height(n: usize) -> f64 {
    let nf = n as f64;
    ((1.0 - 1.0 / nf) / (2.0 * nf * (nf + 1.0))).sqrt()
}

/// Slant length of one side of the n-th comb triangle.
pub fn comb_slant(n: usize) -> f64 {
    let nf = n as f64;
    let half_base = 0.5 / (nf * (nf + 1.0));
    (comb_height(n).powi(2) + half_base * half_base).sqrt()
}

/// Upper-boundary length of the comb truncated at `n_max` (both slants of
/// every triangle; the n = 1 triangle is flat and contributes its base).
pub fn comb_partial_perimeter(n_max: usize) -> f64 {
    (1..=n_max).map(|n| 2.0 * comb_slant(n)).sum()
}

/// Union of mirrored triangles with bases `[1/(n+1), 1/n]` and heights
/// `comb_height(n)`; its perimeter diverges like `log(n_max)`. The grid is
/// exact: four nodes per triangle (valley, mid-rise, apex, mid-fall), so
/// sampled slopes are the true edge slopes.
pub fn triangle_comb(n_max: usize) -> Result<ShapeDomain, GalleryError> {
    if n_max < 2 {
        return Err(GalleryError::NonPositiveParam("n_max (needs >= 2)"));
    }
    let mut xs: Vec<f64> = Vec::with_capacity(4 * n_max + 2);
    let mut phi: Vec<f64> = Vec::with_capacity(4 * n_max + 2);
    let mut dphi: Vec<Option<f64>> = Vec::with_capacity(4 * n_max + 2);
    let mut push = |x: f64, p: f64, d: Option<f64>| {
        xs.push(x);
        phi.push(p);
        dphi.push(d);
    };
    // Left end of the truncated comb.
    push(1.0 / (n_max as f64 + 1.0), 0.0, None);
    for n in (1..=n_max).rev() {
        let nf = n as f64;
        let left = 1.0 / (nf + 1.0);
        let right = 1.0 / nf;
        let mid = 0.5 * (left + right);
        let a = comb_height(n);
        let slope = 2.0 * nf * (nf + 1.0) * a;
        if a == 0.0 {
            // The n = 1 triangle is flat; close the grid at its right end.
            push(right, 0.0, None);
            continue;
        }
        push(0.5 * (left + mid), a / 2.0, Some(slope));
        push(mid, a, None);
        push(0.5 * (mid + right), a / 2.0, Some(-slope));
        push(right, 0.0, None);
    }
    ShapeDomain::graph(xs, phi, Some(dphi)).map_err(build_err)
}

/// The two tangent disks of radius `r` centered at `(-1, r)` and `(1, r)` —
/// the candidate extremal shape for constrained perimeter minimization.
pub fn two_disk(r: f64) -> Result<ShapeDomain, GalleryError> {
    if !(r > 0.0) {
        return Err(GalleryError::NonPositiveParam("radius"));
    }
    ShapeDomain::ball_union(vec![
        BallSpec { center: Vec2::new(-1.0, r), radius: r },
        BallSpec { center: Vec2::new(1.0, r), radius: r },
    ])
    .map_err(build_err)
}

/// Open `d`-neighborhood of a convex body, star-sampled about its centroid.
pub fn offset_of_convex(c: &ConvexBody, d: f64, n_theta: usize) -> Result<ShapeDomain, GalleryError> {
    if !(d > 0.0) {
        return Err(GalleryError::NonPositiveParam("offset"));
    }
    let center = match c {
        ConvexBody::Ball { center, .. } => *center,
        ConvexBody::Segment { a, b } => (*a + *b) * 0.5,
        ConvexBody::Polytope { vertices } => {
            let mut s = Vec2::ZERO;
            for v in vertices {
                s = s + *v;
            }
            s / vertices.len() as f64
        }
    };
    let reach = c.bounding_box().diagonal() + d + 1.0;
    let n = n_theta.max(64);
    let g = (0..n)
        .map(|k| {
            let u = Vec2::dir(TAU * k as f64 / n as f64);
            // First exit of rho -> dist(center + rho*u, C) - d; the distance
            // to a convex set is convex along the ray, so bisection is safe.
            let f = |rho: f64| c.distance_to(center + u * rho) - d;
            let (mut lo, mut hi) = (0.0, reach);
            debug_assert!(f(hi) > 0.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if f(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    ShapeDomain::star_polar(center, 0.0, g, None).map_err(build_err)
}

/// The non-compactness pair: `B(O, 1 - 1/n)` and `B((2,0), 1 - 1/n)`,
/// whose separation `2/n` vanishes while the limit closures touch.
pub fn shrinking_pair(n: usize) -> Result<ShapeDomain, GalleryError> {
    if n < 2 {
        return Err(GalleryError::NonPositiveParam("n (needs >= 2)"));
    }
    let r = 1.0 - 1.0 / n as f64;
    let first = ShapeDomain::ball_union(vec![BallSpec { center: Vec2::ZERO, radius: r }])
        .map_err(build_err)?;
    let second =
        ShapeDomain::ball_union(vec![BallSpec { center: Vec2::new(2.0, 0.0), radius: r }])
            .map_err(build_err)?;
    ShapeDomain::disjoint_pair(first, second, 2.0 / n as f64).map_err(build_err)
}

/// The boundary-convergence counterexample `]-1/n, 1/n[ U ]1, 2[`.
pub fn remark222_intervals(n: usize) -> Result<ShapeDomain, GalleryError> {
    if n == 0 {
        return Err(GalleryError::NonPositiveParam("n"));
    }
    let e = 1.0 / n as f64;
    ShapeDomain::intervals_1d(vec![(-e, e), (1.0, 2.0)]).map_err(build_err)
}

/// Parameter at which the circle involute meets its mirror image on the
/// negative x-axis: the root of `t - arctan t = pi`.
pub fn involute_crossing_param() -> f64 {
    let mut t = 4.5f64;
    for _ in 0..60 {
        let f = t - t.atan() - std::f64::consts::PI;
        let df = 1.0 - 1.0 / (1.0 + t * t);
        t -= f / df;
    }
    t
}

/// Region enclosed by the circle involute `(cos t + t sin t, sin t - t cos t)`
/// and its mirror image, traced from the cusp at `(1, 0)` to their crossing
/// on the negative x-axis. Every inward normal from a smooth point runs to
/// its tangent point on the unit circle, so the region grazes `B(O,1)`
/// exactly (zero ray clearance).
pub fn involute(n_per_curve: usize) -> Result<ShapeDomain, GalleryError> {
    let n = n_per_curve.max(64);
    let t_star = involute_crossing_param();
    let p1 = |t: f64| Vec2::new(t.cos() + t * t.sin(), t.sin() - t * t.cos());
    let mut lp: Vec<Point> = Vec::with_capacity(2 * n);
    let mut samples: Vec<BoundarySample> = Vec::with_capacity(2 * n);
    // Upper arc from the cusp to the crossing.
    for k in 0..=n {
        let t = t_star * k as f64 / n as f64;
        let pt = p1(t);
        lp.push(pt);
        if k == 0 || k == n {
            // Cusp at (1,0); transversal corner at the crossing.
            samples.push(BoundarySample::corner(pt, t));
        } else {
            // Inward normal runs to the tangent point on the unit circle.
            let nu = Vec2::new(-t.sin(), t.cos());
            samples.push(BoundarySample::smooth_at(pt, nu, t));
        }
    }
    // Mirror arc back from the crossing to the cusp (corner and cusp points
    // already emitted above).
    for k in (1..n).rev() {
        let t = t_star * k as f64 / n as f64;
        let q = p1(t);
        let pt = Vec2::new(q.x, -q.y);
        lp.push(pt);
        let nu = Vec2::new(-t.sin(), -t.cos());
        samples.push(BoundarySample::smooth_at(pt, nu, TAU - t));
    }
    ShapeDomain::closed_curve(vec![lp], samples).map_err(build_err)
}

/// Construct a gallery domain by name with `key=value` parameters.
/// Recognized names: `involute`, `cusp_chain(n_max)`, `triangle_comb(n_max)`,
/// `two_disk(r)`, `star_circle(radius)`, `shrinking_pair(n)`,
/// `remark222_intervals(n)`. Offsets of convex bodies take the body
/// separately via [`offset_of_convex`].
pub fn make_gallery(name: &str, params: &[(String, f64)]) -> Result<ShapeDomain, GalleryError> {
    let get = |key: &str, default: Option<f64>| -> Result<f64, GalleryError> {
        params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .or(default)
            .ok_or(GalleryError::Construction(format!("missing parameter {key}")))
    };
    match name {
        "involute" => involute(get("n", Some(1024.0))? as usize),
        "cusp_chain" => cusp_chain(get("n_max", Some(6.0))? as usize),
        "triangle_comb" => triangle_comb(get("n_max", Some(100.0))? as usize),
        "two_disk" => two_disk(get("r", Some(1.0))?),
        "star_circle" => star_circle(get("radius", Some(1.0))?, get("n", Some(512.0))? as usize),
        "shrinking_pair" => shrinking_pair(get("n", Some(10.0))? as usize),
        "remark222_intervals" => remark222_intervals(get("n", Some(100.0))? as usize),
        other => Err(GalleryError::UnknownGallery(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Region;
    use crate::geom::linear_fit;

    #[test]
    fn cusp_chain_three_balls() {
        let d = cusp_chain(3).unwrap();
        match &d {
            ShapeDomain::BallUnion { balls } => {
                assert_eq!(balls.len(), 3);
                let expect = [
                    (Vec2::new(0.75, 0.0), 0.25),
                    (Vec2::new(0.375, 0.0), 0.125),
                    (Vec2::new(0.1875, 0.0), 0.0625),
                ];
                for (b, (c, r)) in balls.iter().zip(expect) {
                    assert!(b.center.dist(c) < 1e-15);
                    assert!((b.radius - r).abs() < 1e-15);
                }
            }
            _ => panic!("expected ball union"),
        }
    }

    #[test]
    fn cusp_chain_tangency_flagged() {
        // Consecutive balls touch at (1/2^n, 0); those samples are corners.
        let d = cusp_chain(2).unwrap();
        let samples = d.boundary(128).unwrap();
        let cusp = Vec2::new(0.5, 0.0);
        let near: Vec<_> = samples.iter().filter(|s| s.point.dist(cusp) < 1e-9).collect();
        assert!(!near.is_empty(), "no sample at the tangency point");
        assert!(near.iter().all(|s| !s.smooth));
    }

    #[test]
    fn comb_height_matches_formula() {
        // Direct evaluation of the height formula at n = 2.
        assert!((comb_height(2) - (0.5f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn comb_smooth_samples_carry_edge_slopes() {
        let d = triangle_comb(10).unwrap();
        let samples = d.boundary(256).unwrap();
        let mut checked = 0;
        for s in &samples {
            if !s.smooth || s.point.y <= 0.0 {
                continue;
            }
            // Identify the triangle from the abscissa, then compare against
            // a finite-difference slope of the analytic edge functions.
            let x = s.param;
            let n = (1.0 / x).floor() as usize;
            let n = n.clamp(1, 10);
            let nf = n as f64;
            let a = comb_height(n);
            if a == 0.0 {
                continue;
            }
            let mid = 0.5 * (1.0 / (nf + 1.0) + 1.0 / nf);
            let g = |x: f64| {
                if x <= mid {
                    2.0 * nf * a * ((nf + 1.0) * x - 1.0)
                } else {
                    2.0 * (nf + 1.0) * a * (1.0 - nf * x)
                }
            };
            let h = 1e-9;
            let fd = (g(x + h) - g(x - h)) / (2.0 * h);
            let nu = s.inward_normal.unwrap();
            let slope = -nu.x / nu.y; // from (s, -1)/norm
            assert!(
                (slope - fd).abs() < 1e-4 * (1.0 + fd.abs()),
                "slope {slope} vs fd {fd} at x = {x}"
            );
            checked += 1;
        }
        assert!(checked > 10);
    }

    #[test]
    fn comb_partial_perimeters_fit_log() {
        let ns = [100usize, 1000, 10000];
        let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = ns.iter().map(|&n| comb_partial_perimeter(n)).collect();
        let (_, slope, r2) = linear_fit(&xs, &ys);
        assert!(r2 > 0.99, "r^2 = {r2}");
        assert!(slope > 0.0);
    }

    #[test]
    fn remark222_shape() {
        let d = remark222_intervals(5).unwrap();
        match &d {
            ShapeDomain::Intervals1D { intervals } => {
                assert_eq!(intervals.len(), 2);
                assert!((intervals[0].0 + 0.2).abs() < 1e-15);
                assert!((intervals[0].1 - 0.2).abs() < 1e-15);
                assert_eq!(intervals[1], (1.0, 2.0));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn shrinking_pair_separation() {
        let d = shrinking_pair(10).unwrap();
        match &d {
            ShapeDomain::DisjointPair { delta, .. } => assert!((delta - 0.2).abs() < 1e-12),
            _ => panic!(),
        }
    }

    #[test]
    fn involute_contains_ring_points_and_grazes_unit_circle() {
        let d = involute(1024).unwrap();
        // The region is star-shaped from the origin with polar radius
        // sqrt(1 + t^2) at angle t - arctan t: it pinches to radius 1 at
        // angle 0 and bulges to ~4.6 on the negative axis.
        assert!(d.contains_point(Vec2::ZERO));
        for &th in &[0.8f64, 1.6, 3.1, 4.5] {
            assert!(d.contains_point(Vec2::dir(th) * 1.2), "missing ring point at {th}");
        }
        // Pinched at angle zero beyond the cusp, and far outside.
        assert!(!d.contains_point(Vec2::new(1.2, 0.0)));
        assert!(!d.contains_point(Vec2::new(8.0, 0.0)));
        // Every smooth inward normal ray is tangent to the unit circle:
        // distance from the origin to the ray equals 1 exactly.
        let samples = d.boundary(512).unwrap();
        let mut n_smooth = 0;
        for s in &samples {
            if let Some(nu) = s.inward_normal {
                let d0 = crate::geom::dist_to_ray(Vec2::ZERO, s.point, nu);
                assert!((d0 - 1.0).abs() < 1e-9, "ray clearance {d0}");
                n_smooth += 1;
            }
        }
        assert!(n_smooth > 500);
    }

    #[test]
    fn offset_of_ball_is_circle() {
        let c = ConvexBody::ball(Vec2::ZERO, 1.0).unwrap();
        let d = offset_of_convex(&c, 0.3, 256).unwrap();
        match &d {
            ShapeDomain::StarPolar { g, .. } => {
                for v in g {
                    assert!((v - 1.3).abs() < 1e-10);
                }
            }
            _ => panic!(),
        }
    }

    #[test]
    fn unknown_gallery_rejected() {
        assert!(matches!(
            make_gallery("klein_bottle", &[]),
            Err(GalleryError::UnknownGallery(_))
        ));
        assert!(matches!(
            make_gallery("star_circle", &[("radius".into(), -1.0)]),
            Err(GalleryError::NonPositiveParam(_))
        ));
    }
}
