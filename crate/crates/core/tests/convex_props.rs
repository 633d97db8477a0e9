//! Property tests for the convex-body primitives: projection laws, the
//! coupled-projection distance bound, and normal-cone algebra.

use gnp_core::{ConvexBody, Vec2};
use proptest::prelude::*;

fn pt(range: f64) -> impl Strategy<Value = Vec2> {
    (-range..range, -range..range).prop_map(|(x, y)| Vec2::new(x, y))
}

fn body() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![
        (pt(1.0), 0.05f64..1.0).prop_map(|(c, r)| ConvexBody::ball(c, r).unwrap()),
        (pt(1.0), pt(1.0))
            .prop_filter("distinct endpoints", |(a, b)| a.dist(*b) > 1e-3)
            .prop_map(|(a, b)| ConvexBody::segment(a, b).unwrap()),
        (pt(1.0), 0.2f64..1.0, 3usize..8, 0.0..std::f64::consts::TAU).prop_map(
            |(c, r, k, phase)| {
                let pts: Vec<Vec2> = (0..k)
                    .map(|i| {
                        let th = phase + std::f64::consts::TAU * i as f64 / k as f64;
                        c + Vec2::dir(th) * r
                    })
                    .collect();
                ConvexBody::hull_of(&pts).unwrap_or_else(|_| ConvexBody::ball(c, r).unwrap())
            }
        ),
    ]
}

/// Farthest pair distance over the bodies' outlines and the two loose points.
fn diameter_of(k: &ConvexBody, l: &ConvexBody, x: Vec2, y: Vec2) -> f64 {
    let mut pts = k.boundary_polyline(64);
    pts.extend(l.boundary_polyline(64));
    pts.push(x);
    pts.push(y);
    let mut d = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max(pts[i].dist(pts[j]));
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projection_is_idempotent(c in body(), x in pt(3.0)) {
        let p = c.project(x);
        let pp = c.project(p);
        prop_assert!(p.dist(pp) <= 1e-12, "{p:?} vs {pp:?}");
    }

    #[test]
    fn projection_is_nonexpansive(c in body(), x in pt(3.0), y in pt(3.0)) {
        let (px, py) = (c.project(x), c.project(y));
        prop_assert!(px.dist(py) <= x.dist(y) + 1e-12);
    }

    #[test]
    fn projected_point_realizes_distance(c in body(), x in pt(3.0)) {
        // d(x, C) through the projection agrees with a dense boundary scan.
        let p = c.project(x);
        let d = x.dist(p);
        for q in c.boundary_polyline(256) {
            prop_assert!(d <= x.dist(q) + 1e-9);
        }
    }

    #[test]
    fn coupled_projection_bound(k in body(), l in body(), x in pt(1.0), y in pt(1.0)) {
        // |P_K(x) - P_L(y)| <= 4a + |x - y| with a the diameter of
        // K u L u {x, y}.
        let a = diameter_of(&k, &l, x, y);
        let lhs = k.project(x).dist(l.project(y));
        prop_assert!(lhs <= 4.0 * a + x.dist(y) + 1e-12, "lhs {lhs}, a {a}");
    }

    #[test]
    fn cone_contains_apex(c in body(), x in pt(3.0)) {
        prop_assert!(c.normal_cone_contains(x, x, 1e-9));
    }

    #[test]
    fn cone_sup_is_quadratically_homogeneous(
        c in body(),
        x in pt(2.0),
        y in pt(2.0),
        lam in 0.1f64..8.0
    ) {
        // sup_{c} (y-x).(c-x) scales by lambda^2 when C, x, y all dilate.
        let sup = c.cone_sup(x, y);
        let scaled = c.dilate(lam, Vec2::ZERO);
        let sup_scaled = scaled.cone_sup(x * lam, y * lam);
        let expect = sup * lam * lam;
        prop_assert!(
            (sup_scaled - expect).abs() <= 1e-9 * (1.0 + expect.abs()),
            "{sup_scaled} vs {expect}"
        );
        // Membership verdicts agree away from the tolerance boundary.
        if sup.abs() > 1e-6 {
            prop_assert_eq!(
                scaled.normal_cone_contains(x * lam, y * lam, 1e-9),
                c.normal_cone_contains(x, y, 1e-9)
            );
        }
    }

    #[test]
    fn support_dominates_boundary(c in body(), th in 0.0..std::f64::consts::TAU) {
        let dir = Vec2::dir(th);
        let s = c.support(dir);
        for q in c.boundary_polyline(128) {
            prop_assert!(dir.dot(q) <= s + 1e-9);
        }
    }
}
