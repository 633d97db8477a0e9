//! Cross-checker invariants: agreement of the ray checker with its
//! normal-cone dual, isometry invariance of verdicts and margins,
//! monotonicity of the polar inequality, and the implication from the
//! polar inequality to the ray condition.

use gnp_core::domain::BallSpec;
use gnp_core::gnp::{
    affine_image_convex, affine_image_domain, check_c_gnp, check_c_sp, check_eps_ball_gnp,
    CheckConfig, Mat2,
};
use gnp_core::sampler::Sampler;
use gnp_core::{gallery, ConvexBody, Region, ShapeDomain, Vec2};

fn cfg() -> CheckConfig {
    CheckConfig { boundary_samples: 256, interior_samples: 512, ..Default::default() }
}

#[test]
fn ray_and_cone_checkers_agree() {
    // Twelve seeded pairs, conforming and displaced; verdicts must agree
    // whenever both margins clear ten times the tolerance.
    let mut sampler = Sampler::new(42);
    let cfg = cfg();
    let mut disagreements = 0;
    let mut compared = 0;
    for i in 0..12 {
        let (dom, c) = sampler.check_pair(i % 2 == 0);
        let gnp = check_c_gnp(&dom, &c, &cfg).unwrap();
        let sp = check_c_sp(&dom, &c, &cfg).unwrap();
        let cond4 = gnp.condition_breakdown[3].pass.unwrap();
        if gnp.worst_margin.abs() > 10.0 * cfg.tol && sp.worst_margin.abs() > 10.0 * cfg.tol {
            compared += 1;
            if cond4 != sp.pass {
                disagreements += 1;
            }
        } else {
            // Near-zero margins: verdicts may sit on either side of the
            // tolerance; only require no hard contradiction on clear fails.
            if gnp.worst_margin < -1e-3 && sp.worst_margin > -1e-12 {
                disagreements += 1;
            }
        }
    }
    assert!(compared >= 4, "too few clear-margin pairs: {compared}");
    assert_eq!(disagreements, 0);
}

#[test]
fn isometry_invariance_of_margins() {
    let cfg = cfg();
    let angle = 0.7f64;
    let rot: Mat2 = [[angle.cos(), -angle.sin()], [angle.sin(), angle.cos()]];
    let shift = Vec2::new(0.4, -1.1);

    let cases: Vec<(ShapeDomain, ConvexBody)> = vec![
        (
            gallery::star_polar_cosine(1.1, 0.15, 512).unwrap(),
            ConvexBody::ball(Vec2::ZERO, 0.4).unwrap(),
        ),
        (
            gallery::cusp_chain(4).unwrap(),
            ConvexBody::segment(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap(),
        ),
        (
            gallery::two_disk(1.0).unwrap(),
            ConvexBody::segment(Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0)).unwrap(),
        ),
    ];
    for (dom, c) in &cases {
        let before = check_c_gnp(dom, c, &cfg).unwrap();
        let dom2 = affine_image_domain(dom, &rot, shift, 512).unwrap();
        let c2 = affine_image_convex(c, &rot, shift, 64).unwrap();
        let after = check_c_gnp(&dom2, &c2, &cfg).unwrap();
        assert_eq!(before.pass, after.pass);
        assert!(
            (before.worst_margin - after.worst_margin).abs() < 1e-9,
            "margins moved: {} vs {}",
            before.worst_margin,
            after.worst_margin
        );
    }
}

#[test]
fn eps_ball_monotone_in_eps() {
    let mut sampler = Sampler::new(9);
    let cfg = CheckConfig::default();
    let dom = sampler.feasible_contact_profile(0.05, 1024, 500).unwrap();
    let mut prev_margin = f64::NEG_INFINITY;
    for &eps in &[0.05, 0.08, 0.12, 0.2] {
        let rep = check_eps_ball_gnp(&dom, eps, &cfg).unwrap();
        assert!(rep.pass, "pass at 0.05 implies pass at {eps}");
        assert!(rep.worst_margin >= prev_margin);
        prev_margin = rep.worst_margin;
    }
}

#[test]
fn balls_centered_in_the_body_pass() {
    let mut sampler = Sampler::new(17);
    let cfg = cfg();
    for _ in 0..6 {
        let c = sampler.convex_body_in(Vec2::new(0.2, -0.3), 0.8);
        // Center the ball domain at a point of C and make it big enough to
        // contain C: every inward normal then runs through that point.
        let center = c.project(sampler.point_in(gnp_core::Rect::around(Vec2::ZERO, 0.5)));
        let radius = 4.0;
        let dom = ShapeDomain::ball_union(vec![BallSpec { center, radius }]).unwrap();
        let rep = check_c_gnp(&dom, &c, &cfg).unwrap();
        assert!(rep.pass, "center {center:?} body {c:?}: {:?}", rep.worst_margin);
    }
}

#[test]
fn polar_inequality_implies_ray_condition() {
    // For star-shaped domains the polar inequality at eps is exactly the
    // ray-clearance condition against the concentric eps-ball.
    let mut sampler = Sampler::new(23);
    let cfg = CheckConfig { boundary_samples: 512, ..CheckConfig::default() };
    let eps = 0.05;
    for _ in 0..5 {
        let dom = sampler.feasible_contact_profile(eps, 1024, 500).unwrap();
        let rep = check_eps_ball_gnp(&dom, eps, &cfg).unwrap();
        assert!(rep.pass);
        let ball = ConvexBody::ball(Vec2::ZERO, eps).unwrap();
        let gnp = check_c_gnp(&dom, &ball, &cfg).unwrap();
        let cond4 = gnp.condition_breakdown[3].pass.unwrap();
        assert!(cond4, "ray condition fails with margin {}", gnp.worst_margin);
    }
}

#[test]
fn dilation_scales_margins_linearly() {
    // The ray clearance is a length: dilating domain and body by lambda
    // scales the condition-4 margin by lambda.
    let cfg = cfg();
    let dom = gallery::star_circle(1.0, 512).unwrap();
    let c = ConvexBody::ball(Vec2::ZERO, 0.5).unwrap();
    let base = check_c_gnp(&dom, &c, &cfg).unwrap();
    for lam in [0.5, 2.0, 3.7] {
        let dom2 = dom.dilate(lam, Vec2::ZERO).unwrap();
        let c2 = c.dilate(lam, Vec2::ZERO);
        let rep = check_c_gnp(&dom2, &c2, &cfg).unwrap();
        assert!((rep.worst_margin - lam * base.worst_margin).abs() < 1e-9);
    }
}
