//! Set-distance kernels and convergence diagnostics: sampled Hausdorff
//! distance, complement (open-set) Hausdorff distance on a shared raster,
//! three-mode convergence reports with matched thresholds, the polar
//! lower-bound verifier, and the dilation-limit experiment.

use crate::convex::ConvexBody;
use crate::domain::{Region, ShapeDomain};
use crate::geom::{Point, Rect};
use crate::gnp::{check_c_gnp, check_eps_ball_gnp, CheckConfig, CheckError};
use crate::raster::CharacteristicGrid;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("point set is empty")]
    EmptySet,
    #[error("resolution {h} too coarse for feature size {feature}")]
    ResolutionTooCoarse { h: f64, feature: f64 },
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Domain(#[from] crate::domain::DomainError),
}

/// Exact max-min Hausdorff distance between finite point samples.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> Result<f64, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let directed = |from: &[Point], to: &[Point]| {
        from.iter()
            .map(|p| to.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OpenSetDistance {
    pub value: f64,
    /// Raster-induced error bound `h * sqrt(2)`.
    pub error_bound: f64,
}

/// Hausdorff distance between the complements of two open sets inside the
/// ambient box, measured on a shared raster of resolution `h`.
pub fn open_set_distance(
    a: &ShapeDomain,
    b: &ShapeDomain,
    ambient: Rect,
    h: f64,
) -> Result<OpenSetDistance, MetricError> {
    let feature = a.feature_size().min(b.feature_size());
    if h > feature {
        return Err(MetricError::ResolutionTooCoarse { h, feature });
    }
    let ga = CharacteristicGrid::rasterize_in(a, ambient, h)?;
    let gb = CharacteristicGrid::rasterize_in(b, ambient, h)?;
    let value = ga.hausdorff_between(&ga.complement(), &gb.complement());
    Ok(OpenSetDistance { value, error_bound: h * 2f64.sqrt() })
}

/// Per-index record of one convergence study.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Complement Hausdorff distance to the limit, per index.
    pub h_distances: Vec<f64>,
    /// Per index, one verdict per probe (interior erosions first, then
    /// complement erosions).
    pub k_verdicts: Vec<Vec<bool>>,
    /// L1 distance of characteristic functions, per index.
    pub l1_distances: Vec<f64>,
    pub theta_h: f64,
    pub theta_l: f64,
    /// Per-index threshold flags for the three modes.
    pub h_below: Vec<bool>,
    pub k_ok: Vec<bool>,
    pub l_below: Vec<bool>,
    /// All three modes below their thresholds at the final index.
    pub modes_agree: bool,
    pub closure_gap: f64,
    pub boundary_gap: f64,
    pub closure_limit_matches: bool,
    pub boundary_limit_matches: bool,
}

/// Run the three-mode convergence study of `seq` against `limit` on one
/// shared raster. Probe compacts default to erosions of the limit (and of
/// its closed complement) at radii `{2h, 4h, 8h}`; thresholds are matched
/// so the modes are compared fairly: `theta_H = 2h`, probe radius `2h`,
/// `theta_L = 2h * perimeter(limit)`.
pub fn convergence_report(
    seq: &[ShapeDomain],
    limit: &ShapeDomain,
    ambient: Rect,
    probe_radii: &[f64],
    h: f64,
) -> Result<ConvergenceReport, MetricError> {
    if seq.len() < 3 {
        return Err(MetricError::Check(CheckError::Precondition(
            "sequence needs at least 3 members".into(),
        )));
    }
    let g_limit = CharacteristicGrid::rasterize_in(limit, ambient, h)?;
    let radii: Vec<f64> = if probe_radii.is_empty() {
        vec![2.0 * h, 4.0 * h, 8.0 * h]
    } else {
        probe_radii.to_vec()
    };
    let interior_probes: Vec<Vec<bool>> = radii.iter().map(|&r| g_limit.erode(r)).collect();
    let complement_probes: Vec<Vec<bool>> =
        radii.iter().map(|&r| g_limit.erode_complement(r)).collect();

    let cmp_limit = g_limit.complement();
    let dist_to_cmp_limit = g_limit.distances_to(&cmp_limit);
    let closure_limit = g_limit.closure_cells();
    let boundary_limit = g_limit.boundary_cells();

    let theta_h = 2.0 * h;
    let theta_l = 2.0 * h * limit.perimeter_estimate(1024).max(h);

    let mut h_distances = Vec::with_capacity(seq.len());
    let mut l1_distances = Vec::with_capacity(seq.len());
    let mut k_verdicts = Vec::with_capacity(seq.len());
    let mut closure_gap = f64::NAN;
    let mut boundary_gap = f64::NAN;
    for (idx, dom) in seq.iter().enumerate() {
        let g_n = CharacteristicGrid::rasterize_in(dom, ambient, h)?;
        let cmp_n = g_n.complement();
        // Directed distances reuse the cached limit-side transform.
        let to_limit = {
            let mut worst: f64 = 0.0;
            for (k, &c) in cmp_n.iter().enumerate() {
                if c {
                    worst = worst.max(dist_to_cmp_limit[k]);
                }
            }
            worst
        };
        let from_limit = g_n.directed_hausdorff(&cmp_limit, &cmp_n);
        h_distances.push(to_limit.max(from_limit));
        l1_distances.push(g_limit.symdiff_measure(&g_n));

        let closure_n = g_n.closure_cells();
        let mut verdicts = Vec::with_capacity(2 * radii.len());
        for probe in &interior_probes {
            verdicts.push(CharacteristicGrid::subset(probe, &g_n.cells));
        }
        for probe in &complement_probes {
            verdicts.push(!CharacteristicGrid::intersects(probe, &closure_n));
        }
        k_verdicts.push(verdicts);

        if idx + 1 == seq.len() {
            closure_gap = g_limit.hausdorff_between(&closure_n, &closure_limit);
            boundary_gap = g_limit.hausdorff_between(&g_n.boundary_cells(), &boundary_limit);
        }
    }

    let h_below: Vec<bool> = h_distances.iter().map(|&d| d <= theta_h).collect();
    let l_below: Vec<bool> = l1_distances.iter().map(|&d| d <= theta_l).collect();
    let k_ok: Vec<bool> = k_verdicts.iter().map(|v| v.iter().all(|&b| b)).collect();
    let modes_agree = *h_below.last().unwrap() && *k_ok.last().unwrap() && *l_below.last().unwrap();

    // Closure/boundary convergence at the final index, judged against the
    // final complement-Hausdorff distance plus raster slack.
    let final_h = *h_distances.last().unwrap();
    let slack = final_h + 2.0 * 2f64.sqrt() * h;
    Ok(ConvergenceReport {
        h_distances,
        k_verdicts,
        l1_distances,
        theta_h,
        theta_l,
        h_below,
        k_ok,
        l_below,
        modes_agree,
        closure_gap,
        boundary_gap,
        closure_limit_matches: closure_gap <= slack,
        boundary_limit_matches: boundary_gap <= slack,
    })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GBoundRow {
    pub min_g: f64,
    pub bound: f64,
    pub satisfied: bool,
    /// Margin of the polar small-ball inequality at this index.
    pub eps_margin: f64,
}

/// For star-shaped domains touching the unit sphere that satisfy the polar
/// small-ball inequality at `eps[i]`, the radius cannot dip below
/// `1 - 4*eps[i]`. Errors if the inequality precondition fails.
pub fn verify_g_bound(
    seq: &[ShapeDomain],
    eps: &[f64],
    contact: &[bool],
    cfg: &CheckConfig,
) -> Result<Vec<GBoundRow>, MetricError> {
    assert_eq!(seq.len(), eps.len());
    assert_eq!(seq.len(), contact.len());
    let mut rows = Vec::with_capacity(seq.len());
    for ((dom, &e), &touch) in seq.iter().zip(eps).zip(contact) {
        let ShapeDomain::StarPolar { g, .. } = dom else {
            return Err(MetricError::Check(CheckError::NotStarPolar));
        };
        let max_g = g.iter().cloned().fold(0.0f64, f64::max);
        if touch && (max_g - 1.0).abs() > 1e-9 {
            return Err(MetricError::Check(CheckError::Precondition(format!(
                "contact flag set but max radius is {max_g}"
            ))));
        }
        let rep = check_eps_ball_gnp(dom, e, cfg)?;
        if !rep.pass {
            return Err(MetricError::Check(CheckError::Precondition(format!(
                "polar inequality fails at eps = {e} (margin {})",
                rep.worst_margin
            ))));
        }
        let min_g = g.iter().cloned().fold(f64::INFINITY, f64::min);
        let bound = 1.0 - 4.0 * e;
        rows.push(GBoundRow {
            min_g,
            bound,
            satisfied: min_g >= bound - cfg.tol,
            eps_margin: rep.worst_margin,
        });
    }
    Ok(rows)
}

/// Rescale each member about the origin to unit circumradius and report the
/// smallest `eps` making `B(O, 1 - eps) subset T(Omega) subset B(O, 1)`
/// hold: `eps = 1 - min_radius / max_radius`. Members must satisfy the
/// normal property against the smallest origin-centered ball containing
/// the reference body, and volumes must increase along the sequence.
pub fn dilation_limit_experiment(
    seq: &[ShapeDomain],
    c: &ConvexBody,
    cfg: &CheckConfig,
) -> Result<Vec<f64>, MetricError> {
    let r_c = smallest_enclosing_radius_about_origin(c);
    let b_c = ConvexBody::Ball { center: Point::ZERO, radius: r_c };
    let mut eps_out = Vec::with_capacity(seq.len());
    let mut prev_vol = 0.0f64;
    for dom in seq {
        let rep = check_c_gnp(dom, &b_c, cfg)?;
        if !rep.pass {
            return Err(MetricError::Check(CheckError::Precondition(format!(
                "member fails the enclosing-ball normal property (margin {})",
                rep.worst_margin
            ))));
        }
        let bb = dom.bbox();
        let h = (bb.diagonal() / 256.0).max(1e-6);
        let vol = CharacteristicGrid::rasterize(dom, h)?.area_estimate();
        if vol < prev_vol {
            return Err(MetricError::Check(CheckError::Precondition(
                "volumes must increase along the sequence".into(),
            )));
        }
        prev_vol = vol;
        let (lo, hi) = dom.polar_radius_range(Point::ZERO)?;
        eps_out.push((1.0 - lo / hi).max(0.0));
    }
    Ok(eps_out)
}

fn smallest_enclosing_radius_about_origin(c: &ConvexBody) -> f64 {
    match c {
        ConvexBody::Ball { center, radius } => center.norm() + radius,
        ConvexBody::Segment { a, b } => a.norm().max(b.norm()),
        ConvexBody::Polytope { vertices } => {
            vertices.iter().map(|v| v.norm()).fold(0.0f64, f64::max)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::BallSpec;
    use crate::gallery;
    use crate::geom::Vec2;
    use std::f64::consts::TAU;

    #[test]
    fn hausdorff_basics() {
        let a = vec![Vec2::new(0.0, 0.0)];
        let b = vec![Vec2::new(3.0, 4.0)];
        assert!((hausdorff_distance(&a, &b).unwrap() - 5.0).abs() < 1e-15);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert!(matches!(hausdorff_distance(&a, &[]), Err(MetricError::EmptySet)));
    }

    #[test]
    fn hausdorff_concentric_circles() {
        let circle = |r: f64, n: usize| -> Vec<Point> {
            (0..n).map(|k| Vec2::dir(TAU * k as f64 / n as f64) * r).collect()
        };
        let d = hausdorff_distance(&circle(1.0, 4096), &circle(2.0, 4096)).unwrap();
        assert!((d - 1.0).abs() < 2e-3, "distance {d}");
    }

    #[test]
    fn open_set_distance_identity_and_annulus() {
        let ambient = Rect::new(Vec2::new(-2.0, -2.0), Vec2::new(2.0, 2.0));
        let h = 4.0 / 512.0;
        let disk = gallery::star_circle(1.0, 1024).unwrap();
        let same = open_set_distance(&disk, &disk, ambient, h).unwrap();
        assert!(same.value <= same.error_bound);
        for n in [4u32, 8, 16] {
            let inner = gallery::star_circle(1.0 - 1.0 / n as f64, 1024).unwrap();
            let d = open_set_distance(&inner, &disk, ambient, h).unwrap();
            assert!(
                (d.value - 1.0 / n as f64).abs() <= d.error_bound,
                "n = {n}: {} vs 1/n = {}",
                d.value,
                1.0 / n as f64
            );
        }
    }

    #[test]
    fn resolution_guard() {
        let thin = ShapeDomain::ball_union(vec![BallSpec { center: Vec2::ZERO, radius: 0.01 }]).unwrap();
        let ambient = Rect::new(Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0));
        assert!(matches!(
            open_set_distance(&thin, &thin, ambient, 0.5),
            Err(MetricError::ResolutionTooCoarse { .. })
        ));
    }

    #[test]
    fn disk_family_converges_in_all_modes() {
        let limit = gallery::star_circle(1.0, 1024).unwrap();
        let seq: Vec<ShapeDomain> = (2..=32)
            .map(|n| gallery::star_circle(1.0 - 1.0 / n as f64, 1024).unwrap())
            .collect();
        let ambient = Rect::new(Vec2::new(-1.25, -1.25), Vec2::new(1.25, 1.25));
        // Thresholds scale with h; pick h so the crossings land inside the
        // sampled range with slack against lattice noise.
        let h = 2.5 / 96.0;
        let rep = convergence_report(&seq, &limit, ambient, &[], h).unwrap();
        assert!(rep.modes_agree, "flags: h={:?} k={:?} l={:?}", rep.h_below, rep.k_ok, rep.l_below);
        assert!(rep.closure_limit_matches);
        assert!(rep.boundary_limit_matches);
        // Distances decrease along the family.
        for w in rep.h_distances.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        for w in rep.l1_distances.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        // Open-set and compact convergence coincide index-by-index on the
        // shared raster (the probe radius matches theta_H), in both
        // directions; all modes hold together at the final index.
        assert_eq!(rep.h_below, rep.k_ok);
        let first_true = |v: &[bool]| v.iter().position(|&b| b).unwrap_or(v.len());
        let (ih, ik) = (first_true(&rep.h_below), first_true(&rep.k_ok));
        assert_eq!(ih, ik);
        assert!(ih < rep.h_below.len(), "crossing must happen inside the range");
        // Once below, each statistic stays below (single crossing).
        for flags in [&rep.h_below, &rep.k_ok, &rep.l_below] {
            let i = first_true(flags);
            assert!(flags[i..].iter().all(|&b| b), "non-monotone flags {flags:?}");
        }
    }

    #[test]
    fn remark_222_boundary_limit_fails() {
        let limit = ShapeDomain::intervals_1d(vec![(1.0, 2.0)]).unwrap();
        let seq: Vec<ShapeDomain> =
            (10..=100).step_by(10).map(|n| gallery::remark222_intervals(n).unwrap()).collect();
        let ambient = Rect::new(Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0));
        let rep = convergence_report(&seq, &limit, ambient, &[], 0.005).unwrap();
        // Complements converge...
        assert!(*rep.h_distances.last().unwrap() < 0.05);
        // ...but the boundary gap stays near 1: the spurious limit point 0.
        assert!(rep.boundary_gap >= 0.9, "gap {}", rep.boundary_gap);
        assert!(!rep.boundary_limit_matches);
        assert!(!rep.closure_limit_matches);
    }

    #[test]
    fn g_bound_rows() {
        let cfg = CheckConfig::default();
        // Constant radius: min G = 1 >= 1 - 4 eps for any eps.
        let rows = verify_g_bound(
            &[gallery::star_circle(1.0, 256).unwrap()],
            &[0.05],
            &[true],
            &cfg,
        )
        .unwrap();
        assert!(rows[0].satisfied);

        // g = 1 - eps(1 - cos)/2 at eps = 1/8: min G = 1 - eps > 1 - 4 eps,
        // and the polar inequality holds (oracle: grid max ~ eps^2/4).
        let n = 2048;
        let e = 0.125;
        let g: Vec<f64> =
            (0..n).map(|k| 1.0 - e * (1.0 - (TAU * k as f64 / n as f64).cos()) / 2.0).collect();
        let dom = ShapeDomain::star_polar(Vec2::ZERO, 0.0, g, None).unwrap();
        let rows = verify_g_bound(&[dom], &[e], &[true], &cfg).unwrap();
        assert!(rows[0].satisfied);
        assert!((rows[0].min_g - (1.0 - e)).abs() < 1e-9);
    }

    #[test]
    fn g_bound_precondition_rejected() {
        // Steep profile violates the polar inequality at tiny eps.
        let n = 512;
        let g: Vec<f64> = (0..n).map(|k| 1.0 - 0.4 * (TAU * k as f64 / n as f64).cos().powi(2)).collect();
        let max_g = g.iter().cloned().fold(0.0f64, f64::max);
        let g: Vec<f64> = g.into_iter().map(|v| v / max_g).collect();
        let dom = ShapeDomain::star_polar(Vec2::ZERO, 0.0, g, None).unwrap();
        let r = verify_g_bound(&[dom], &[0.001], &[true], &CheckConfig::default());
        assert!(matches!(r, Err(MetricError::Check(CheckError::Precondition(_)))));
    }

    #[test]
    fn dilation_limit_disks_and_perturbed() {
        let cfg = CheckConfig::default();
        let c = ConvexBody::ball(Vec2::ZERO, 0.2).unwrap();
        let disks: Vec<ShapeDomain> =
            (1..=5).map(|n| gallery::star_circle(n as f64, 256).unwrap()).collect();
        let eps = dilation_limit_experiment(&disks, &c, &cfg).unwrap();
        for e in &eps {
            assert!(e.abs() < 1e-12);
        }

        // g = n (1 + cos/n): eps_n = 1 - (n-1)/(n+1) = 2/(n+1). Normal rays
        // of this family stray up to |g'| ~ 1 from the origin, so the
        // enclosing reference ball must have radius 1.
        let c = ConvexBody::ball(Vec2::ZERO, 1.0).unwrap();
        let seq: Vec<ShapeDomain> = (2..=6)
            .map(|n| {
                let nf = n as f64;
                gallery::star_polar_cosine(nf, 1.0, 512).unwrap()
            })
            .collect();
        let eps = dilation_limit_experiment(&seq, &c, &cfg).unwrap();
        for (i, e) in eps.iter().enumerate() {
            let nf = (i + 2) as f64;
            assert!((e - 2.0 / (nf + 1.0)).abs() < 1e-9, "eps {e} at n = {nf}");
        }
        // Trend toward zero.
        for w in eps.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn dilation_limit_rejects_nonconforming() {
        let cfg = CheckConfig::default();
        let c = ConvexBody::ball(Vec2::ZERO, 0.2).unwrap();
        // A far-away ball violates the enclosing-ball normal property.
        let bad = ShapeDomain::ball_union(vec![BallSpec {
            center: Vec2::new(5.0, 0.0),
            radius: 1.0,
        }])
        .unwrap();
        assert!(matches!(
            dilation_limit_experiment(&[bad], &c, &cfg),
            Err(MetricError::Check(CheckError::Precondition(_)))
        ));
    }
}
