//! Thickness of a domain over its reference body: travel distance along each
//! outward normal to the first exit through the domain boundary, Lipschitz
//! statistics of the resulting field, the bilipschitz certificate
//! `K + M*L_nu < 1`, and empirical chord-ratio envelopes for the boundary
//! parameterization `c -> c + d(c) nu(c)`.

use crate::convex::ConvexBody;
use crate::domain::Region;
use crate::geom::{Point, Vec2, DEFAULT_TOL};
use crate::gnp::{check_c_gnp, CheckConfig, CheckError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThicknessError {
    #[error("outward ray from ({0:.4}, {1:.4}) never exits the domain")]
    RayNeverExits(f64, f64),
    #[error("normal property violated: {0}")]
    GnpViolated(String),
    #[error(transparent)]
    Check(#[from] CheckError),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ThicknessSample {
    pub c: Point,
    pub nu: Vec2,
    pub d: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ThicknessStats {
    /// Lipschitz estimate of the thickness function (adjacent chords).
    pub k_lip: f64,
    /// Maximum thickness.
    pub m_max: f64,
    /// Lipschitz estimate of the outward normal field (adjacent chords).
    pub l_nu: f64,
    /// `1 - (K + M * L_nu)`.
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThicknessField {
    pub base: ConvexBody,
    pub samples: Vec<ThicknessSample>,
    pub stats: ThicknessStats,
    /// Fraction of requested boundary samples that produced a value.
    pub coverage: f64,
    /// False when the base has boundary points without normals
    /// (polytope vertices, segment endpoints).
    pub full_normal_field: bool,
    /// Adjacency runs into `samples`: `(start, end, cyclic)`.
    group_spans: Vec<(usize, usize, bool)>,
}

impl ThicknessField {
    pub fn image_points(&self) -> Vec<Point> {
        self.samples.iter().map(|s| s.c + s.nu * s.d).collect()
    }

    fn from_groups(
        base: ConvexBody,
        groups: Vec<(Vec<ThicknessSample>, bool)>,
        requested: usize,
    ) -> Self {
        let mut samples = Vec::new();
        let mut spans = Vec::new();
        for (g, cyclic) in groups {
            let start = samples.len();
            samples.extend(g);
            spans.push((start, samples.len(), cyclic));
        }
        let stats = compute_stats(&samples, &spans);
        let full = matches!(base, ConvexBody::Ball { .. });
        let coverage = if requested == 0 { 0.0 } else { samples.len() as f64 / requested as f64 };
        ThicknessField {
            base,
            samples,
            stats,
            coverage: coverage.min(1.0),
            full_normal_field: full,
            group_spans: spans,
        }
    }

    /// Synthetic field with prescribed constant thickness, for analyzing the
    /// certificate on a body without a realized domain.
    pub fn with_constant_thickness(base: &ConvexBody, d: f64, n: usize) -> Result<Self, ThicknessError> {
        if !(d > 0.0) {
            return Err(ThicknessError::GnpViolated("thickness must be positive".into()));
        }
        let groups = base
            .boundary_normal_groups(n)
            .into_iter()
            .map(|(g, cyclic)| {
                (
                    g.into_iter().map(|(c, nu)| ThicknessSample { c, nu, d }).collect(),
                    cyclic,
                )
            })
            .collect();
        Ok(Self::from_groups(base.clone(), groups, n))
    }
}

fn compute_stats(samples: &[ThicknessSample], spans: &[(usize, usize, bool)]) -> ThicknessStats {
    let mut k_lip = 0.0f64;
    let mut l_nu = 0.0f64;
    let m_max = samples.iter().map(|s| s.d).fold(0.0f64, f64::max);
    for &(start, end, cyclic) in spans {
        let len = end - start;
        if len < 2 {
            continue;
        }
        let pairs = if cyclic { len } else { len - 1 };
        for k in 0..pairs {
            let a = &samples[start + k];
            let b = &samples[start + (k + 1) % len];
            let dc = a.c.dist(b.c);
            if dc <= 1e-12 {
                continue;
            }
            k_lip = k_lip.max((a.d - b.d).abs() / dc);
            l_nu = l_nu.max(a.nu.dist(b.nu) / dc);
        }
    }
    ThicknessStats { k_lip, m_max, l_nu, margin: 1.0 - (k_lip + m_max * l_nu) }
}

/// Cast the outward normal ray from each boundary point of `c` and bisect
/// the first exit through the domain boundary. The domain must satisfy the
/// normal property against `c` (checked first), which makes the exit run
/// unique. Bisection bracket `(0, ambient diameter]`, 60 steps.
pub fn compute_thickness<R: Region + ?Sized>(
    c: &ConvexBody,
    dom: &R,
    n: usize,
    cfg: &CheckConfig,
) -> Result<ThicknessField, ThicknessError> {
    let gate = check_c_gnp(dom, c, cfg)?;
    if !gate.pass {
        return Err(ThicknessError::GnpViolated(format!(
            "reference check fails with margin {}",
            gate.worst_margin
        )));
    }
    let t_max = dom.bbox().union(c.bounding_box()).diagonal() * 1.05;
    let march = 512usize;
    let groups = c
        .boundary_normal_groups(n)
        .into_iter()
        .map(|(g, cyclic)| -> Result<(Vec<ThicknessSample>, bool), ThicknessError> {
            let mut out = Vec::with_capacity(g.len());
            for (cp, nu) in g {
                // Bracket the exit by marching, then bisect membership.
                let step = t_max / march as f64;
                let mut t_in = 0.0f64;
                let mut t_out = None;
                for k in 1..=march {
                    let t = step * k as f64;
                    if dom.contains_point(cp + nu * t) {
                        t_in = t;
                    } else {
                        t_out = Some(t);
                        break;
                    }
                }
                let Some(mut hi) = t_out else {
                    return Err(ThicknessError::RayNeverExits(cp.x, cp.y));
                };
                let mut lo = t_in;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if dom.contains_point(cp + nu * mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let d = 0.5 * (lo + hi);
                if d <= DEFAULT_TOL {
                    return Err(ThicknessError::GnpViolated(format!(
                        "zero thickness at ({:.4}, {:.4}): domain does not cover the body boundary",
                        cp.x, cp.y
                    )));
                }
                out.push(ThicknessSample { c: cp, nu, d });
            }
            Ok((out, cyclic))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ThicknessField::from_groups(c.clone(), groups, n))
}

/// `1 - (K + M*L_nu)` and the certificate verdict. A positive margin
/// guarantees the two-sided chord bounds
/// `margin <= |Phi(c1)-Phi(c2)|/|c1-c2| <= 1 + K + M*L_nu`.
pub fn bilipschitz_margin(field: &ThicknessField) -> (f64, bool) {
    (field.stats.margin, field.stats.margin > 0.0)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RatioBounds {
    /// Smallest forward chord ratio `|dPhi| / |dc|` over scanned pairs.
    pub min_ratio: f64,
    /// Largest forward chord ratio over scanned pairs.
    pub max_ratio: f64,
    /// Smallest inverse-direction ratio `|dc| / |dPhi|` (= 1 / max_ratio):
    /// this collapses when the boundary parameterization stretches wildly.
    pub inverse_min_ratio: f64,
    pub pairs_scanned: usize,
}

/// Exhaustive (or strided, beyond 1200 samples) pair scan of the chord
/// ratios of `Phi(c) = c + d(c) nu(c)`.
pub fn empirical_ratio_bounds(field: &ThicknessField) -> RatioBounds {
    let images = field.image_points();
    let n = images.len();
    let stride = if n > 1200 { n / 1200 + 1 } else { 1 };
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    let mut pairs = 0usize;
    let mut i = 0;
    while i < n {
        let mut j = i + stride;
        while j < n {
            let dc = field.samples[i].c.dist(field.samples[j].c);
            if dc > 1e-12 {
                let r = images[i].dist(images[j]) / dc;
                min_ratio = min_ratio.min(r);
                max_ratio = max_ratio.max(r);
                pairs += 1;
            }
            j += stride;
        }
        i += stride;
    }
    RatioBounds {
        min_ratio,
        max_ratio,
        inverse_min_ratio: if max_ratio > 0.0 { 1.0 / max_ratio } else { f64::INFINITY },
        pairs_scanned: pairs,
    }
}
