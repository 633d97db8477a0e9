//! Seeded generators for the randomized suites: smooth star-polar domains
//! with analytic derivative data, random convex bodies, domain/body pairs
//! for the checker-equivalence study, and the rejection sampler for
//! contact profiles satisfying the polar small-ball inequality.

use crate::convex::ConvexBody;
use crate::domain::ShapeDomain;
use crate::geom::{Point, Rect, Vec2};
use crate::gnp::{check_eps_ball_gnp, CheckConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn point_in(&mut self, rect: Rect) -> Point {
        Vec2::new(
            self.uniform(rect.lo.x, rect.hi.x),
            self.uniform(rect.lo.y, rect.hi.y),
        )
    }

    /// Low-order Fourier radius profile `base + sum a_k cos + b_k sin`,
    /// with its exact derivative samples.
    pub fn star_polar_fourier(
        &mut self,
        base: f64,
        amp: f64,
        modes: usize,
        n_theta: usize,
    ) -> ShapeDomain {
        let modes = modes.max(1);
        let coeffs: Vec<(f64, f64)> = (0..modes)
            .map(|_| {
                (
                    self.uniform(-1.0, 1.0) * amp / modes as f64,
                    self.uniform(-1.0, 1.0) * amp / modes as f64,
                )
            })
            .collect();
        let n = n_theta.max(256);
        let mut g = Vec::with_capacity(n);
        let mut dg = Vec::with_capacity(n);
        for i in 0..n {
            let th = TAU * i as f64 / n as f64;
            let mut v = base;
            let mut dv = 0.0;
            for (k, (a, b)) in coeffs.iter().enumerate() {
                let kf = (k + 1) as f64;
                v += a * (kf * th).cos() + b * (kf * th).sin();
                dv += kf * (-a * (kf * th).sin() + b * (kf * th).cos());
            }
            g.push(v);
            dg.push(dv);
        }
        ShapeDomain::star_polar(Vec2::ZERO, 0.0, g, Some(dg))
            .expect("fourier profile with amp < base stays positive")
    }

    /// Random body among the three variants, contained in `B(center, r)`.
    pub fn convex_body_in(&mut self, center: Point, r: f64) -> ConvexBody {
        match self.rng.gen_range(0..3u8) {
            0 => ConvexBody::ball(center, self.uniform(0.2 * r, 0.9 * r)).unwrap(),
            1 => {
                let th = self.uniform(0.0, TAU);
                let len = self.uniform(0.3 * r, 0.9 * r);
                ConvexBody::segment(center - Vec2::dir(th) * len, center + Vec2::dir(th) * len)
                    .unwrap()
            }
            _ => {
                let k = self.rng.gen_range(3..8usize);
                // Strictly convex radial polygon: sorted angles with a
                // minimum gap, radii bounded away from zero.
                let mut angles: Vec<f64> =
                    (0..k).map(|i| TAU * i as f64 / k as f64 + self.uniform(0.0, 0.3)).collect();
                angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let pts: Vec<Point> = angles
                    .iter()
                    .map(|&a| center + Vec2::dir(a) * self.uniform(0.55 * r, 0.95 * r))
                    .collect();
                ConvexBody::hull_of(&pts)
                    .unwrap_or_else(|_| ConvexBody::ball(center, 0.5 * r).unwrap())
            }
        }
    }

    /// Domain/body pair with `int C` inside the domain, for the
    /// checker-equivalence study. Half the draws conform (small central
    /// body inside a smooth star domain); the rest displace the body
    /// towards the boundary so failures occur too.
    pub fn check_pair(&mut self, conforming: bool) -> (ShapeDomain, ConvexBody) {
        let base = self.uniform(0.9, 1.3);
        let amp = self.uniform(0.02, 0.1);
        let dom = self.star_polar_fourier(base, amp, 3, 1024);
        let r_inner = base - amp;
        let c = if conforming {
            self.convex_body_in(Vec2::ZERO, 0.45 * r_inner)
        } else {
            let off = Vec2::dir(self.uniform(0.0, TAU)) * (0.75 * r_inner);
            ConvexBody::ball(off, self.uniform(0.03, 0.1)).unwrap()
        };
        (dom, c)
    }

    /// Rejection-sample a star profile with contact (`max g = 1`) that
    /// passes the polar small-ball inequality at `eps`. The slope budget is
    /// randomized up to the inequality's own cap, so accepted profiles
    /// exercise the radius bound non-vacuously.
    pub fn feasible_contact_profile(
        &mut self,
        eps: f64,
        n_theta: usize,
        max_tries: usize,
    ) -> Option<ShapeDomain> {
        let cfg = CheckConfig::default();
        for _ in 0..max_tries {
            let modes = self.rng.gen_range(1..4usize);
            let coeffs: Vec<(f64, f64)> = (0..modes)
                .map(|_| (self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)))
                .collect();
            let n = n_theta.max(512);
            let eval = |th: f64| {
                let mut s = 0.0;
                let mut ds = 0.0;
                for (k, (a, b)) in coeffs.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    s += a * (kf * th).cos() + b * (kf * th).sin();
                    ds += kf * (-a * (kf * th).sin() + b * (kf * th).cos());
                }
                (s, ds)
            };
            let mut s_min = f64::INFINITY;
            let mut s_max = f64::NEG_INFINITY;
            let mut ds_max = 0.0f64;
            for i in 0..n {
                let (s, ds) = eval(TAU * i as f64 / n as f64);
                s_min = s_min.min(s);
                s_max = s_max.max(s);
                ds_max = ds_max.max(ds.abs());
            }
            if ds_max < 1e-9 || s_max - s_min < 1e-9 {
                continue;
            }
            // Slope cap just inside the inequality's own limit.
            let scale = self.uniform(0.3, 0.98) / ds_max;
            let mut g = Vec::with_capacity(n);
            let mut dg = Vec::with_capacity(n);
            for i in 0..n {
                let (s, ds) = eval(TAU * i as f64 / n as f64);
                g.push(1.0 - eps * scale * (s_max - s));
                dg.push(eps * scale * ds);
            }
            let Ok(dom) = ShapeDomain::star_polar(Vec2::ZERO, 0.0, g, Some(dg)) else {
                continue;
            };
            if let Ok(rep) = check_eps_ball_gnp(&dom, eps, &cfg) {
                if rep.pass {
                    return Some(dom);
                }
            }
        }
        None
    }
}
