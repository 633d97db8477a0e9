//! Cell-center rasterization of domains and the exact Euclidean distance
//! transform the set-convergence statistics run on. All convergence modes
//! are compared on one shared raster so their thresholds are commensurable.

use crate::domain::{DomainError, Region, ShapeDomain};
use crate::geom::{Point, Rect, Vec2};

const FAR: f64 = 1e20;

/// Bitmask of cell-center membership over a box.
#[derive(Clone, Debug)]
pub struct CharacteristicGrid {
    pub origin: Point,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// 1 for interval unions, 2 otherwise.
    pub dim: u8,
    pub cells: Vec<bool>,
}

impl CharacteristicGrid {
    /// Rasterize over the domain's own padded bounding box.
    pub fn rasterize(dom: &ShapeDomain, h: f64) -> Result<Self, DomainError> {
        let bb = dom.bbox().pad(2.0 * h);
        Self::rasterize_in(dom, bb, h)
    }

    /// Rasterize over a caller-supplied box (shared-raster comparisons).
    pub fn rasterize_in(dom: &ShapeDomain, boxr: Rect, h: f64) -> Result<Self, DomainError> {
        assert!(h > 0.0, "resolution must be positive");
        dom.validate()?;
        let dim = if dom.is_planar() { 2 } else { 1 };
        let nx = ((boxr.width() / h).round() as usize).max(1);
        let ny = if dim == 2 { ((boxr.height() / h).round() as usize).max(1) } else { 1 };
        let mut cells = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let p = Vec2::new(
                    boxr.lo.x + (i as f64 + 0.5) * h,
                    if dim == 2 { boxr.lo.y + (j as f64 + 0.5) * h } else { 0.0 },
                );
                cells[j * nx + i] = dom.contains_point(p);
            }
        }
        Ok(CharacteristicGrid { origin: boxr.lo, h, nx, ny, dim, cells })
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// `h^N` times the member-cell count.
    pub fn area_estimate(&self) -> f64 {
        self.count() as f64 * self.h.powi(self.dim as i32)
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        Vec2::new(
            self.origin.x + (i as f64 + 0.5) * self.h,
            if self.dim == 2 { self.origin.y + (j as f64 + 0.5) * self.h } else { 0.0 },
        )
    }

    pub fn complement(&self) -> Vec<bool> {
        self.cells.iter().map(|&c| !c).collect()
    }

    /// Member cells with a non-member 4-neighbor (outside counts as empty).
    pub fn boundary_cells(&self) -> Vec<bool> {
        let (nx, ny) = (self.nx, self.ny);
        let mut out = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                if !self.cells[j * nx + i] {
                    continue;
                }
                let mut edge = i == 0 || i == nx - 1 || (ny > 1 && (j == 0 || j == ny - 1));
                if !edge && i > 0 && !self.cells[j * nx + i - 1] {
                    edge = true;
                }
                if !edge && i + 1 < nx && !self.cells[j * nx + i + 1] {
                    edge = true;
                }
                if !edge && j > 0 && !self.cells[(j - 1) * nx + i] {
                    edge = true;
                }
                if !edge && j + 1 < ny && !self.cells[(j + 1) * nx + i] {
                    edge = true;
                }
                out[j * nx + i] = edge;
            }
        }
        out
    }

    /// Member cells plus their 8-neighborhood.
    pub fn closure_cells(&self) -> Vec<bool> {
        let (nx, ny) = (self.nx, self.ny);
        let mut out = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                if !self.cells[j * nx + i] {
                    continue;
                }
                for dj in -1i64..=1 {
                    for di in -1i64..=1 {
                        let (ii, jj) = (i as i64 + di, j as i64 + dj);
                        if ii >= 0 && jj >= 0 && (ii as usize) < nx && (jj as usize) < ny {
                            out[jj as usize * nx + ii as usize] = true;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn cell_points(&self, set: &[bool]) -> Vec<Point> {
        let mut pts = Vec::new();
        for j in 0..self.ny {
            for i in 0..self.nx {
                if set[j * self.nx + i] {
                    pts.push(self.center(i, j));
                }
            }
        }
        pts
    }

    /// Exact Euclidean distance (length units) from every cell center to the
    /// nearest center in `set`. `FAR`-scaled sentinel when `set` is empty.
    pub fn distances_to(&self, set: &[bool]) -> Vec<f64> {
        let sq = edt_squared(set, self.nx, self.ny);
        sq.into_iter().map(|d| d.sqrt() * self.h).collect()
    }

    /// `max_{a in from} d(a, to)` over cell centers.
    pub fn directed_hausdorff(&self, from: &[bool], to: &[bool]) -> f64 {
        let dist = self.distances_to(to);
        let mut worst: f64 = 0.0;
        for (k, &f) in from.iter().enumerate() {
            if f {
                worst = worst.max(dist[k]);
            }
        }
        worst
    }

    pub fn hausdorff_between(&self, a: &[bool], b: &[bool]) -> f64 {
        self.directed_hausdorff(a, b).max(self.directed_hausdorff(b, a))
    }

    /// Measure of the symmetric difference with a grid on the same raster.
    pub fn symdiff_measure(&self, other: &Self) -> f64 {
        assert_eq!(self.cells.len(), other.cells.len(), "rasters must match");
        let n = self
            .cells
            .iter()
            .zip(&other.cells)
            .filter(|(a, b)| a != b)
            .count();
        n as f64 * self.h.powi(self.dim as i32)
    }

    /// Member cells at distance > `r` from the complement: the erosion used
    /// as a compact probe inside the open set.
    pub fn erode(&self, r: f64) -> Vec<bool> {
        let d = self.distances_to(&self.complement());
        self.cells
            .iter()
            .zip(&d)
            .map(|(&c, &dd)| c && dd > r)
            .collect()
    }

    /// Cells at distance > `r` from the closure: compact probes in the
    /// complement of the closure.
    pub fn erode_complement(&self, r: f64) -> Vec<bool> {
        let d = self.distances_to(&self.closure_cells());
        d.iter().map(|&dd| dd > r).collect()
    }

    pub fn any(set: &[bool]) -> bool {
        set.iter().any(|&c| c)
    }

    /// `a` a subset of `b`, cellwise.
    pub fn subset(a: &[bool], b: &[bool]) -> bool {
        a.iter().zip(b).all(|(&x, &y)| !x || y)
    }

    pub fn intersects(a: &[bool], b: &[bool]) -> bool {
        a.iter().zip(b).any(|(&x, &y)| x && y)
    }
}

/// Squared Euclidean distance transform in cell units
/// (Felzenszwalb–Huttenlocher lower envelope of parabolas; exact).
pub fn edt_squared(set: &[bool], nx: usize, ny: usize) -> Vec<f64> {
    assert_eq!(set.len(), nx * ny);
    let mut field: Vec<f64> = set.iter().map(|&s| if s { 0.0 } else { FAR }).collect();
    // Columns first.
    let mut col = vec![0.0f64; ny.max(nx)];
    if ny > 1 {
        for i in 0..nx {
            for j in 0..ny {
                col[j] = field[j * nx + i];
            }
            let t = dt_1d(&col[..ny]);
            for j in 0..ny {
                field[j * nx + i] = t[j];
            }
        }
    }
    // Then rows.
    for j in 0..ny {
        col[..nx].copy_from_slice(&field[j * nx..(j + 1) * nx]);
        let t = dt_1d(&col[..nx]);
        field[j * nx..(j + 1) * nx].copy_from_slice(&t);
    }
    field
}

fn dt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0f64; n];
    if n == 1 {
        d[0] = f[0];
        return d;
    }
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    v[0] = 0;
    z[0] = -FAR;
    z[1] = FAR;
    for q in 1..n {
        let mut s;
        loop {
            let p = v[k];
            s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                break;
            }
        }
        if s <= z[k] && k == 0 {
            // New parabola dominates everywhere.
            v[0] = q;
            z[0] = -FAR;
            z[1] = FAR;
        } else {
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = FAR;
        }
    }
    k = 0;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        d[q] = dq * dq + f[p];
    }
    d
}
