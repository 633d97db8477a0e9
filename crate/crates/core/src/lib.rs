//! Shape analysis around a convex reference body: normal-property checkers,
//! Hausdorff/compact/characteristic convergence diagnostics, boundary
//! thickness fields with bilipschitz certificates, constrained perimeter
//! minimization, and disk Green-function potentials.

pub mod convex;
pub mod domain;
pub mod gallery;
pub mod geom;
pub mod gnp;
pub mod metric;
pub mod potential;
pub mod raster;
pub mod sampler;
pub mod thickness;
pub mod varopt;

pub use convex::ConvexBody;
pub use domain::{BoundarySample, Region, ShapeDomain};
pub use geom::{Point, Rect, Vec2, DEFAULT_TOL};
pub use gnp::CheckReport;
pub use raster::CharacteristicGrid;
