//! Edge unfoldings of prismatoids and convex patches.
//!
//! The crate builds prismatoids and convex polyhedral patches, lays them out
//! in the plane (band, petal and spanning-tree unfoldings), and certifies
//! whether a layout overlaps. [`unfold::petal_unfold_topless`] always
//! produces a nonoverlapping petal unfolding of a topless prismatoid.
//!
//! ```
//! use patchfold::{geom::Point2, prismatoid::{regular_polygon, Prismatoid}};
//! use patchfold::{overlap::layout_overlaps, unfold::petal_unfold_topless};
//!
//! let base = regular_polygon(5, 2.0, 0.0, Point2::default());
//! let top = regular_polygon(4, 1.0, 0.3, Point2::new(0.2, 0.1));
//! let p = Prismatoid::new(top, base, 0.8).unwrap();
//! let unf = petal_unfold_topless(&p).unwrap();
//! assert!(!layout_overlaps(&unf.layout, &p.tol).overlapping);
//! ```

pub mod error;
pub mod fixtures;
pub mod geom;
pub mod io;
pub mod overlap;
pub mod polyhedron;
pub mod prismatoid;
pub mod regions;
pub mod search;
pub mod svg;
pub mod unfold;

pub use error::{Error, Result};
pub use geom::{Point2, Point3, Tolerance};
pub use polyhedron::{ConvexPatch, ConvexPolyhedron, NeighborhoodKind};
pub use prismatoid::{FaceKind, FaceOrientation, HullStructure, LateralFace, Prismatoid};
pub use unfold::{Layout, PetalChoice};
