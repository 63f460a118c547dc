//! Isosurface extraction with smooth multi-sided patches.
//!
//! A scalar grid is sliced along its three axial plane families. In every
//! slice the isolines are traced and turned into C¹ chains of cubic Hermite
//! curves whose tangents come from circular arcs fitted through consecutive
//! edge crossings. Every grid cell then gathers the curves on its six faces
//! into closed loops of three to six sides, and each loop is filled with a
//! transfinite patch. Patches can be blended either from the boundary curves
//! alone (G⁰) or with tangential ribbons (G¹) so that neighbouring patches
//! share tangent planes.
//!
//! The [`mcbaseline`] module provides a classic marching cubes extractor on
//! the same sign grid, and [`metrics`] compares the two representations.
//!
//! ```
//! use marching_surfaces::prelude::*;
//!
//! let grid = GridSpec::new([7, 7, 7], [-3.0; 3], [1.0; 3]).unwrap();
//! let field = make_analytic("sphere", &[1.0], grid).unwrap();
//! let surface = Surface::extract(&field, 0.0, &SurfaceOptions::default()).unwrap();
//! assert_eq!(surface.patches.len(), 8);
//! ```

pub mod cellloop;
pub mod cli;
pub mod curvenet;
pub mod error;
pub mod field;
pub mod mcbaseline;
pub mod mesh;
pub mod metrics;
pub mod patch;
pub mod surface;

pub use error::{Error, Result};

/// World-space vector type used throughout the crate.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Version tag written into every JSON artifact as `"ms-version"`.
pub const FORMAT_VERSION: u32 = 1;

pub mod prelude {
    pub use crate::cellloop::{CellLoop, LoopSet};
    pub use crate::curvenet::{
        fit_arc_tangent, AxialPlane, CurveNetwork, HermiteSegment, TangentParams,
    };
    pub use crate::field::{classify, make_analytic, GridSpec, ScalarField, Sign, SignGrid};
    pub use crate::mcbaseline::marching_cubes;
    pub use crate::mesh::{MeshFormat, TriangleMesh};
    pub use crate::patch::{MultiSidedPatch, PatchMode, PatchParams};
    pub use crate::surface::{Surface, SurfaceOptions};
    pub use crate::Vec3;
}
