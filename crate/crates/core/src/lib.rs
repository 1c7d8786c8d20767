//! Combinatorial core for colouring maximal planar triangulations.
//!
//! A triangulation of the sphere is stored as an oriented triangle list.
//! On top of that data model this crate provides:
//!
//! * the three classical colouring schemes — vertex 4-colourings, Tait
//!   edge 3-colourings and mod-3 triangle orientations — and the exact
//!   conversions between them ([`schemes`]),
//! * triangulated polygons on a base edge, ear machinery, genealogical
//!   enumeration and orientation decoding ([`polygon`]),
//! * Hamilton-circuit search and the split of a triangulation into an
//!   inner and an outer polygon ([`hamilton`]),
//! * a 4-colouring solver that reconstructs the graph ear by ear and
//!   searches for an orientation zeroing every interior vertex
//!   ([`solver`]),
//! * exhaustive empirical audits of the counting identities and
//!   structural claims the solver relies on ([`audit`]).
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI
//! live in the companion `heawood-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod audit;
pub mod graph;
pub mod hamilton;
pub mod polygon;
pub mod schemes;
pub mod solver;

pub use graph::{EdgeOcc, GraphError, SeparatingTriangle, SplitOff, TriangleHost, Triangulation, VertexId};
pub use polygon::{PolygonError, PolygonTriangulation};
pub use schemes::{EdgeColoring, OrientationAssignment, SchemeError, VertexColor, VertexColoring, VertexNumbering};
