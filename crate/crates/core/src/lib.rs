//! Discrete differential geometry on triangle meshes and the feature-line
//! extraction methods built on top of it: contours, crease lines, ridges and
//! valleys, suggestive contours, apparent ridges, photic extremum lines,
//! demarcating curves, and Laplacian lines.
//!
//! The crate is organized around a small pipeline:
//!
//! 1. [`mesh`] loads and validates an indexed triangle mesh and derives
//!    adjacency and vertex normals.
//! 2. [`ddg`] estimates per-vertex shape operators, principal curvatures and
//!    directions, curvature derivatives, and discrete gradients.
//! 3. [`laplace`] builds the five discrete Laplace-Beltrami weight schemes
//!    and checks their structural properties.
//! 4. [`isoline`] extracts zero sets of per-vertex scalar fields as polylines
//!    and filters them by integrated strength.
//! 5. [`features`] implements the eight extraction methods.
//!
//! [`oracle`] provides analytic parametric surfaces with exact differential
//! geometry, used as ground truth throughout the test suites.

pub mod ddg;
pub mod error;
pub mod features;
pub mod field;
pub mod io;
pub mod isoline;
pub mod laplace;
pub mod mesh;
pub mod oracle;
pub mod shapes;
pub mod smoothing;

pub use error::{GeometryError, MeshError};
pub use field::{ScalarField, VectorField};
pub use isoline::{LineSet, OnEdgePoint, Polarity, Polyline};
pub use mesh::{Adjacency, MeshBuffer, NormalField};
