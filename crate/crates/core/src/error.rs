//! Error types shared by all geometry stages.

use thiserror::Error;

/// Errors produced while parsing or validating mesh input.
#[derive(Debug, Error)]
pub enum MeshError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex index {index} out of range (vertex count {count})")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("degenerate triangle {triangle}: {reason}")]
    DegenerateTriangle { triangle: usize, reason: String },
    #[error("non-manifold edges (more than two incident triangles): {edges:?}")]
    NonManifold { edges: Vec<(u32, u32)> },
    #[error("inconsistent orientation across edge ({}, {})", edge.0, edge.1)]
    InconsistentOrientation { edge: (u32, u32) },
    #[error("empty mesh")]
    Empty,
    #[error("isolated vertex {0}")]
    IsolatedVertex(u32),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Errors produced by differential operators and feature extraction.
#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("singular metric at parameter point ({0}, {1})")]
    SingularMetric(f64, f64),
    #[error("parameter point ({0}, {1}) outside surface domain")]
    OutsideDomain(f64, f64),
    #[error("direction is not in the tangent plane (normal component {0})")]
    NotTangent(f64),
    #[error("vertex {0} has zero accumulated weight")]
    ZeroWeight(u32),
    #[error("degenerate triangle {0}")]
    DegenerateTriangle(usize),
    #[error("averaged normal vanished at vertex {0}")]
    VanishingNormal(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex {0} coincides with the camera eye")]
    VertexAtEye(u32),
}
