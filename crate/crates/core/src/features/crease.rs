//! Crease lines: mesh edges whose dihedral angle is large. View-independent
//! and restricted to edges.

use crate::isoline::{self, LineSet, Method};
use crate::mesh::{Adjacency, MeshBuffer, NormalField};

/// Extracts edges whose incident triangle normals satisfy
/// `<n_1, n_2> <= tau_cos`, i.e. whose dihedral angle reaches the user
/// threshold, chained into polylines. Boundary edges have no dihedral angle
/// and never qualify.
pub fn crease_lines(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    normals: &NormalField,
    tau_cos: f64,
) -> LineSet {
    let mut edges = Vec::new();
    for (e, &(a, b)) in adjacency.edges().iter().enumerate() {
        let (t0, t1) = adjacency.edge_triangles(e);
        let Some(t1) = t1 else { continue };
        let dot = normals
            .triangle(t0 as usize)
            .dot(&normals.triangle(t1 as usize));
        if dot <= tau_cos {
            edges.push((a, b));
        }
    }
    let mut lines = isoline::chain_mesh_edges(mesh, &edges, Method::Crease);
    for poly in &mut lines.polylines {
        poly.strength = poly.length();
    }
    lines
}
