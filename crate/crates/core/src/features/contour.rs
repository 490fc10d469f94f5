//! Occluding contours: the locus where the normal and view vector are
//! perpendicular.

use crate::features::{Camera, ViewContext};
use crate::isoline::{self, LineSet, Method};
use crate::mesh::{Adjacency, MeshBuffer, NormalField};

/// Discretization of the contour condition `<n, v> = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContourMode {
    /// Zero set of the interpolated per-vertex field `<n_i, v_i>`; lines
    /// cross triangle interiors.
    #[default]
    Smooth,
    /// Mesh edges whose two incident triangles face the camera with
    /// opposite sign.
    EdgeSign,
}

/// Extracts the contour for the given camera.
pub fn contours(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    normals: &NormalField,
    ctx: &ViewContext,
    camera: &Camera,
    mode: ContourMode,
) -> LineSet {
    match mode {
        ContourMode::Smooth => {
            let field = ctx.facing(normals);
            let mut lines = isoline::extract_zero_set(mesh, &field, |_| true);
            lines.method = Method::Contour;
            for poly in &mut lines.polylines {
                poly.strength = poly.length();
            }
            lines
        }
        ContourMode::EdgeSign => {
            let facing: Vec<f64> = (0..mesh.triangle_count())
                .map(|t| {
                    let centroid = mesh.triangle_centroid(t);
                    let v = camera
                        .view_vector(&centroid)
                        .unwrap_or_else(|_| -camera.forward());
                    mesh.triangle_normal(t).dot(&v)
                })
                .collect();
            let mut edges = Vec::new();
            for (e, &(a, b)) in adjacency.edges().iter().enumerate() {
                let (t0, t1) = adjacency.edge_triangles(e);
                let Some(t1) = t1 else { continue };
                if facing[t0 as usize] * facing[t1 as usize] < 0.0 {
                    edges.push((a, b));
                }
            }
            let mut lines = isoline::chain_mesh_edges(mesh, &edges, Method::Contour);
            for poly in &mut lines.polylines {
                poly.strength = poly.length();
            }
            lines
        }
    }
}
