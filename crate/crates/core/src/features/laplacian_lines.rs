//! Laplacian lines: zero crossings of the Laplacian of the illumination,
//! evaluated through the precomputed vector Laplacian of the normals
//! (`L f = <L n, v>` for the headlight term), gated by the illumination
//! gradient magnitude.

use crate::ddg;
use crate::error::GeometryError;
use crate::features::{Threshold, ViewContext};
use crate::field::ScalarField;
use crate::isoline::{self, LineSet, Method};
use crate::laplace::{vector_laplacian_of_normals, SparseLaplacian};
use crate::mesh::{Adjacency, MeshBuffer, NormalField};

#[derive(Debug, Clone, Copy)]
pub struct LaplacianLineParams {
    /// Gradient-magnitude gate: a triangle enters the zero set only when a
    /// majority of its vertices satisfy `|grad f| >= tau`.
    pub tau: Threshold,
}

impl Default for LaplacianLineParams {
    fn default() -> Self {
        LaplacianLineParams {
            tau: Threshold::Normalized(0.4),
        }
    }
}

/// Extracts Laplacian lines using a prebuilt weight operator (the intended
/// scheme is Belkin; any scheme is accepted).
pub fn laplacian_lines(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    normals: &NormalField,
    laplacian: &SparseLaplacian,
    ctx: &ViewContext,
    params: &LaplacianLineParams,
) -> Result<LineSet, GeometryError> {
    let delta_n = vector_laplacian_of_normals(laplacian, normals);
    let nv = mesh.vertex_count();
    let field = ScalarField(
        (0..nv as u32)
            .map(|v| delta_n.value(v).dot(&ctx.view(v)))
            .collect(),
    );
    // headlight illumination and its gradient magnitude
    let f = ctx.facing(normals);
    let grad_f = ddg::vertex_gradient(mesh, adjacency, normals, &f)?;
    let grad_mag = grad_f.norms();
    let tau = params.tau.resolve(&grad_mag);
    let keep = |t: usize| -> bool {
        let hits = mesh.triangles()[t]
            .iter()
            .filter(|&&v| grad_mag.value(v) >= tau)
            .count();
        hits >= 2
    };
    let mut lines = isoline::extract_zero_set(mesh, &field, keep);
    lines.method = Method::LaplacianLine;
    isoline::assign_strengths(&mut lines, &grad_mag);
    Ok(lines)
}
