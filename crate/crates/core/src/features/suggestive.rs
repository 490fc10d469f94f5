//! Suggestive contours: zeros of the radial curvature (the normal curvature
//! along the projected view direction) where it is increasing toward the
//! camera.

use crate::ddg::{self, CurvatureField};
use crate::error::GeometryError;
use crate::features::{Threshold, ViewContext};
use crate::field::ScalarField;
use crate::isoline::{self, FilterMode, LineSet, Method};
use crate::mesh::{Adjacency, MeshBuffer, NormalField};

/// Vertices whose projected view vector is shorter than this face the
/// camera dead-on; the radial direction is undefined there.
pub const MIN_TANGENT_VIEW: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct SuggestiveParams {
    /// Threshold on the derivative `D_w kappa_r / |w|`; points below it are
    /// dropped before hysteresis growing.
    pub tau: Threshold,
    /// Optional hysteresis pair `(low, high)` on the same quantity; when
    /// absent, `tau` acts as a plain per-point cutoff.
    pub hysteresis: Option<(Threshold, Threshold)>,
}

impl Default for SuggestiveParams {
    fn default() -> Self {
        SuggestiveParams {
            tau: Threshold::Normalized(0.05),
            hysteresis: None,
        }
    }
}

/// The radial curvature per vertex: Euler's formula along the normalized
/// projection of the view vector. Vertices facing the camera dead-on are
/// reported in the mask as unusable.
pub fn radial_curvature_field(
    curvature: &CurvatureField,
    ctx: &ViewContext,
) -> (ScalarField, Vec<bool>) {
    let nv = curvature.kappa1.len();
    let mut values = Vec::with_capacity(nv);
    let mut valid = Vec::with_capacity(nv);
    for v in 0..nv as u32 {
        let w = ctx.tangent_view(v);
        let len = w.norm();
        if len < MIN_TANGENT_VIEW {
            values.push(0.0);
            valid.push(false);
        } else {
            values.push(curvature.normal_curvature(v, w / len));
            valid.push(true);
        }
    }
    (ScalarField(values), valid)
}

/// Extracts suggestive contours: the zero set of the radial curvature on
/// triangles where its derivative along the projected view direction is
/// positive, filtered by a threshold (plus optional hysteresis) on that
/// derivative.
pub fn suggestive_contours(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    normals: &NormalField,
    curvature: &CurvatureField,
    ctx: &ViewContext,
    params: &SuggestiveParams,
) -> Result<LineSet, GeometryError> {
    let (kappa_r, valid) = radial_curvature_field(curvature, ctx);
    let grad_kr = ddg::vertex_gradient(mesh, adjacency, normals, &kappa_r)?;
    // derivative along the unit projected view direction
    let nv = mesh.vertex_count();
    let mut derivative = Vec::with_capacity(nv);
    for v in 0..nv as u32 {
        if !valid[v as usize] {
            derivative.push(0.0);
            continue;
        }
        let w = ctx.tangent_view(v);
        derivative.push(grad_kr.value(v).dot(&(w / w.norm())));
    }
    let derivative = ScalarField(derivative);

    let excluded = valid.iter().filter(|ok| !**ok).count();
    let keep = |t: usize| -> bool {
        let tri = mesh.triangles()[t];
        if tri.iter().any(|&v| !valid[v as usize]) {
            return false;
        }
        let mean: f64 = tri
            .iter()
            .map(|&v| derivative.value(v))
            .sum::<f64>()
            / 3.0;
        mean > 0.0
    };
    let mut lines = isoline::extract_zero_set(mesh, &kappa_r, keep);
    lines.method = Method::SuggestiveContour;
    if excluded > 0 {
        lines
            .diagnostics
            .push(format!("{excluded} vertices face the camera dead-on"));
    }
    isoline::assign_strengths(&mut lines, &derivative);

    let filtered = match params.hysteresis {
        Some((low, high)) => {
            let low = low.resolve(&derivative);
            let high = high.resolve(&derivative);
            isoline::filter_lines(lines, FilterMode::Hysteresis { low, high })?
        }
        None => {
            let tau = params.tau.resolve(&derivative);
            isoline::filter_lines(
                lines,
                FilterMode::Hysteresis {
                    low: tau,
                    high: tau,
                },
            )?
        }
    };
    Ok(filtered)
}
