//! Ridge and valley lines: extrema of the dominant principal curvature
//! along its own direction.
//!
//! Principal directions carry no global sign, so the first-derivative field
//! `e1 = D_{k1} kappa1` is assembled per triangle: the three corner
//! directions are sign-aligned to the first corner, the per-vertex gradient
//! of `kappa1` is dotted with the aligned direction per corner, and the
//! second derivative is the in-triangle gradient of those corner values
//! dotted with the aligned directions again. Every quantity entering the
//! zero-set extraction is invariant under the residual global flip.

use crate::ddg::{self, CurvatureField};
use crate::error::GeometryError;
use crate::features::Threshold;
use crate::field::ScalarField;
use crate::isoline::{self, FilterMode, LineSet, Method, Polarity};
use crate::mesh::{Adjacency, MeshBuffer, NormalField};

/// Vertices with `|kappa1 - kappa2|` below this are treated as umbilic and
/// excluded from the zero-set support.
pub const UMBILIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct RidgeValleyParams {
    /// Strength threshold for ridge polylines (curvature line integral).
    pub tau_ridge: Threshold,
    /// Strength threshold for valley polylines.
    pub tau_valley: Threshold,
}

impl Default for RidgeValleyParams {
    fn default() -> Self {
        RidgeValleyParams {
            tau_ridge: Threshold::Normalized(0.3),
            tau_valley: Threshold::Normalized(0.3),
        }
    }
}

/// Extracts ridge and valley lines, filtered by the integral of `|kappa1|`
/// along each polyline.
pub fn ridges_valleys(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    normals: &NormalField,
    curvature: &CurvatureField,
    params: &RidgeValleyParams,
) -> Result<LineSet, GeometryError> {
    let grad_k1 = ddg::vertex_gradient(mesh, adjacency, normals, &curvature.kappa1_field())?;

    let nt = mesh.triangle_count();
    let mut corner_e1 = vec![[0.0f64; 3]; nt];
    let mut ridge_keep = vec![false; nt];
    let mut valley_keep = vec![false; nt];
    let mut umbilic_excluded = 0usize;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let umbilic = tri
            .iter()
            .any(|&v| curvature.is_umbilic(v, UMBILIC_TOL));
        if umbilic {
            umbilic_excluded += 1;
            continue;
        }
        // sign-align the corner directions to the first corner's choice
        let reference = curvature.dir1[tri[0] as usize];
        let mut dirs = [reference; 3];
        for k in 1..3 {
            let d = curvature.dir1[tri[k] as usize];
            dirs[k] = if d.dot(&reference) < 0.0 { -d } else { d };
        }
        let mut e1 = [0.0f64; 3];
        for k in 0..3 {
            e1[k] = grad_k1.value(tri[k]).dot(&dirs[k]);
        }
        corner_e1[t] = e1;
        // second derivative from the in-triangle gradient of e1
        let pts = mesh.triangle_points(t);
        let Ok(grad_e1) = ddg::triangle_gradient(&pts, e1) else {
            continue;
        };
        let e2 = (0..3).map(|k| grad_e1.dot(&dirs[k])).sum::<f64>() / 3.0;
        let kappa_mean = tri
            .iter()
            .map(|&v| curvature.kappa1[v as usize])
            .sum::<f64>()
            / 3.0;
        ridge_keep[t] = e2 < 0.0 && kappa_mean > 0.0;
        valley_keep[t] = e2 > 0.0 && kappa_mean < 0.0;
    }

    let scale = corner_e1
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let weight = ScalarField(curvature.kappa1.iter().map(|k| k.abs()).collect());

    let mut out = LineSet::empty(Method::RidgeValley);
    if umbilic_excluded > 0 {
        out.diagnostics
            .push(format!("{umbilic_excluded} triangles touch umbilic vertices"));
    }
    for (polarity, keep, tau) in [
        (Polarity::Ridge, &ridge_keep, params.tau_ridge),
        (Polarity::Valley, &valley_keep, params.tau_valley),
    ] {
        let mut lines =
            isoline::extract_zero_set_corners(mesh, &corner_e1, scale, |t| keep[t], Method::RidgeValley);
        isoline::assign_strengths(&mut lines, &weight);
        let tau = tau.resolve(&weight);
        let lines = isoline::filter_lines(lines, FilterMode::DropBelow(tau))?;
        for mut poly in lines.polylines {
            poly.polarity = polarity;
            out.polylines.push(poly);
        }
        out.diagnostics.extend(lines.diagnostics);
    }
    Ok(out)
}
