//! Photic extremum lines: loci where the variation of illumination along
//! its own gradient direction peaks.

use crate::ddg;
use crate::error::GeometryError;
use crate::features::{Threshold, ViewContext};
use crate::field::ScalarField;
use crate::isoline::{self, FilterMode, LineSet, Method};
use crate::mesh::{Adjacency, MeshBuffer, NormalField};

/// Vertices with a gradient magnitude below this have no gradient
/// direction and are excluded.
pub const MIN_GRADIENT: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct PelParams {
    /// Threshold on the line strength `T`, the integral of the gradient
    /// magnitude along the polyline.
    pub tau: Threshold,
}

impl Default for PelParams {
    fn default() -> Self {
        PelParams {
            tau: Threshold::Normalized(0.1),
        }
    }
}

/// Extracts photic extremum lines from the illumination of `ctx`.
///
/// With `g = |grad f|` and `w = grad f / g`, the defining field is
/// `e1 = D_w g`, restricted to triangles where `e2 = D_w e1 < 0`; whole
/// polylines are dropped when their integrated gradient magnitude stays
/// below the threshold.
pub fn photic_extremum_lines(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    normals: &NormalField,
    ctx: &ViewContext,
    params: &PelParams,
) -> Result<LineSet, GeometryError> {
    let grad_f = ddg::vertex_gradient(mesh, adjacency, normals, &ctx.illumination)?;
    let g = grad_f.norms();
    let nv = mesh.vertex_count();
    let valid: Vec<bool> = (0..nv).map(|v| g.0[v] > MIN_GRADIENT).collect();

    let grad_g = ddg::vertex_gradient(mesh, adjacency, normals, &g)?;
    let mut e1 = vec![0.0f64; nv];
    for v in 0..nv {
        if valid[v] {
            let w = grad_f.0[v] / g.0[v];
            e1[v] = grad_g.0[v].dot(&w);
        }
    }
    let e1 = ScalarField(e1);
    let grad_e1 = ddg::vertex_gradient(mesh, adjacency, normals, &e1)?;
    let mut e2 = vec![0.0f64; nv];
    for v in 0..nv {
        if valid[v] {
            let w = grad_f.0[v] / g.0[v];
            e2[v] = grad_e1.0[v].dot(&w);
        }
    }

    let keep = |t: usize| -> bool {
        let tri = mesh.triangles()[t];
        if tri.iter().any(|&v| !valid[v as usize]) {
            return false;
        }
        let mean: f64 = tri.iter().map(|&v| e2[v as usize]).sum::<f64>() / 3.0;
        mean < 0.0
    };
    let mut lines = isoline::extract_zero_set(mesh, &e1, keep);
    lines.method = Method::PhoticExtremum;
    let excluded = valid.iter().filter(|ok| !**ok).count();
    if excluded > 0 {
        lines
            .diagnostics
            .push(format!("{excluded} vertices with vanishing illumination gradient"));
    }
    isoline::assign_strengths(&mut lines, &g);
    let tau = params.tau.resolve(&g);
    isoline::filter_lines(lines, FilterMode::DropBelow(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{view_context, Camera, Light, LightRig};
    use crate::isoline::point_set_distance;
    use crate::shapes;
    use nalgebra::{Point3, Vector3};

    fn setup(mesh: &MeshBuffer) -> (Adjacency, NormalField) {
        let adj = Adjacency::build(mesh).unwrap();
        let normals = NormalField::compute(mesh, &adj).unwrap();
        (adj, normals)
    }

    #[test]
    fn plane_under_headlight_is_empty() {
        let mesh = shapes::planar_grid(8, 1.0);
        let (adj, normals) = setup(&mesh);
        let camera = Camera::orthographic(
            Point3::new(0.5, 0.5, 4.0),
            Point3::new(0.5, 0.5, 0.0),
            Vector3::y(),
        );
        let ctx = view_context(&mesh, &normals, &camera, &LightRig::headlight()).unwrap();
        let lines =
            photic_extremum_lines(&mesh, &adj, &normals, &ctx, &PelParams::default()).unwrap();
        assert!(lines.is_empty());
    }

    #[test]
    fn sharp_cube_oblique_light_marks_edges() {
        let mesh = shapes::subdivided_cube(1.0, 10);
        let (adj, normals) = setup(&mesh);
        let camera = Camera::perspective(
            Point3::new(3.0, 2.0, 4.0),
            Point3::origin(),
            Vector3::y(),
        );
        let rig = LightRig {
            lights: vec![Light::Directional {
                toward_light: Vector3::new(1.0, 2.0, 3.0),
                intensity: 1.0,
            }],
        };
        let ctx = view_context(&mesh, &normals, &camera, &rig).unwrap();
        let lines = photic_extremum_lines(
            &mesh,
            &adj,
            &normals,
            &ctx,
            &PelParams {
                tau: Threshold::Normalized(0.2),
            },
        )
        .unwrap();
        assert!(!lines.is_empty(), "no photic extremum lines on the cube");
        // illumination jumps across the cube edges: line points concentrate
        // near the edge frame
        let mut near_frame = 0usize;
        let mut total = 0usize;
        for poly in &lines.polylines {
            for p in &poly.points {
                total += 1;
                let extreme = (0..3)
                    .filter(|&d| p.position[d].abs() > 1.0 - 0.35)
                    .count();
                if extreme >= 2 {
                    near_frame += 1;
                }
            }
        }
        assert!(
            near_frame as f64 > 0.7 * total as f64,
            "{near_frame}/{total} points near the edge frame"
        );
    }

    #[test]
    fn doubled_lights_shift_threshold_linearly() {
        // duplicating the light doubles f and g; the zero set of e1 is
        // unchanged and the strength doubles, so doubling tau recovers the
        // same selection
        let mesh = shapes::noisy_icosphere(3, 0.015, 11);
        let (adj, normals) = setup(&mesh);
        let camera = Camera::perspective(
            Point3::new(0.5, 1.0, 4.0),
            Point3::origin(),
            Vector3::y(),
        );
        let tau = 0.05;
        let single = view_context(&mesh, &normals, &camera, &LightRig::headlight()).unwrap();
        let double = view_context(
            &mesh,
            &normals,
            &camera,
            &LightRig {
                lights: vec![
                    Light::Headlight { intensity: 1.0 },
                    Light::Headlight { intensity: 1.0 },
                ],
            },
        )
        .unwrap();
        let lines_single = photic_extremum_lines(
            &mesh,
            &adj,
            &normals,
            &single,
            &PelParams {
                tau: Threshold::Raw(tau),
            },
        )
        .unwrap();
        let lines_double = photic_extremum_lines(
            &mesh,
            &adj,
            &normals,
            &double,
            &PelParams {
                tau: Threshold::Raw(2.0 * tau),
            },
        )
        .unwrap();
        assert_eq!(lines_single.polylines.len(), lines_double.polylines.len());
        assert!(!lines_single.is_empty());
        assert!(point_set_distance(&lines_single, &lines_double) < 1e-9);
        for (a, b) in lines_single
            .polylines
            .iter()
            .zip(lines_double.polylines.iter())
        {
            assert!((2.0 * a.strength - b.strength).abs() < 1e-9 * b.strength.abs().max(1.0));
        }
    }
}
