//! Apparent ridges: extrema of the view-dependent curvature along the
//! view-dependent principal direction.
//!
//! The object-space shape operator is composed with the inverse Jacobian of
//! the screen projection; the largest singular value of the composite is
//! the view-dependent curvature `kappa1'`, its singular direction mapped
//! back through the vertex tangent basis drives a finite-difference
//! derivative on the one-ring (perpendicular feet on the opposite edges).
//! Zero crossings are detected on edges whose endpoint directions disagree
//! by more than 90 degrees, kept only when both directions point at the
//! crossing (a maximum), thresholded on `kappa1'`, and tagged with the sign
//! of the object-space curvature.

use nalgebra::{Matrix2, Point3, Vector3};

use crate::ddg::CurvatureField;
use crate::error::GeometryError;
use crate::features::{Camera, Threshold, ViewContext};
use crate::field::ScalarField;
use crate::isoline::{self, LineSet, Method, OnEdgePoint, Polarity};
use crate::mesh::{Adjacency, MeshBuffer};
use crate::oracle::sym_eigen2;

/// Vertices closer to the contour than this in `|<n, v>|` are excluded;
/// the projection Jacobian is near-singular there.
pub const CONTOUR_BAND: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub struct ApparentRidgeParams {
    /// Threshold on the view-dependent curvature at the crossing.
    pub tau: Threshold,
}

impl Default for ApparentRidgeParams {
    fn default() -> Self {
        ApparentRidgeParams {
            tau: Threshold::Normalized(0.4),
        }
    }
}

/// Per-vertex view-dependent curvature data.
#[derive(Debug, Clone)]
pub struct ViewDependentCurvature {
    /// Largest singular value of `S J_P^{-1}`; zero at excluded vertices.
    pub kappa: ScalarField,
    /// Object-space image of the singular direction; `None` at excluded
    /// vertices (contour band or singular projection).
    pub direction: Vec<Option<Vector3<f64>>>,
}

/// Computes `kappa1'` and its direction per vertex. Vertices inside the
/// contour band are masked out.
pub fn view_dependent_curvature(
    curvature: &CurvatureField,
    ctx: &ViewContext,
    camera: &Camera,
) -> ViewDependentCurvature {
    let (v1, v2) = camera.screen_basis();
    let nv = curvature.kappa1.len();
    let mut kappa = Vec::with_capacity(nv);
    let mut direction = Vec::with_capacity(nv);
    for v in 0..nv as u32 {
        let n = curvature.frames.n[v as usize];
        if n.dot(&ctx.view(v)).abs() < CONTOUR_BAND {
            kappa.push(0.0);
            direction.push(None);
            continue;
        }
        let x = curvature.frames.x[v as usize];
        let y = curvature.frames.y[v as usize];
        let jac = Matrix2::new(v1.dot(&x), v1.dot(&y), v2.dot(&x), v2.dot(&y));
        let Some(jac_inv) = jac.try_inverse() else {
            kappa.push(0.0);
            direction.push(None);
            continue;
        };
        let s_prime = curvature.shape[v as usize].as_matrix() * jac_inv;
        // largest singular value via the eigenvalues of S'^T S'
        let q = s_prime.transpose() * s_prime;
        let (l_max, _, t_prime, _) = sym_eigen2(q.m11, 0.5 * (q.m12 + q.m21), q.m22);
        let k = l_max.max(0.0).sqrt();
        kappa.push(k);
        direction.push(Some(
            (t_prime.x * x + t_prime.y * y).normalize(),
        ));
    }
    ViewDependentCurvature {
        kappa: ScalarField(kappa),
        direction,
    }
}

/// Derivative of `kappa1'` along `t` at vertex `v` by finite differences
/// against the feet of the perpendicular dropped from the ray along `t`
/// onto the opposite edges of the incident triangles.
fn derivative_along(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    vdc: &ViewDependentCurvature,
    normal: Vector3<f64>,
    v: u32,
    t: Vector3<f64>,
) -> Option<f64> {
    let p = mesh.position(v);
    let t_perp = normal.cross(&t);
    let mut acc = 0.0;
    let mut count = 0usize;
    for &tri in adjacency.vertex_triangles(v) {
        let tri = mesh.triangles()[tri as usize];
        let corner = tri.iter().position(|&i| i == v).unwrap();
        let a = tri[(corner + 1) % 3];
        let b = tri[(corner + 2) % 3];
        if vdc.direction[a as usize].is_none() || vdc.direction[b as usize].is_none() {
            continue;
        }
        let pa = mesh.position(a);
        let pb = mesh.position(b);
        let denom = (pb - pa).dot(&t_perp);
        if denom.abs() < 1e-14 {
            continue;
        }
        let s = (p - pa).dot(&t_perp) / denom;
        if !(0.0..=1.0).contains(&s) {
            continue;
        }
        let foot = Point3::from(pa.coords * (1.0 - s) + pb.coords * s);
        let along = (foot - p).dot(&t);
        if along.abs() < 1e-12 {
            continue;
        }
        let k_foot =
            (1.0 - s) * vdc.kappa.value(a) + s * vdc.kappa.value(b);
        acc += (k_foot - vdc.kappa.value(v)) / along;
        count += 1;
    }
    if count == 0 {
        None
    } else {
        Some(acc / count as f64)
    }
}

/// Extracts apparent ridges for the given camera.
pub fn apparent_ridges(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    curvature: &CurvatureField,
    ctx: &ViewContext,
    camera: &Camera,
    params: &ApparentRidgeParams,
) -> Result<LineSet, GeometryError> {
    let vdc = view_dependent_curvature(curvature, ctx, camera);
    let nv = mesh.vertex_count();

    // orient each direction toward increasing kappa1' and keep the
    // (non-negative) derivative
    let mut dirs: Vec<Option<Vector3<f64>>> = vec![None; nv];
    let mut grow = vec![0.0f64; nv];
    for v in 0..nv as u32 {
        let Some(t) = vdc.direction[v as usize] else {
            continue;
        };
        let n = curvature.frames.n[v as usize];
        let Some(d) = derivative_along(mesh, adjacency, &vdc, n, v, t) else {
            continue;
        };
        if d < 0.0 {
            dirs[v as usize] = Some(-t);
            grow[v as usize] = -d;
        } else {
            dirs[v as usize] = Some(t);
            grow[v as usize] = d;
        }
    }

    let tau = params.tau.resolve(&vdc.kappa);

    // per-edge zero crossings where the endpoint directions disagree
    let mut crossings: Vec<Option<(OnEdgePoint, f64, f64)>> = vec![None; adjacency.edge_count()];
    for (e, &(a, b)) in adjacency.edges().iter().enumerate() {
        let (Some(ta), Some(tb)) = (dirs[a as usize], dirs[b as usize]) else {
            continue;
        };
        if ta.dot(&tb) >= 0.0 {
            continue; // same direction: no crossing
        }
        let da = grow[a as usize];
        let db = grow[b as usize];
        if da + db < 1e-14 {
            continue;
        }
        let s = da / (da + db);
        let point = OnEdgePoint::new(mesh, a, b, s);
        // maximum test: both directions must point toward the crossing
        let pa = mesh.position(a);
        let pb = mesh.position(b);
        if (point.position - pa).dot(&ta) <= 0.0 || (point.position - pb).dot(&tb) <= 0.0 {
            continue;
        }
        let k_cross = point.interpolate(&vdc.kappa);
        if k_cross < tau {
            continue;
        }
        let k_obj = (1.0 - s) * curvature.kappa1[a as usize] + s * curvature.kappa1[b as usize];
        crossings[e] = Some((point, k_cross, k_obj));
    }

    // connect crossings pairwise inside each triangle, split by polarity
    let mut ridge_segments = Vec::new();
    let mut valley_segments = Vec::new();
    let mut skipped_odd = 0usize;
    for (_t, tri) in mesh.triangles().iter().enumerate() {
        let mut found: Vec<&(OnEdgePoint, f64, f64)> = Vec::new();
        for k in 0..3 {
            let a = tri[k];
            let b = tri[(k + 1) % 3];
            if let Some(e) = adjacency.edge_index(a, b) {
                if let Some(c) = &crossings[e] {
                    found.push(c);
                }
            }
        }
        match found.len() {
            2 => {
                let kappa_mean = 0.5 * (found[0].2 + found[1].2);
                let segment = (found[0].0, found[1].0);
                if kappa_mean > 0.0 {
                    ridge_segments.push(segment);
                } else {
                    valley_segments.push(segment);
                }
            }
            0 => {}
            _ => skipped_odd += 1,
        }
    }

    let mut out = LineSet::empty(Method::ApparentRidge);
    let excluded = vdc.direction.iter().filter(|d| d.is_none()).count();
    if excluded > 0 {
        out.diagnostics
            .push(format!("{excluded} vertices in the contour band"));
    }
    if skipped_odd > 0 {
        out.diagnostics
            .push(format!("{skipped_odd} triangles with an odd crossing count"));
    }
    for (polarity, segments) in [
        (Polarity::Ridge, ridge_segments),
        (Polarity::Valley, valley_segments),
    ] {
        let mut lines = isoline::chain_segments(segments, Method::ApparentRidge);
        isoline::assign_strengths(&mut lines, &vdc.kappa);
        for mut poly in lines.polylines {
            poly.polarity = polarity;
            out.polylines.push(poly);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddg::vertex_shape_operators;
    use crate::features::{view_context, LightRig};
    use crate::mesh::NormalField;
    use crate::shapes;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pipeline(mesh: &MeshBuffer) -> (Adjacency, NormalField, CurvatureField) {
        let adj = Adjacency::build(mesh).unwrap();
        let normals = NormalField::compute(mesh, &adj).unwrap();
        let curv = vertex_shape_operators(mesh, &adj, &normals).unwrap();
        (adj, normals, curv)
    }

    #[test]
    fn head_on_plane_reduces_to_object_curvature() {
        // a gently curved patch seen head-on: J_P is near the identity at
        // the front-facing vertex, so kappa1' matches |kappa1|
        let mesh = shapes::icosphere(3);
        let (_, normals, curv) = pipeline(&mesh);
        let camera = Camera::orthographic(
            Point3::new(0.0, 0.0, 6.0),
            Point3::origin(),
            Vector3::y(),
        );
        let ctx = view_context(&mesh, &normals, &camera, &LightRig::headlight()).unwrap();
        let vdc = view_dependent_curvature(&curv, &ctx, &camera);
        // front-facing vertex: normal closest to +z
        let front = (0..mesh.vertex_count() as u32)
            .max_by(|&a, &b| {
                normals
                    .vertex(a)
                    .z
                    .partial_cmp(&normals.vertex(b).z)
                    .unwrap()
            })
            .unwrap();
        let k = vdc.kappa.value(front);
        let k_obj = curv.kappa1[front as usize].abs();
        assert!(
            (k - k_obj).abs() / k_obj < 0.02,
            "kappa1' {k} vs |kappa1| {k_obj}"
        );
    }

    #[test]
    fn sphere_view_dependent_curvature_grows_toward_contour() {
        let mesh = shapes::icosphere(3);
        let (_, normals, curv) = pipeline(&mesh);
        let camera = Camera::orthographic(
            Point3::new(0.0, 0.0, 6.0),
            Point3::origin(),
            Vector3::y(),
        );
        let ctx = view_context(&mesh, &normals, &camera, &LightRig::headlight()).unwrap();
        let vdc = view_dependent_curvature(&curv, &ctx, &camera);
        // oracle: kappa1' = 1 / cos(theta) with theta the normal-view angle
        for v in 0..mesh.vertex_count() as u32 {
            let cos_theta = normals.vertex(v).dot(&ctx.view(v));
            if cos_theta < 0.15 {
                continue; // back-facing or near the contour band
            }
            let expected = 1.0 / cos_theta;
            let got = vdc.kappa.value(v);
            assert!(
                (got - expected).abs() / expected < 0.1,
                "kappa1' {got} vs oracle {expected}"
            );
            assert!(got >= 1.0 - 0.05);
        }
    }

    #[test]
    fn values_stay_finite_across_cameras() {
        let mesh = shapes::rounded_cube(1.0, 0.25, 3);
        let (adj, normals, curv) = pipeline(&mesh);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..8 {
            let eye = Point3::new(
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(2.0..5.0),
            );
            let camera = Camera::perspective(eye, Point3::origin(), Vector3::y());
            let ctx = view_context(&mesh, &normals, &camera, &LightRig::headlight()).unwrap();
            let vdc = view_dependent_curvature(&curv, &ctx, &camera);
            for v in vdc.kappa.values() {
                assert!(v.is_finite());
            }
            let lines = apparent_ridges(
                &mesh,
                &adj,
                &curv,
                &ctx,
                &camera,
                &ApparentRidgeParams::default(),
            )
            .unwrap();
            for poly in &lines.polylines {
                for p in &poly.points {
                    assert!(p.position.coords.iter().all(|c| c.is_finite()));
                }
            }
        }
    }

    #[test]
    fn rounded_cube_lines_near_silhouette_facing_edges() {
        let mesh = shapes::rounded_cube(1.0, 0.2, 4);
        let (adj, normals, curv) = pipeline(&mesh);
        let camera = Camera::perspective(
            Point3::new(3.0, 2.2, 3.8),
            Point3::origin(),
            Vector3::y(),
        );
        let ctx = view_context(&mesh, &normals, &camera, &LightRig::headlight()).unwrap();
        let lines = apparent_ridges(
            &mesh,
            &adj,
            &curv,
            &ctx,
            &camera,
            &ApparentRidgeParams::default(),
        )
        .unwrap();
        assert!(!lines.is_empty(), "no apparent ridges on the rounded cube");
        // points concentrate on the rounded arcs
        let mut on_arc = 0usize;
        let mut total = 0usize;
        for poly in &lines.polylines {
            for p in &poly.points {
                total += 1;
                let beyond = (0..3).filter(|&d| p.position[d].abs() > 0.8).count();
                if beyond >= 2 {
                    on_arc += 1;
                }
            }
        }
        assert!(
            on_arc as f64 > 0.7 * total as f64,
            "{on_arc}/{total} points on arcs"
        );
    }

    #[test]
    fn plane_head_on_identity_projection() {
        // flat grid facing the camera: S' = S = 0, no lines, kappa1' = 0
        let mesh = shapes::planar_grid(6, 1.0);
        let (adj, normals, curv) = pipeline(&mesh);
        let camera = Camera::orthographic(
            Point3::new(0.5, 0.5, 4.0),
            Point3::new(0.5, 0.5, 0.0),
            Vector3::y(),
        );
        let ctx = view_context(&mesh, &normals, &camera, &LightRig::headlight()).unwrap();
        let vdc = view_dependent_curvature(&curv, &ctx, &camera);
        for v in 0..mesh.vertex_count() as u32 {
            assert_relative_eq!(vdc.kappa.value(v), 0.0, epsilon = 1e-8);
        }
        let lines = apparent_ridges(
            &mesh,
            &adj,
            &curv,
            &ctx,
            &camera,
            &ApparentRidgeParams::default(),
        )
        .unwrap();
        assert!(lines.is_empty());
    }
}
