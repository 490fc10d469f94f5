//! Analytic parametric surfaces with exact differential geometry.
//!
//! A fixed catalogue of surfaces (sphere, cylinder, torus, graphs, planes)
//! supplies closed-form first and second derivatives. From these the module
//! derives normals, metric tensors, shape operators, principal curvatures
//! and directions, and exact surface gradients. It serves as the independent
//! ground truth for every discrete operator in the crate.
//!
//! Sign conventions, fixed here and shared with [`crate::ddg`]: closed
//! surfaces carry outward normals, graphs carry upward normals, and the
//! shape operator is `S(v) = D_v n`, so the unit sphere has curvature `+1`.

use nalgebra::{Matrix2, Point3, Vector2, Vector3};

use crate::error::GeometryError;
use crate::mesh::MeshBuffer;

/// Determinant threshold below which the metric is treated as singular.
pub const METRIC_SINGULAR_TOL: f64 = 1e-14;

/// Height function for graph surfaces `(x, y, h(x, y))`.
#[derive(Debug, Clone)]
pub enum GraphFn {
    /// `h = a x^2 + b x y + c y^2`
    Quadratic { a: f64, b: f64, c: f64 },
    /// `h = x^3`
    CubicX,
    /// Sum of isotropic Gaussian bumps.
    Gaussians(Vec<GaussianBump>),
}

#[derive(Debug, Clone, Copy)]
pub struct GaussianBump {
    pub amplitude: f64,
    pub center: (f64, f64),
    pub sigma: f64,
}

impl GraphFn {
    /// Value and derivatives up to second order: `(h, hx, hy, hxx, hxy, hyy)`.
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64, f64, f64, f64, f64) {
        match self {
            GraphFn::Quadratic { a, b, c } => (
                a * x * x + b * x * y + c * y * y,
                2.0 * a * x + b * y,
                b * x + 2.0 * c * y,
                2.0 * a,
                *b,
                2.0 * c,
            ),
            GraphFn::CubicX => (x * x * x, 3.0 * x * x, 0.0, 6.0 * x, 0.0, 0.0),
            GraphFn::Gaussians(bumps) => {
                let mut acc = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
                for b in bumps {
                    let dx = x - b.center.0;
                    let dy = y - b.center.1;
                    let s2 = b.sigma * b.sigma;
                    let g = b.amplitude * (-(dx * dx + dy * dy) / (2.0 * s2)).exp();
                    acc.0 += g;
                    acc.1 += -dx / s2 * g;
                    acc.2 += -dy / s2 * g;
                    acc.3 += (dx * dx / s2 - 1.0) / s2 * g;
                    acc.4 += dx * dy / (s2 * s2) * g;
                    acc.5 += (dy * dy / s2 - 1.0) / s2 * g;
                }
                acc
            }
        }
    }
}

/// Catalogue of analytic surfaces with closed-form derivatives.
#[derive(Debug, Clone)]
pub enum ParametricSurface {
    /// Sphere of radius `r`; `u` azimuth in `[0, 2pi]`, `v` latitude in
    /// `(-pi/2, pi/2)`. Outward normal.
    Sphere { radius: f64 },
    /// Cylinder of radius `r`; `u` azimuth, `v` height in `[0, height]`.
    /// Outward normal; no caps.
    Cylinder { radius: f64, height: f64 },
    /// Torus with tube radius `minor` around a circle of radius `major`;
    /// both parameters in `[0, 2pi]`. Outward normal.
    Torus { major: f64, minor: f64 },
    /// Graph surface `(x, y, h(x, y))` over `[x0, x1] x [y0, y1]`.
    Graph { h: GraphFn, domain: [f64; 4] },
    /// Affine patch `origin + u e1 + v e2` over `[0, 1]^2`. The basis need
    /// not be orthonormal, which makes this the metric-distortion fixture.
    Plane {
        origin: Point3<f64>,
        e1: Vector3<f64>,
        e2: Vector3<f64>,
    },
}

/// First and second derivatives of the embedding at a parameter point.
#[derive(Debug, Clone, Copy)]
pub struct Jet2 {
    pub position: Point3<f64>,
    pub fu: Vector3<f64>,
    pub fv: Vector3<f64>,
    pub fuu: Vector3<f64>,
    pub fuv: Vector3<f64>,
    pub fvv: Vector3<f64>,
}

impl ParametricSurface {
    /// Parameter rectangle `[u0, u1] x [v0, v1]`.
    pub fn domain(&self) -> [f64; 4] {
        use std::f64::consts::{FRAC_PI_2, TAU};
        match self {
            ParametricSurface::Sphere { .. } => [0.0, TAU, -FRAC_PI_2, FRAC_PI_2],
            ParametricSurface::Cylinder { height, .. } => [0.0, TAU, 0.0, *height],
            ParametricSurface::Torus { .. } => [0.0, TAU, 0.0, TAU],
            ParametricSurface::Graph { domain, .. } => *domain,
            ParametricSurface::Plane { .. } => [0.0, 1.0, 0.0, 1.0],
        }
    }

    /// Whether `u` (resp. `v`) wraps around.
    pub fn periodic(&self) -> (bool, bool) {
        match self {
            ParametricSurface::Sphere { .. } => (true, false),
            ParametricSurface::Cylinder { .. } => (true, false),
            ParametricSurface::Torus { .. } => (true, true),
            ParametricSurface::Graph { .. } | ParametricSurface::Plane { .. } => (false, false),
        }
    }

    pub fn position(&self, u: f64, v: f64) -> Point3<f64> {
        self.jet(u, v).position
    }

    /// Closed-form derivatives up to second order.
    pub fn jet(&self, u: f64, v: f64) -> Jet2 {
        match *self {
            ParametricSurface::Sphere { radius: r } => {
                let (su, cu) = u.sin_cos();
                let (sv, cv) = v.sin_cos();
                Jet2 {
                    position: Point3::new(r * cu * cv, r * su * cv, r * sv),
                    fu: Vector3::new(-r * su * cv, r * cu * cv, 0.0),
                    fv: Vector3::new(-r * cu * sv, -r * su * sv, r * cv),
                    fuu: Vector3::new(-r * cu * cv, -r * su * cv, 0.0),
                    fuv: Vector3::new(r * su * sv, -r * cu * sv, 0.0),
                    fvv: Vector3::new(-r * cu * cv, -r * su * cv, -r * sv),
                }
            }
            ParametricSurface::Cylinder { radius: r, .. } => {
                let (su, cu) = u.sin_cos();
                Jet2 {
                    position: Point3::new(r * cu, r * su, v),
                    fu: Vector3::new(-r * su, r * cu, 0.0),
                    fv: Vector3::new(0.0, 0.0, 1.0),
                    fuu: Vector3::new(-r * cu, -r * su, 0.0),
                    fuv: Vector3::zeros(),
                    fvv: Vector3::zeros(),
                }
            }
            ParametricSurface::Torus { major: rr, minor: r } => {
                let (su, cu) = u.sin_cos();
                let (sv, cv) = v.sin_cos();
                let ring = rr + r * cv;
                Jet2 {
                    position: Point3::new(ring * cu, ring * su, r * sv),
                    fu: Vector3::new(-ring * su, ring * cu, 0.0),
                    fv: Vector3::new(-r * sv * cu, -r * sv * su, r * cv),
                    fuu: Vector3::new(-ring * cu, -ring * su, 0.0),
                    fuv: Vector3::new(r * sv * su, -r * sv * cu, 0.0),
                    fvv: Vector3::new(-r * cv * cu, -r * cv * su, -r * sv),
                }
            }
            ParametricSurface::Graph { ref h, .. } => {
                let (hv, hx, hy, hxx, hxy, hyy) = h.eval(u, v);
                Jet2 {
                    position: Point3::new(u, v, hv),
                    fu: Vector3::new(1.0, 0.0, hx),
                    fv: Vector3::new(0.0, 1.0, hy),
                    fuu: Vector3::new(0.0, 0.0, hxx),
                    fuv: Vector3::new(0.0, 0.0, hxy),
                    fvv: Vector3::new(0.0, 0.0, hyy),
                }
            }
            ParametricSurface::Plane { origin, e1, e2 } => Jet2 {
                position: origin + u * e1 + v * e2,
                fu: e1,
                fv: e2,
                fuu: Vector3::zeros(),
                fuv: Vector3::zeros(),
                fvv: Vector3::zeros(),
            },
        }
    }

    /// Unit normal (Gauss map) at the parameter point.
    pub fn normal(&self, u: f64, v: f64) -> Vector3<f64> {
        let jet = self.jet(u, v);
        jet.fu.cross(&jet.fv).normalize()
    }
}

/// Exact pointwise differential geometry: normal, metric, shape operator,
/// and principal curvature pairs under both ordering conventions.
#[derive(Debug, Clone)]
pub struct AnalyticShapeData {
    pub position: Point3<f64>,
    pub normal: Vector3<f64>,
    /// Gram matrix of the parameterization's partial derivatives.
    pub metric: Matrix2<f64>,
    /// Shape operator expressed in the orthonormal tangent basis below;
    /// symmetric by self-adjointness.
    pub shape: Matrix2<f64>,
    /// Orthonormal tangent basis obtained from the parameter directions.
    pub basis: (Vector3<f64>, Vector3<f64>),
    kappa_max: f64,
    kappa_min: f64,
    dir_max: Vector3<f64>,
    dir_min: Vector3<f64>,
}

impl AnalyticShapeData {
    /// Principal pairs in signed-extremal order: `kappa_max >= kappa_min`.
    pub fn principal_signed(&self) -> (f64, f64, Vector3<f64>, Vector3<f64>) {
        (self.kappa_max, self.kappa_min, self.dir_max, self.dir_min)
    }

    /// Principal pairs in magnitude order: `|kappa1| >= |kappa2|`.
    pub fn principal_by_magnitude(&self) -> (f64, f64, Vector3<f64>, Vector3<f64>) {
        if self.kappa_max.abs() >= self.kappa_min.abs() {
            (self.kappa_max, self.kappa_min, self.dir_max, self.dir_min)
        } else {
            (self.kappa_min, self.kappa_max, self.dir_min, self.dir_max)
        }
    }

    /// Applies the shape operator to a tangent 3-vector.
    pub fn apply_shape(&self, t: Vector3<f64>) -> Vector3<f64> {
        let coords = Vector2::new(t.dot(&self.basis.0), t.dot(&self.basis.1));
        let image = self.shape * coords;
        image.x * self.basis.0 + image.y * self.basis.1
    }
}

/// Computes the exact shape data at a parameter point.
///
/// The shape operator is assembled from the first and second fundamental
/// forms (`S = -g^{-1} II` in the parameter basis, matching `S(v) = D_v n`)
/// and re-expressed in an orthonormal tangent basis before the eigensolve.
pub fn analytic_shape(
    surface: &ParametricSurface,
    u: f64,
    v: f64,
) -> Result<AnalyticShapeData, GeometryError> {
    let jet = surface.jet(u, v);
    let g = Matrix2::new(
        jet.fu.dot(&jet.fu),
        jet.fu.dot(&jet.fv),
        jet.fu.dot(&jet.fv),
        jet.fv.dot(&jet.fv),
    );
    let det = g.determinant();
    if det < METRIC_SINGULAR_TOL {
        return Err(GeometryError::SingularMetric(u, v));
    }
    let normal = jet.fu.cross(&jet.fv).normalize();
    let second = Matrix2::new(
        normal.dot(&jet.fuu),
        normal.dot(&jet.fuv),
        normal.dot(&jet.fuv),
        normal.dot(&jet.fvv),
    );
    let g_inv = g.try_inverse().ok_or(GeometryError::SingularMetric(u, v))?;
    // shape operator in the parameter basis, S(v) = D_v n
    let a = -g_inv * second;

    // orthonormal tangent frame and the change of coordinates into it
    let b1 = jet.fu.normalize();
    let b2 = (jet.fv - b1 * b1.dot(&jet.fv)).normalize();
    let t = Matrix2::new(jet.fu.norm(), jet.fv.dot(&b1), 0.0, jet.fv.dot(&b2));
    let t_inv = t.try_inverse().ok_or(GeometryError::SingularMetric(u, v))?;
    let mut shape = t * a * t_inv;
    // self-adjoint up to rounding
    let off = 0.5 * (shape.m12 + shape.m21);
    shape.m12 = off;
    shape.m21 = off;

    let (kappa_max, kappa_min, e_max, e_min) = sym_eigen2(shape.m11, shape.m12, shape.m22);
    Ok(AnalyticShapeData {
        position: jet.position,
        normal,
        metric: g,
        shape,
        basis: (b1, b2),
        kappa_max,
        kappa_min,
        dir_max: e_max.x * b1 + e_max.y * b2,
        dir_min: e_min.x * b1 + e_min.y * b2,
    })
}

/// Eigen-decomposition of the symmetric matrix `[[e, f], [f, g]]`; returns
/// `(lambda_max, lambda_min, v_max, v_min)` with orthonormal eigenvectors.
pub fn sym_eigen2(e: f64, f: f64, g: f64) -> (f64, f64, Vector2<f64>, Vector2<f64>) {
    let half_trace = 0.5 * (e + g);
    let delta = 0.5 * (e - g);
    let radius = (delta * delta + f * f).sqrt();
    let l_max = half_trace + radius;
    let l_min = half_trace - radius;
    // eigenvector for l_max: pick the better-conditioned column
    let v_max = if delta >= 0.0 {
        Vector2::new(delta + radius, f)
    } else {
        Vector2::new(f, radius - delta)
    };
    let v_max = if v_max.norm() < 1e-300 {
        Vector2::new(1.0, 0.0)
    } else {
        v_max.normalize()
    };
    let v_min = Vector2::new(-v_max.y, v_max.x);
    (l_max, l_min, v_max, v_min)
}

/// Scalar field on the parameter domain with closed-form partials.
pub struct DomainField<'a> {
    pub value: &'a dyn Fn(f64, f64) -> f64,
    pub du: &'a dyn Fn(f64, f64) -> f64,
    pub dv: &'a dyn Fn(f64, f64) -> f64,
}

/// Exact surface gradient of a domain scalar field at `(u, v)`:
/// the metric-corrected combination of the parameter basis vectors.
pub fn analytic_gradient(
    surface: &ParametricSurface,
    phi: &DomainField,
    u: f64,
    v: f64,
) -> Result<Vector3<f64>, GeometryError> {
    let jet = surface.jet(u, v);
    let g = Matrix2::new(
        jet.fu.dot(&jet.fu),
        jet.fu.dot(&jet.fv),
        jet.fu.dot(&jet.fv),
        jet.fv.dot(&jet.fv),
    );
    if g.determinant() < METRIC_SINGULAR_TOL {
        return Err(GeometryError::SingularMetric(u, v));
    }
    let g_inv = g.try_inverse().ok_or(GeometryError::SingularMetric(u, v))?;
    let dphi = Vector2::new((phi.du)(u, v), (phi.dv)(u, v));
    let coeff = g_inv * dphi;
    Ok(coeff.x * jet.fu + coeff.y * jet.fv)
}

/// Normal curvature in direction `t` from the principal pairs (the Euler
/// curvature formula). `t` must be unit length and tangent.
pub fn directional_curvature(
    data: &AnalyticShapeData,
    t: Vector3<f64>,
) -> Result<f64, GeometryError> {
    let normal_part = t.dot(&data.normal).abs();
    if normal_part > 1e-8 {
        return Err(GeometryError::NotTangent(normal_part));
    }
    let (k_max, k_min, d_max, d_min) = data.principal_signed();
    Ok(t.dot(&d_max).powi(2) * k_max + t.dot(&d_min).powi(2) * k_min)
}

/// Regular-grid tessellation with welded periodic seams plus the exact
/// shape data at every vertex.
///
/// `nu`, `nv` are vertex counts per axis (both at least 2). On periodic
/// axes the count is the number of distinct samples around the loop. The
/// sphere gets single pole vertices with geometrically continued data.
pub fn tessellate(
    surface: &ParametricSurface,
    nu: usize,
    nv: usize,
) -> Result<(MeshBuffer, Vec<AnalyticShapeData>), GeometryError> {
    if nu < 2 || nv < 2 {
        return Err(GeometryError::InvalidParameter(
            "tessellation needs at least 2 samples per axis".into(),
        ));
    }
    let [u0, u1, v0, v1] = surface.domain();
    let (per_u, per_v) = surface.periodic();
    if let ParametricSurface::Sphere { radius } = *surface {
        return Ok(tessellate_sphere(radius, nu, nv));
    }

    let cols = if per_u { nu } else { nu - 1 };
    let rows = if per_v { nv } else { nv - 1 };
    let du = (u1 - u0) / cols as f64;
    let dv = (v1 - v0) / rows as f64;
    let u_count = nu;
    let v_count = nv;

    let mut positions = Vec::with_capacity(u_count * v_count);
    let mut data = Vec::with_capacity(u_count * v_count);
    for jv in 0..v_count {
        for iu in 0..u_count {
            let u = u0 + du * iu as f64;
            let v = v0 + dv * jv as f64;
            positions.push(surface.position(u, v));
            data.push(analytic_shape(surface, u, v)?);
        }
    }
    let wrap_u = |i: usize| (i % u_count) as u32;
    let index = |iu: usize, jv: usize| (jv % v_count) as u32 * u_count as u32 + wrap_u(iu);
    let mut triangles = Vec::new();
    let u_cells = if per_u { u_count } else { u_count - 1 };
    let v_cells = if per_v { v_count } else { v_count - 1 };
    for jv in 0..v_cells {
        for iu in 0..u_cells {
            let p00 = index(iu, jv);
            let p10 = index(iu + 1, jv);
            let p01 = index(iu, jv + 1);
            let p11 = index(iu + 1, jv + 1);
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }
    let mesh = MeshBuffer::new(positions, triangles)
        .map_err(|e| GeometryError::InvalidParameter(format!("tessellation invalid: {e}")))?;
    Ok((mesh, data))
}

fn tessellate_sphere(radius: f64, nu: usize, nv: usize) -> (MeshBuffer, Vec<AnalyticShapeData>) {
    use std::f64::consts::{FRAC_PI_2, TAU};
    let surface = ParametricSurface::Sphere { radius };
    let rows = nv.max(3); // at least one interior latitude ring
    let dv = std::f64::consts::PI / (rows - 1) as f64;
    let du = TAU / nu as f64;

    let mut positions = Vec::new();
    let mut data = Vec::new();
    // south pole
    positions.push(Point3::new(0.0, 0.0, -radius));
    data.push(sphere_pole_data(radius, -1.0));
    for jv in 1..rows - 1 {
        let v = -FRAC_PI_2 + dv * jv as f64;
        for iu in 0..nu {
            let u = du * iu as f64;
            positions.push(surface.position(u, v));
            data.push(analytic_shape(&surface, u, v).expect("interior latitude is regular"));
        }
    }
    positions.push(Point3::new(0.0, 0.0, radius));
    data.push(sphere_pole_data(radius, 1.0));
    let north = (positions.len() - 1) as u32;

    let ring = |jv: usize, iu: usize| 1 + ((jv - 1) * nu + iu % nu) as u32;
    let mut triangles = Vec::new();
    for iu in 0..nu {
        triangles.push([0, ring(1, iu + 1), ring(1, iu)]);
    }
    for jv in 1..rows - 2 {
        for iu in 0..nu {
            let p00 = ring(jv, iu);
            let p10 = ring(jv, iu + 1);
            let p01 = ring(jv + 1, iu);
            let p11 = ring(jv + 1, iu + 1);
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }
    for iu in 0..nu {
        triangles.push([north, ring(rows - 2, iu), ring(rows - 2, iu + 1)]);
    }
    let mesh = MeshBuffer::new(positions, triangles).expect("sphere tessellation is valid");
    (mesh, data)
}

/// Shape data at a sphere pole, where the lat-long parameterization is
/// singular but the geometry is not: umbilic with curvature `1/r`.
fn sphere_pole_data(radius: f64, sign: f64) -> AnalyticShapeData {
    let normal = Vector3::new(0.0, 0.0, sign);
    let b1 = Vector3::new(1.0, 0.0, 0.0);
    let b2 = normal.cross(&b1);
    let k = 1.0 / radius;
    AnalyticShapeData {
        position: Point3::new(0.0, 0.0, sign * radius),
        normal,
        metric: Matrix2::identity(),
        shape: Matrix2::new(k, 0.0, 0.0, k),
        basis: (b1, b2),
        kappa_max: k,
        kappa_min: k,
        dir_max: b1,
        dir_min: b2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Adjacency;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn surfaces() -> Vec<ParametricSurface> {
        vec![
            ParametricSurface::Sphere { radius: 1.3 },
            ParametricSurface::Cylinder {
                radius: 0.8,
                height: 2.0,
            },
            ParametricSurface::Torus {
                major: 2.0,
                minor: 0.5,
            },
            ParametricSurface::Graph {
                h: GraphFn::Gaussians(vec![GaussianBump {
                    amplitude: 1.5,
                    center: (0.1, -0.2),
                    sigma: 0.7,
                }]),
                domain: [-2.0, 2.0, -2.0, 2.0],
            },
        ]
    }

    fn sample_domain(surface: &ParametricSurface, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let [u0, u1, v0, v1] = surface.domain();
        // stay away from singular caps
        let margin = 0.15;
        let u = u0 + (u1 - u0) * rng.gen_range(margin..1.0 - margin);
        let v = v0 + (v1 - v0) * rng.gen_range(margin..1.0 - margin);
        (u, v)
    }

    #[test]
    fn unit_sphere_is_umbilic_with_unit_curvature() {
        let sphere = ParametricSurface::Sphere { radius: 1.0 };
        let data = analytic_shape(&sphere, 1.1, 0.4).unwrap();
        let (k1, k2, _, _) = data.principal_by_magnitude();
        assert_relative_eq!(k1, 1.0, epsilon = 1e-10);
        assert_relative_eq!(k2, 1.0, epsilon = 1e-10);
        // outward normal
        assert!(data.normal.dot(&data.position.coords) > 0.99);
    }

    #[test]
    fn cylinder_curvatures_and_axis_direction() {
        let r = 0.5;
        let cyl = ParametricSurface::Cylinder {
            radius: r,
            height: 2.0,
        };
        let data = analytic_shape(&cyl, 0.7, 1.0).unwrap();
        let (k1, k2, _, d2) = data.principal_by_magnitude();
        assert_relative_eq!(k1, 1.0 / r, epsilon = 1e-10);
        assert_relative_eq!(k2, 0.0, epsilon = 1e-10);
        assert_relative_eq!(d2.z.abs(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn saddle_graph_at_origin() {
        let graph = ParametricSurface::Graph {
            h: GraphFn::Quadratic {
                a: 1.0,
                b: 0.0,
                c: -1.0,
            },
            domain: [-1.0, 1.0, -1.0, 1.0],
        };
        let data = analytic_shape(&graph, 0.0, 0.0).unwrap();
        let (k1, k2, d1, d2) = data.principal_by_magnitude();
        assert_relative_eq!(k1.abs(), 2.0, epsilon = 1e-10);
        assert_relative_eq!(k2.abs(), 2.0, epsilon = 1e-10);
        assert_relative_eq!(k1 + k2, 0.0, epsilon = 1e-10);
        // principal directions along the coordinate axes
        assert!(d1.x.abs().max(d1.y.abs()) > 0.999);
        assert!(d2.x.abs().max(d2.y.abs()) > 0.999);
        // finite differences of the Gauss map confirm S = D_v n
        let h = 1e-5;
        let dn_dx = (graph.normal(h, 0.0) - graph.normal(-h, 0.0)) / (2.0 * h);
        let sx = data.apply_shape(Vector3::new(1.0, 0.0, 0.0));
        assert_relative_eq!((dn_dx - sx).norm(), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn shape_operator_is_self_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for surface in surfaces() {
            for _ in 0..40 {
                let (u, v) = sample_domain(&surface, &mut rng);
                let data = analytic_shape(&surface, u, v).unwrap();
                let (b1, b2) = data.basis;
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let a = theta.cos() * b1 + theta.sin() * b2;
                let b = phi.cos() * b1 + phi.sin() * b2;
                let lhs = data.apply_shape(a).dot(&b);
                let rhs = a.dot(&data.apply_shape(b));
                assert_relative_eq!(lhs, rhs, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn principal_directions_perpendicular_away_from_umbilics() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for surface in surfaces() {
            for _ in 0..40 {
                let (u, v) = sample_domain(&surface, &mut rng);
                let data = analytic_shape(&surface, u, v).unwrap();
                let (k1, k2, d1, d2) = data.principal_signed();
                if (k1 - k2).abs() > 1e-6 {
                    assert!(d1.dot(&d2).abs() < 1e-9);
                    assert_relative_eq!(d1.norm(), 1.0, epsilon = 1e-9);
                    assert_relative_eq!(d2.norm(), 1.0, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn gradient_on_identity_plane() {
        let plane = ParametricSurface::Plane {
            origin: Point3::origin(),
            e1: Vector3::x(),
            e2: Vector3::y(),
        };
        let phi = DomainField {
            value: &|x, y| 3.0 * x + 4.0 * y,
            du: &|_, _| 3.0,
            dv: &|_, _| 4.0,
        };
        let grad = analytic_gradient(&plane, &phi, 0.3, 0.6).unwrap();
        assert_relative_eq!((grad - Vector3::new(3.0, 4.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gradient_compensates_metric_distortion() {
        // stretched plane: metric diag(4, 1); phi = x1 gives gradient (1/2, 0, 0)
        let plane = ParametricSurface::Plane {
            origin: Point3::origin(),
            e1: Vector3::new(2.0, 0.0, 0.0),
            e2: Vector3::y(),
        };
        let phi = DomainField {
            value: &|x, _| x,
            du: &|_, _| 1.0,
            dv: &|_, _| 0.0,
        };
        let grad = analytic_gradient(&plane, &phi, 0.5, 0.5).unwrap();
        assert_relative_eq!(
            (grad - Vector3::new(0.5, 0.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let sphere = ParametricSurface::Sphere { radius: 2.0 };
        let phi = DomainField {
            value: &|_, _| 7.0,
            du: &|_, _| 0.0,
            dv: &|_, _| 0.0,
        };
        let grad = analytic_gradient(&sphere, &phi, 1.0, 0.3).unwrap();
        assert_relative_eq!(grad.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences_along_tangents() {
        // D_t phi = <grad phi, t> checked against central differences of
        // phi along the parameter lines, divided by arc length.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for surface in surfaces() {
            let phi = DomainField {
                value: &|u: f64, v: f64| (1.3 * u).sin() * (0.7 * v).cos() + 0.2 * u * v,
                du: &|u: f64, v: f64| 1.3 * (1.3 * u).cos() * (0.7 * v).cos() + 0.2 * v,
                dv: &|u: f64, v: f64| -0.7 * (1.3 * u).sin() * (0.7 * v).sin() + 0.2 * u,
            };
            for _ in 0..20 {
                let (u, v) = sample_domain(&surface, &mut rng);
                let grad = analytic_gradient(&surface, &phi, u, v).unwrap();
                let jet = surface.jet(u, v);
                let h = 1e-4;
                let d_du = ((phi.value)(u + h, v) - (phi.value)(u - h, v)) / (2.0 * h);
                let d_dv = ((phi.value)(u, v + h) - (phi.value)(u, v - h)) / (2.0 * h);
                assert_relative_eq!(grad.dot(&jet.fu), d_du, epsilon = 1e-6, max_relative = 1e-6);
                assert_relative_eq!(grad.dot(&jet.fv), d_dv, epsilon = 1e-6, max_relative = 1e-6);
                // tangency
                let n = surface.normal(u, v);
                if grad.norm() > 1e-9 {
                    assert!(grad.normalize().dot(&n).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn euler_formula_matches_shape_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for surface in surfaces() {
            for _ in 0..30 {
                let (u, v) = sample_domain(&surface, &mut rng);
                let data = analytic_shape(&surface, u, v).unwrap();
                let (b1, b2) = data.basis;
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let t = theta.cos() * b1 + theta.sin() * b2;
                let euler = directional_curvature(&data, t).unwrap();
                let quad = t.dot(&data.apply_shape(t));
                assert_relative_eq!(euler, quad, epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn directional_curvature_at_principal_directions_and_45_degrees() {
        let graph = ParametricSurface::Graph {
            h: GraphFn::Quadratic {
                a: 1.0,
                b: 0.0,
                c: -1.0,
            },
            domain: [-1.0, 1.0, -1.0, 1.0],
        };
        let data = analytic_shape(&graph, 0.0, 0.0).unwrap();
        let (k1, _, d1, d2) = data.principal_signed();
        assert_relative_eq!(directional_curvature(&data, d1).unwrap(), k1, epsilon = 1e-10);
        let diag = ((d1 + d2) / 2.0_f64.sqrt()).normalize();
        assert_relative_eq!(directional_curvature(&data, diag).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn sphere_curvature_constant_in_all_directions() {
        let sphere = ParametricSurface::Sphere { radius: 2.0 };
        let data = analytic_shape(&sphere, 0.9, -0.3).unwrap();
        let (b1, b2) = data.basis;
        for k in 0..8 {
            let theta = k as f64 * std::f64::consts::FRAC_PI_4;
            let t = theta.cos() * b1 + theta.sin() * b2;
            assert_relative_eq!(
                directional_curvature(&data, t).unwrap(),
                0.5,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn non_tangent_direction_rejected() {
        let sphere = ParametricSurface::Sphere { radius: 1.0 };
        let data = analytic_shape(&sphere, 0.3, 0.2).unwrap();
        assert!(matches!(
            directional_curvature(&data, data.normal),
            Err(GeometryError::NotTangent(_))
        ));
    }

    #[test]
    fn metric_singularity_at_sphere_pole() {
        let sphere = ParametricSurface::Sphere { radius: 1.0 };
        assert!(matches!(
            analytic_shape(&sphere, 0.0, std::f64::consts::FRAC_PI_2),
            Err(GeometryError::SingularMetric(_, _))
        ));
    }

    /// Curvature along a parameter-line curve agrees with the normal-tilt
    /// rate `<c', dn/ds>`. With the convention `S = D_v n` fixed by this
    /// crate the sign is positive.
    #[test]
    fn meusnier_consistency_along_parameter_lines() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for surface in surfaces() {
            for _ in 0..20 {
                let (u, v) = sample_domain(&surface, &mut rng);
                let data = analytic_shape(&surface, u, v).unwrap();
                let jet = surface.jet(u, v);
                for along_u in [true, false] {
                    let speed = if along_u { jet.fu.norm() } else { jet.fv.norm() };
                    let tangent = if along_u {
                        jet.fu / speed
                    } else {
                        jet.fv / speed
                    };
                    let h = 1e-5;
                    let (na, nb) = if along_u {
                        (surface.normal(u + h, v), surface.normal(u - h, v))
                    } else {
                        (surface.normal(u, v + h), surface.normal(u, v - h))
                    };
                    let dn_ds = (na - nb) / (2.0 * h) / speed;
                    let kappa = directional_curvature(&data, tangent).unwrap();
                    assert_relative_eq!(kappa, tangent.dot(&dn_ds), epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn torus_tessellation_closed_with_euler_zero() {
        let torus = ParametricSurface::Torus {
            major: 2.0,
            minor: 0.5,
        };
        let (mesh, data) = tessellate(&torus, 64, 64).unwrap();
        assert_eq!(mesh.vertex_count(), 64 * 64);
        assert_eq!(data.len(), mesh.vertex_count());
        let adj = Adjacency::build(&mesh).unwrap();
        let euler =
            mesh.vertex_count() as i64 - adj.edge_count() as i64 + mesh.triangle_count() as i64;
        assert_eq!(euler, 0);
        assert!((0..adj.edge_count()).all(|e| !adj.is_boundary_edge(e)));
        // orientation matches analytic outward normal
        for t in 0..mesh.triangle_count() {
            let centroid = mesh.triangle_centroid(t);
            let ring = Vector3::new(centroid.x, centroid.y, 0.0).normalize() * 2.0;
            let outward = centroid.coords - ring;
            assert!(mesh.triangle_normal(t).dot(&outward) > 0.0);
        }
    }

    #[test]
    fn sphere_tessellation_max_edge_shrinks_monotonically() {
        let sphere = ParametricSurface::Sphere { radius: 1.0 };
        let mut last = f64::INFINITY;
        for n in [8, 16, 32] {
            let (mesh, _) = tessellate(&sphere, n, n).unwrap();
            let mut max_edge = 0.0f64;
            for tri in mesh.triangles() {
                for k in 0..3 {
                    let a = mesh.position(tri[k]);
                    let b = mesh.position(tri[(k + 1) % 3]);
                    max_edge = max_edge.max((a - b).norm());
                }
            }
            assert!(max_edge < last);
            last = max_edge;
        }
    }

    #[test]
    fn sphere_tessellation_closed() {
        let sphere = ParametricSurface::Sphere { radius: 1.0 };
        let (mesh, _) = tessellate(&sphere, 16, 12).unwrap();
        let adj = Adjacency::build(&mesh).unwrap();
        let euler =
            mesh.vertex_count() as i64 - adj.edge_count() as i64 + mesh.triangle_count() as i64;
        assert_eq!(euler, 2);
    }

    #[test]
    fn graph_tessellation_boundary_count() {
        let graph = ParametricSurface::Graph {
            h: GraphFn::Quadratic {
                a: 0.1,
                b: 0.0,
                c: 0.1,
            },
            domain: [-1.0, 1.0, -1.0, 1.0],
        };
        let (mesh, _) = tessellate(&graph, 32, 32).unwrap();
        assert_eq!(mesh.vertex_count(), 32 * 32);
        let adj = Adjacency::build(&mesh).unwrap();
        assert_eq!(adj.boundary_vertex_count(), 2 * (32 + 32) - 4);
    }

    #[test]
    fn degenerate_resolution_rejected() {
        let sphere = ParametricSurface::Sphere { radius: 1.0 };
        assert!(tessellate(&sphere, 1, 8).is_err());
    }
}
