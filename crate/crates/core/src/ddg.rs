//! Discrete differential operators: mixed Voronoi areas, per-triangle and
//! per-vertex shape operators, the curvature-derivative tensor, and discrete
//! gradients with covariant derivatives.
//!
//! Shape operators are fitted per triangle by least squares from the normal
//! differences across the three edges, then rotated into each incident
//! vertex's tangent frame, weighted by the mixed Voronoi area of the
//! triangle corner, and accumulated. The same transport (rotate the source
//! frame onto the target normal, re-express, weight, average) is reused for
//! triangle gradients and for the third-order curvature-derivative tensor.

use nalgebra::{Matrix2, Point3, SMatrix, SVector, Vector2, Vector3};

use crate::error::GeometryError;
use crate::field::{ScalarField, VectorField};
use crate::mesh::{corner_angle, Adjacency, MeshBuffer, NormalField};
use crate::oracle::sym_eigen2;

/// Triangle contributions are dropped when the triangle normal is nearly
/// antipodal to the vertex normal (fold-over); cos(179 degrees).
pub const FOLDOVER_COS: f64 = -0.999_847_695_156_391_3;

/// Symmetric 2x2 tensor `[[e, f], [f, g]]` expressed in some tangent frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor2 {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl SymTensor2 {
    pub const ZERO: SymTensor2 = SymTensor2 {
        e: 0.0,
        f: 0.0,
        g: 0.0,
    };

    pub fn as_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.e, self.f, self.f, self.g)
    }

    pub fn apply(&self, u: Vector2<f64>) -> Vector2<f64> {
        Vector2::new(self.e * u.x + self.f * u.y, self.f * u.x + self.g * u.y)
    }

    /// Quadratic form `<u, S u>`.
    pub fn quad(&self, u: Vector2<f64>) -> f64 {
        self.e * u.x * u.x + 2.0 * self.f * u.x * u.y + self.g * u.y * u.y
    }

    /// Change of frame: `R S R^T` for the 2x2 frame map `R`.
    pub fn rotate(&self, r: &Matrix2<f64>) -> SymTensor2 {
        let m = r * self.as_matrix() * r.transpose();
        SymTensor2 {
            e: m.m11,
            f: 0.5 * (m.m12 + m.m21),
            g: m.m22,
        }
    }

    pub fn scaled(&self, s: f64) -> SymTensor2 {
        SymTensor2 {
            e: self.e * s,
            f: self.f * s,
            g: self.g * s,
        }
    }

    pub fn add_assign(&mut self, other: &SymTensor2) {
        self.e += other.e;
        self.f += other.f;
        self.g += other.g;
    }

    /// Eigenvalues and orthonormal eigenvectors, largest eigenvalue first.
    pub fn eigen(&self) -> (f64, f64, Vector2<f64>, Vector2<f64>) {
        sym_eigen2(self.e, self.f, self.g)
    }
}

/// Fully symmetric rank-3 tensor over a 2D tangent frame, packed as
/// `(a, b, c, d)`: `D_x S = [[a, b], [b, c]]`, `D_y S = [[b, c], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CubicTensor {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CubicTensor {
    pub const ZERO: CubicTensor = CubicTensor {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        d: 0.0,
    };

    /// Full index access `C[i][j][k]` of the symmetric packing.
    pub fn entry(&self, i: usize, j: usize, k: usize) -> f64 {
        match i + j + k {
            0 => self.a,
            1 => self.b,
            2 => self.c,
            _ => self.d,
        }
    }

    /// Directional derivative of the normal curvature: the cubic form
    /// `a u1^3 + 3b u1^2 u2 + 3c u1 u2^2 + d u2^3`.
    pub fn directional(&self, u: Vector2<f64>) -> f64 {
        let (x, y) = (u.x, u.y);
        self.a * x * x * x
            + 3.0 * self.b * x * x * y
            + 3.0 * self.c * x * y * y
            + self.d * y * y * y
    }

    /// Change of frame: contract every index with the 2x2 frame map `R`.
    pub fn rotate(&self, r: &Matrix2<f64>) -> CubicTensor {
        let targets = [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)];
        let mut out = [0.0f64; 4];
        for (slot, &(p, q, s)) in targets.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        acc += r[(p, i)] * r[(q, j)] * r[(s, k)] * self.entry(i, j, k);
                    }
                }
            }
            out[slot] = acc;
        }
        CubicTensor {
            a: out[0],
            b: out[1],
            c: out[2],
            d: out[3],
        }
    }

    pub fn scaled(&self, s: f64) -> CubicTensor {
        CubicTensor {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    pub fn add_assign(&mut self, other: &CubicTensor) {
        self.a += other.a;
        self.b += other.b;
        self.c += other.c;
        self.d += other.d;
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }
}

/// Mixed Voronoi area of the triangle at the given corner (0, 1, or 2):
/// the circumcenter-bounded region for non-obtuse triangles, half the
/// triangle area when the corner angle is obtuse, a quarter otherwise.
pub fn mixed_voronoi_area(points: &[Point3<f64>; 3], corner: usize) -> f64 {
    let p = points[corner];
    let q = points[(corner + 1) % 3];
    let r = points[(corner + 2) % 3];
    let angle_p = corner_angle(&p, &q, &r);
    let angle_q = corner_angle(&q, &r, &p);
    let angle_r = corner_angle(&r, &p, &q);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let area = 0.5 * (q - p).cross(&(r - p)).norm();
    if angle_p <= half_pi && angle_q <= half_pi && angle_r <= half_pi {
        // perpendicular-bisector region: 1/8 (|pq|^2 cot(r) + |pr|^2 cot(q))
        let cot_r = cot(&(p - r), &(q - r));
        let cot_q = cot(&(p - q), &(r - q));
        0.125 * ((p - q).norm_squared() * cot_r + (p - r).norm_squared() * cot_q)
    } else if angle_p > half_pi {
        0.5 * area
    } else {
        0.25 * area
    }
}

/// Cotangent of the angle between two corner vectors.
pub(crate) fn cot(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.dot(v) / u.cross(v).norm()
}

/// Orthonormal triangle frame `(x, y)`: `x` along the first edge
/// `p_i - p_j`, `y` the normalized rejection of the second edge direction.
/// Right-handed with the triangle normal.
pub fn triangle_basis(
    points: &[Point3<f64>; 3],
) -> Result<(Vector3<f64>, Vector3<f64>), GeometryError> {
    let e1 = points[0] - points[1];
    let e2 = points[1] - points[2];
    let n1 = e1.norm();
    let n2 = e2.norm();
    if n1 < 1e-300 || n2 < 1e-300 || e1.cross(&e2).norm() < 1e-12 * n1 * n2 {
        return Err(GeometryError::DegenerateTriangle(0));
    }
    let x = e1 / n1;
    let e2n = e2 / n2;
    let y = x.cross(&(e2n.cross(&x)));
    Ok((x, y.normalize()))
}

/// Least-squares fit of the triangle shape operator from the normal
/// differences across the three edges, expressed in the triangle frame.
/// The six constraints always have rank 3 on a valid triangle; a failed
/// solve therefore signals degeneracy and is reported as such.
pub fn triangle_shape_operator(
    points: &[Point3<f64>; 3],
    normals: &[Vector3<f64>; 3],
) -> Result<SymTensor2, GeometryError> {
    let (x, y) = triangle_basis(points)?;
    let edges = [
        (points[0] - points[1], normals[0] - normals[1]),
        (points[1] - points[2], normals[1] - normals[2]),
        (points[2] - points[0], normals[2] - normals[0]),
    ];
    let mut m = SMatrix::<f64, 6, 3>::zeros();
    let mut rhs = SVector::<f64, 6>::zeros();
    for (row, (edge, dn)) in edges.iter().enumerate() {
        let u = edge.dot(&x);
        let v = edge.dot(&y);
        m[(2 * row, 0)] = u;
        m[(2 * row, 1)] = v;
        m[(2 * row + 1, 1)] = u;
        m[(2 * row + 1, 2)] = v;
        rhs[2 * row] = dn.dot(&x);
        rhs[2 * row + 1] = dn.dot(&y);
    }
    let svd = m.svd(true, true);
    let solution = svd
        .solve(&rhs, 1e-12)
        .map_err(|_| GeometryError::DegenerateTriangle(0))?;
    Ok(SymTensor2 {
        e: solution[0],
        f: solution[1],
        g: solution[2],
    })
}

/// Linear-interpolation gradient of the three corner values, as a 3-vector
/// in the triangle plane.
pub fn triangle_gradient(
    points: &[Point3<f64>; 3],
    values: [f64; 3],
) -> Result<Vector3<f64>, GeometryError> {
    let (x, y) = triangle_basis(points)?;
    // flatten with p_i at the origin
    let pj = points[1] - points[0];
    let pk = points[2] - points[0];
    let m = Matrix2::new(pj.dot(&x), pk.dot(&x), pj.dot(&y), pk.dot(&y));
    let inv = m
        .try_inverse()
        .ok_or(GeometryError::DegenerateTriangle(0))?;
    // row vector (alpha, beta) = (phi_j - phi_i, phi_k - phi_i) * M^-1
    let rhs = Vector2::new(values[1] - values[0], values[2] - values[0]);
    let coeff = inv.transpose() * rhs;
    Ok(coeff.x * x + coeff.y * y)
}

/// Covariant derivative of a scalar field along `w`: `<grad, w>`.
pub fn covariant_derivative(gradient: Vector3<f64>, w: Vector3<f64>) -> f64 {
    gradient.dot(&w)
}

/// Minimal rotation taking unit vector `from` to unit vector `to`, applied
/// to `v`. `None` when the vectors are nearly antipodal.
pub fn rotate_between(
    from: Vector3<f64>,
    to: Vector3<f64>,
    v: Vector3<f64>,
) -> Option<Vector3<f64>> {
    let c = from.dot(&to);
    if c < FOLDOVER_COS {
        return None;
    }
    if c >= 1.0 - 1e-15 {
        return Some(v);
    }
    let axis = from.cross(&to);
    let s = axis.norm();
    let k = axis / s;
    Some(v * c + k.cross(&v) * s + k * (k.dot(&v)) * (1.0 - c))
}

/// Deterministic orthonormal tangent frames per vertex: the first axis is
/// the projection of a fixed seed axis onto the tangent plane (with a
/// fallback seed when nearly parallel to the normal).
#[derive(Debug, Clone)]
pub struct VertexFrames {
    pub x: Vec<Vector3<f64>>,
    pub y: Vec<Vector3<f64>>,
    pub n: Vec<Vector3<f64>>,
}

impl VertexFrames {
    pub fn build(normals: &NormalField) -> VertexFrames {
        let count = normals.vertex_normals().len();
        let mut x = Vec::with_capacity(count);
        let mut y = Vec::with_capacity(count);
        let mut n = Vec::with_capacity(count);
        for &normal in normals.vertex_normals() {
            let seed = if normal.x.abs() < 0.9 {
                Vector3::x()
            } else {
                Vector3::y()
            };
            let xi = (seed - normal * normal.dot(&seed)).normalize();
            x.push(xi);
            y.push(normal.cross(&xi));
            n.push(normal);
        }
        VertexFrames { x, y, n }
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// 2D coordinates of a tangent 3-vector in the frame of vertex `v`.
    pub fn to_frame(&self, v: u32, t: Vector3<f64>) -> Vector2<f64> {
        Vector2::new(t.dot(&self.x[v as usize]), t.dot(&self.y[v as usize]))
    }

    /// Embeds 2D frame coordinates back into 3-space.
    pub fn from_frame(&self, v: u32, c: Vector2<f64>) -> Vector3<f64> {
        c.x * self.x[v as usize] + c.y * self.y[v as usize]
    }
}

/// Per-vertex curvature data: shape operator in the vertex frame, principal
/// curvatures ordered by magnitude (`|kappa1| >= |kappa2|`), principal
/// directions in 3-space, and mixed Voronoi areas.
#[derive(Debug, Clone)]
pub struct CurvatureField {
    pub frames: VertexFrames,
    pub shape: Vec<SymTensor2>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
    pub dir1: Vec<Vector3<f64>>,
    pub dir2: Vec<Vector3<f64>>,
    pub voronoi_area: Vec<f64>,
    /// Count of (triangle, vertex) contributions dropped as fold-overs.
    pub dropped_foldovers: usize,
}

impl CurvatureField {
    pub fn kappa1_field(&self) -> ScalarField {
        ScalarField(self.kappa1.clone())
    }

    /// Euler-formula normal curvature at vertex `v` along unit tangent `u`.
    pub fn normal_curvature(&self, v: u32, u: Vector3<f64>) -> f64 {
        let k1 = self.kappa1[v as usize];
        let k2 = self.kappa2[v as usize];
        let c1 = u.dot(&self.dir1[v as usize]);
        let c2 = u.dot(&self.dir2[v as usize]);
        c1 * c1 * k1 + c2 * c2 * k2
    }

    /// True at umbilic points where the principal decomposition degenerates.
    pub fn is_umbilic(&self, v: u32, tol: f64) -> bool {
        (self.kappa1[v as usize] - self.kappa2[v as usize]).abs() < tol
    }
}

/// Mixed Voronoi area per (triangle, corner) and the per-vertex totals.
pub fn voronoi_weights(mesh: &MeshBuffer) -> (Vec<[f64; 3]>, Vec<f64>) {
    let mut per_corner = Vec::with_capacity(mesh.triangle_count());
    let mut per_vertex = vec![0.0; mesh.vertex_count()];
    for tri in mesh.triangles() {
        let pts = [
            mesh.position(tri[0]),
            mesh.position(tri[1]),
            mesh.position(tri[2]),
        ];
        let mut corner = [0.0; 3];
        for (k, w) in corner.iter_mut().enumerate() {
            *w = mixed_voronoi_area(&pts, k);
            per_vertex[tri[k] as usize] += *w;
        }
        per_corner.push(corner);
    }
    (per_corner, per_vertex)
}

/// Shape-operator estimation: per-triangle least squares, then rotation into
/// each vertex frame, Voronoi weighting, accumulation, and eigensolve.
pub fn vertex_shape_operators(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    normals: &NormalField,
) -> Result<CurvatureField, GeometryError> {
    let frames = VertexFrames::build(normals);
    let (corner_areas, _) = voronoi_weights(mesh);

    let mut tri_ops = Vec::with_capacity(mesh.triangle_count());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let pts = mesh.triangle_points(t);
        let ns = [
            normals.vertex(tri[0]),
            normals.vertex(tri[1]),
            normals.vertex(tri[2]),
        ];
        let (x, y) = triangle_basis(&pts)?;
        let s = triangle_shape_operator(&pts, &ns)?;
        tri_ops.push((x, y, s));
    }

    let nv = mesh.vertex_count();
    let mut acc = vec![SymTensor2::ZERO; nv];
    let mut weight = vec![0.0f64; nv];
    let mut dropped = 0usize;
    for v in 0..nv as u32 {
        for &t in adjacency.vertex_triangles(v) {
            let t = t as usize;
            let tri = mesh.triangles()[t];
            let corner = tri.iter().position(|&i| i == v).unwrap();
            let (x_t, y_t, s_t) = tri_ops[t];
            let n_t = mesh.triangle_normal(t);
            let n_v = frames.n[v as usize];
            let (Some(xr), Some(yr)) = (
                rotate_between(n_t, n_v, x_t),
                rotate_between(n_t, n_v, y_t),
            ) else {
                dropped += 1;
                continue;
            };
            // change of basis from the rotated triangle frame to the vertex frame
            let r = Matrix2::new(
                frames.x[v as usize].dot(&xr),
                frames.x[v as usize].dot(&yr),
                frames.y[v as usize].dot(&xr),
                frames.y[v as usize].dot(&yr),
            );
            let w = corner_areas[t][corner];
            acc[v as usize].add_assign(&s_t.rotate(&r).scaled(w));
            weight[v as usize] += w;
        }
    }

    let mut shape = Vec::with_capacity(nv);
    let mut kappa1 = Vec::with_capacity(nv);
    let mut kappa2 = Vec::with_capacity(nv);
    let mut dir1 = Vec::with_capacity(nv);
    let mut dir2 = Vec::with_capacity(nv);
    let mut voronoi_area = Vec::with_capacity(nv);
    for v in 0..nv {
        if weight[v] <= 0.0 {
            return Err(GeometryError::ZeroWeight(v as u32));
        }
        let s = acc[v].scaled(1.0 / weight[v]);
        let (l_max, l_min, v_max, v_min) = s.eigen();
        let (k1, k2, c1, c2) = if l_max.abs() >= l_min.abs() {
            (l_max, l_min, v_max, v_min)
        } else {
            (l_min, l_max, v_min, v_max)
        };
        shape.push(s);
        kappa1.push(k1);
        kappa2.push(k2);
        dir1.push(frames.from_frame(v as u32, c1));
        dir2.push(frames.from_frame(v as u32, c2));
        voronoi_area.push(weight[v]);
    }
    Ok(CurvatureField {
        frames,
        shape,
        kappa1,
        kappa2,
        dir1,
        dir2,
        voronoi_area,
        dropped_foldovers: dropped,
    })
}

/// Per-vertex curvature-derivative tensors, packed `(a, b, c, d)`.
#[derive(Debug, Clone)]
pub struct CurvatureDerivative {
    pub tensors: Vec<CubicTensor>,
}

/// Fits the rank-3 curvature-derivative tensor per triangle from the
/// differences of the vertex shape operators across edges (the edge-fit
/// scheme one tensor order above the normal-difference fit), then transports
/// it into the vertex frames with Voronoi weighting.
pub fn curvature_derivative(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    curvature: &CurvatureField,
) -> Result<CurvatureDerivative, GeometryError> {
    let frames = &curvature.frames;
    let (corner_areas, _) = voronoi_weights(mesh);

    let mut tri_tensors: Vec<(Vector3<f64>, Vector3<f64>, CubicTensor)> =
        Vec::with_capacity(mesh.triangle_count());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let pts = mesh.triangle_points(t);
        let (x_t, y_t) = triangle_basis(&pts)?;
        let n_t = mesh.triangle_normal(t);
        // vertex shape operators re-expressed in the triangle frame
        let mut s_in_tri = [SymTensor2::ZERO; 3];
        let mut valid = true;
        for k in 0..3 {
            let v = tri[k];
            let n_v = frames.n[v as usize];
            let (Some(xr), Some(yr)) = (
                rotate_between(n_v, n_t, frames.x[v as usize]),
                rotate_between(n_v, n_t, frames.y[v as usize]),
            ) else {
                valid = false;
                break;
            };
            let r = Matrix2::new(x_t.dot(&xr), x_t.dot(&yr), y_t.dot(&xr), y_t.dot(&yr));
            s_in_tri[k] = curvature.shape[v as usize].rotate(&r);
        }
        if !valid {
            tri_tensors.push((x_t, y_t, CubicTensor::ZERO));
            continue;
        }
        let edges = [
            (pts[0] - pts[1], 0usize, 1usize),
            (pts[1] - pts[2], 1, 2),
            (pts[2] - pts[0], 2, 0),
        ];
        let mut m = SMatrix::<f64, 9, 4>::zeros();
        let mut rhs = SVector::<f64, 9>::zeros();
        for (row, (edge, a, b)) in edges.iter().enumerate() {
            let u = edge.dot(&x_t);
            let v = edge.dot(&y_t);
            let de = s_in_tri[*a].e - s_in_tri[*b].e;
            let df = s_in_tri[*a].f - s_in_tri[*b].f;
            let dg = s_in_tri[*a].g - s_in_tri[*b].g;
            let base = 3 * row;
            m[(base, 0)] = u;
            m[(base, 1)] = v;
            m[(base + 1, 1)] = u;
            m[(base + 1, 2)] = v;
            m[(base + 2, 2)] = u;
            m[(base + 2, 3)] = v;
            rhs[base] = de;
            rhs[base + 1] = df;
            rhs[base + 2] = dg;
        }
        let svd = m.svd(true, true);
        let solution = svd
            .solve(&rhs, 1e-12)
            .map_err(|_| GeometryError::DegenerateTriangle(t))?;
        tri_tensors.push((
            x_t,
            y_t,
            CubicTensor {
                a: solution[0],
                b: solution[1],
                c: solution[2],
                d: solution[3],
            },
        ));
    }

    let nv = mesh.vertex_count();
    let mut acc = vec![CubicTensor::ZERO; nv];
    let mut weight = vec![0.0f64; nv];
    for v in 0..nv as u32 {
        for &t in adjacency.vertex_triangles(v) {
            let t = t as usize;
            let tri = mesh.triangles()[t];
            let corner = tri.iter().position(|&i| i == v).unwrap();
            let (x_t, y_t, tensor) = tri_tensors[t];
            let n_t = mesh.triangle_normal(t);
            let n_v = frames.n[v as usize];
            let (Some(xr), Some(yr)) = (
                rotate_between(n_t, n_v, x_t),
                rotate_between(n_t, n_v, y_t),
            ) else {
                continue;
            };
            let r = Matrix2::new(
                frames.x[v as usize].dot(&xr),
                frames.x[v as usize].dot(&yr),
                frames.y[v as usize].dot(&xr),
                frames.y[v as usize].dot(&yr),
            );
            let w = corner_areas[t][corner];
            acc[v as usize].add_assign(&tensor.rotate(&r).scaled(w));
            weight[v as usize] += w;
        }
    }
    let tensors = (0..nv)
        .map(|v| {
            if weight[v] <= 0.0 {
                Err(GeometryError::ZeroWeight(v as u32))
            } else {
                Ok(acc[v].scaled(1.0 / weight[v]))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CurvatureDerivative { tensors })
}

/// `D_u kappa` from the packed tensor for a unit direction `u` in the same
/// frame: the triple contraction `<u, (D_v S u | D_w S u) u>`.
pub fn directional_curvature_derivative(tensor: &CubicTensor, u: Vector2<f64>) -> f64 {
    tensor.directional(u)
}

/// Per-vertex gradient of a scalar field: triangle gradients rotated into
/// the vertex tangent plane, Voronoi-weighted, normalized.
pub fn vertex_gradient(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    normals: &NormalField,
    field: &ScalarField,
) -> Result<VectorField, GeometryError> {
    let (corner_areas, _) = voronoi_weights(mesh);
    let mut tri_grads = Vec::with_capacity(mesh.triangle_count());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let pts = mesh.triangle_points(t);
        let values = [
            field.value(tri[0]),
            field.value(tri[1]),
            field.value(tri[2]),
        ];
        tri_grads.push(triangle_gradient(&pts, values)?);
    }
    let nv = mesh.vertex_count();
    let mut out = vec![Vector3::zeros(); nv];
    for v in 0..nv as u32 {
        let mut acc = Vector3::zeros();
        let mut weight = 0.0;
        for &t in adjacency.vertex_triangles(v) {
            let t = t as usize;
            let tri = mesh.triangles()[t];
            let corner = tri.iter().position(|&i| i == v).unwrap();
            let n_t = mesh.triangle_normal(t);
            let n_v = normals.vertex(v);
            let Some(rotated) = rotate_between(n_t, n_v, tri_grads[t]) else {
                continue;
            };
            let w = corner_areas[t][corner];
            acc += w * rotated;
            weight += w;
        }
        if weight <= 0.0 {
            return Err(GeometryError::ZeroWeight(v));
        }
        out[v as usize] = acc / weight;
    }
    Ok(VectorField(out))
}
