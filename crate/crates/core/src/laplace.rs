//! Discrete Laplace-Beltrami operators: five weight schemes sharing the
//! difference form `L phi (p_i) = sum_j w_ij (phi_j - phi_i)`, plus the
//! structural property checks (Sym, Loc, Pos, Lin).

use nalgebra::Vector3;

use crate::ddg::cot;
use crate::error::GeometryError;
use crate::field::{ScalarField, VectorField};
use crate::mesh::{Adjacency, MeshBuffer, NormalField};

/// Weight schemes for the discrete Laplace-Beltrami operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `w_ij = 1` on edges.
    Combinatorial,
    /// `w_ij = 1 / |N(i)|` on edges.
    Uniform,
    /// `w_ij = (tan(delta_ij/2) + tan(gamma_ij/2)) / |p_i - p_j|` with the
    /// two angles at `p_i` flanking the edge.
    MeanValue,
    /// `w_ij = cot(alpha_ij) + cot(beta_ji)` with the angles opposite the
    /// edge in its one or two incident triangles.
    Cotangent,
    /// Heat-kernel weights over all triangles with Gaussian kernel
    /// `exp(-|p_i - p_j|^2 / 4h)`, triangle-area quadrature `A/3`, and
    /// prefactor `1/(4 pi h^2)`. Support is global.
    Belkin,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Combinatorial => "combinatorial",
            Scheme::Uniform => "uniform",
            Scheme::MeanValue => "mean-value",
            Scheme::Cotangent => "cotangent",
            Scheme::Belkin => "belkin",
        }
    }

    pub fn from_name(name: &str) -> Option<Scheme> {
        match name {
            "combinatorial" => Some(Scheme::Combinatorial),
            "uniform" => Some(Scheme::Uniform),
            "mean-value" | "meanvalue" | "mean_value" => Some(Scheme::MeanValue),
            "cotangent" | "cot" => Some(Scheme::Cotangent),
            "belkin" => Some(Scheme::Belkin),
            _ => None,
        }
    }
}

/// Sparse row-indexed weights `w_ij`. Rows are sorted by column; the
/// diagonal is implicit in the difference form.
#[derive(Debug, Clone)]
pub struct SparseLaplacian {
    pub scheme: Scheme,
    rows: Vec<Vec<(u32, f64)>>,
    /// Kernel bandwidth per vertex (Belkin only).
    pub bandwidth: Vec<f64>,
    /// Notes accumulated during construction (boundary fallbacks etc).
    pub notes: Vec<String>,
}

/// Construction options; [`build_laplacian`] uses the defaults.
#[derive(Debug, Clone, Copy)]
pub struct LaplacianOptions {
    /// Bandwidth `h` for Belkin weights; `None` picks the mean edge length.
    pub bandwidth: Option<f64>,
    /// Belkin kernel terms below this fraction of the row maximum are
    /// dropped. Zero keeps every term (exact mode).
    pub truncation: f64,
}

impl Default for LaplacianOptions {
    fn default() -> Self {
        LaplacianOptions {
            bandwidth: None,
            truncation: 1e-12,
        }
    }
}

/// Builds the weight matrix for a scheme with default options.
pub fn build_laplacian(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    scheme: Scheme,
) -> Result<SparseLaplacian, GeometryError> {
    build_laplacian_with(mesh, adjacency, scheme, LaplacianOptions::default())
}

/// Builds the weight matrix for a scheme.
pub fn build_laplacian_with(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    scheme: Scheme,
    options: LaplacianOptions,
) -> Result<SparseLaplacian, GeometryError> {
    let nv = mesh.vertex_count();
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); nv];
    let mut notes = Vec::new();
    let mut bandwidth = Vec::new();
    match scheme {
        Scheme::Combinatorial => {
            for v in 0..nv as u32 {
                rows[v as usize] = adjacency.neighbors(v).iter().map(|&j| (j, 1.0)).collect();
            }
        }
        Scheme::Uniform => {
            for v in 0..nv as u32 {
                let ring = adjacency.neighbors(v);
                let w = 1.0 / ring.len() as f64;
                rows[v as usize] = ring.iter().map(|&j| (j, w)).collect();
            }
        }
        Scheme::Cotangent => {
            let mut boundary_edges = 0usize;
            for (e, &(a, b)) in adjacency.edges().iter().enumerate() {
                let (t0, t1) = adjacency.edge_triangles(e);
                let mut w = cot_opposite(mesh, t0 as usize, a, b);
                match t1 {
                    Some(t1) => w += cot_opposite(mesh, t1 as usize, a, b),
                    None => boundary_edges += 1,
                }
                rows[a as usize].push((b, w));
                rows[b as usize].push((a, w));
            }
            if boundary_edges > 0 {
                notes.push(format!(
                    "cotangent: {boundary_edges} boundary edges use a single triangle angle"
                ));
            }
        }
        Scheme::MeanValue => {
            let mut boundary_edges = 0usize;
            for (e, &(a, b)) in adjacency.edges().iter().enumerate() {
                let (t0, t1) = adjacency.edge_triangles(e);
                if t1.is_none() {
                    boundary_edges += 1;
                }
                let len = (mesh.position(a) - mesh.position(b)).norm();
                // the two angles at the row vertex flanking the edge differ
                // between rows, so the weights are directional
                let mut w_ab = half_tan_at(mesh, t0 as usize, a, b);
                let mut w_ba = half_tan_at(mesh, t0 as usize, b, a);
                if let Some(t1) = t1 {
                    w_ab += half_tan_at(mesh, t1 as usize, a, b);
                    w_ba += half_tan_at(mesh, t1 as usize, b, a);
                }
                rows[a as usize].push((b, w_ab / len));
                rows[b as usize].push((a, w_ba / len));
            }
            if boundary_edges > 0 {
                notes.push(format!(
                    "mean-value: {boundary_edges} boundary edges use a single flanking angle"
                ));
            }
        }
        Scheme::Belkin => {
            let h = match options.bandwidth {
                Some(h) if h > 0.0 => h,
                Some(h) => {
                    return Err(GeometryError::InvalidParameter(format!(
                        "belkin bandwidth must be positive, got {h}"
                    )))
                }
                None => mesh.mean_edge_length(),
            };
            bandwidth = vec![h; nv];
            let prefactor = 1.0 / (4.0 * std::f64::consts::PI * h * h);
            let areas: Vec<f64> = (0..mesh.triangle_count())
                .map(|t| mesh.triangle_area(t))
                .collect();
            for i in 0..nv as u32 {
                let pi = mesh.position(i);
                let mut dense = vec![0.0f64; nv];
                for (t, tri) in mesh.triangles().iter().enumerate() {
                    let quad = areas[t] / 3.0;
                    for &j in tri {
                        if j == i {
                            continue; // zero difference term
                        }
                        let d2 = (pi - mesh.position(j)).norm_squared();
                        dense[j as usize] += quad * (-d2 / (4.0 * h)).exp();
                    }
                }
                let row_max = dense.iter().cloned().fold(0.0f64, f64::max);
                let cut = options.truncation * row_max;
                rows[i as usize] = dense
                    .iter()
                    .enumerate()
                    .filter(|&(j, &w)| j as u32 != i && w > cut && w > 0.0)
                    .map(|(j, &w)| (j as u32, prefactor * w))
                    .collect();
            }
        }
    }
    for row in &mut rows {
        row.sort_unstable_by_key(|&(j, _)| j);
    }
    Ok(SparseLaplacian {
        scheme,
        rows,
        bandwidth,
        notes,
    })
}

/// Cotangent of the angle opposite edge `(a, b)` in triangle `t`.
fn cot_opposite(mesh: &MeshBuffer, t: usize, a: u32, b: u32) -> f64 {
    let tri = mesh.triangles()[t];
    let opposite = tri.iter().copied().find(|&v| v != a && v != b).unwrap();
    let p = mesh.position(opposite);
    cot(&(mesh.position(a) - p), &(mesh.position(b) - p))
}

/// `tan(angle/2)` of the corner angle at `at` between edge `(at, other)`
/// and the triangle's remaining edge at `at`.
fn half_tan_at(mesh: &MeshBuffer, t: usize, at: u32, other: u32) -> f64 {
    let tri = mesh.triangles()[t];
    let third = tri.iter().copied().find(|&v| v != at && v != other).unwrap();
    let p = mesh.position(at);
    let u = mesh.position(other) - p;
    let v = mesh.position(third) - p;
    let angle = u.normalize().dot(&v.normalize()).clamp(-1.0, 1.0).acos();
    (0.5 * angle).tan()
}

impl SparseLaplacian {
    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: u32) -> &[(u32, f64)] {
        &self.rows[i as usize]
    }

    pub fn weight(&self, i: u32, j: u32) -> f64 {
        self.rows[i as usize]
            .binary_search_by_key(&j, |&(col, _)| col)
            .map(|k| self.rows[i as usize][k].1)
            .unwrap_or(0.0)
    }

    /// Applies the operator: `(L phi)_i = sum_j w_ij (phi_j - phi_i)`.
    pub fn apply(&self, phi: &ScalarField) -> ScalarField {
        let mut out = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let phi_i = phi.0[i];
            let mut acc = 0.0;
            for &(j, w) in row {
                acc += w * (phi.0[j as usize] - phi_i);
            }
            out.push(acc);
        }
        ScalarField(out)
    }

    /// Component-wise application to a vector field.
    pub fn apply_vector(&self, field: &VectorField) -> VectorField {
        let xs = ScalarField(field.0.iter().map(|v| v.x).collect());
        let ys = ScalarField(field.0.iter().map(|v| v.y).collect());
        let zs = ScalarField(field.0.iter().map(|v| v.z).collect());
        let lx = self.apply(&xs);
        let ly = self.apply(&ys);
        let lz = self.apply(&zs);
        VectorField(
            (0..field.len())
                .map(|i| Vector3::new(lx.0[i], ly.0[i], lz.0[i]))
                .collect(),
        )
    }

    /// Coordinate-list text export `row col weight`, rows in order.
    pub fn to_coordinate_list(&self) -> String {
        let mut out = String::new();
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                out.push_str(&format!("{i} {j} {w}\n"));
            }
        }
        out
    }
}

/// Vector Laplacian of the vertex normals, the Laplacian-line precompute.
pub fn vector_laplacian_of_normals(op: &SparseLaplacian, normals: &NormalField) -> VectorField {
    op.apply_vector(&VectorField(normals.vertex_normals().to_vec()))
}

/// Outcome of one structural property check.
#[derive(Debug, Clone)]
pub enum PropertyOutcome {
    Holds,
    /// Violated, with a human-readable witness.
    Violated(String),
    /// Not applicable on this mesh (e.g. Lin on a curved mesh).
    Skipped(String),
}

impl PropertyOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, PropertyOutcome::Holds)
    }

    pub fn violated(&self) -> bool {
        matches!(self, PropertyOutcome::Violated(_))
    }
}

/// Results of the (Sym), (Loc), (Pos), (Lin) checks with witnesses.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub scheme: Scheme,
    pub symmetric: PropertyOutcome,
    pub local: PropertyOutcome,
    pub positive: PropertyOutcome,
    pub linear_precision: PropertyOutcome,
    pub notes: Vec<String>,
}

/// Checks the four structural properties on the given mesh.
///
/// (Sym) compares `w_ij` against `w_ji`; (Loc) tests row support against the
/// one-ring; (Pos) looks for negative weights; (Lin) applies the operator to
/// the coordinate fields of a planar mesh and inspects interior vertices
/// (skipped with a note when the mesh is not planar).
pub fn check_properties(
    op: &SparseLaplacian,
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
) -> PropertyReport {
    let nv = op.vertex_count();

    let mut symmetric = PropertyOutcome::Holds;
    'sym: for i in 0..nv as u32 {
        for &(j, w) in op.row(i) {
            let back = op.weight(j, i);
            if (w - back).abs() > 1e-10 * w.abs().max(back.abs()).max(1.0) {
                symmetric = PropertyOutcome::Violated(format!(
                    "w[{i}][{j}] = {w:.6e} but w[{j}][{i}] = {back:.6e}"
                ));
                break 'sym;
            }
        }
    }

    let mut local = PropertyOutcome::Holds;
    'loc: for i in 0..nv as u32 {
        for &(j, w) in op.row(i) {
            if w != 0.0 && adjacency.neighbors(i).binary_search(&j).is_err() {
                local = PropertyOutcome::Violated(format!(
                    "w[{i}][{j}] = {w:.6e} although ({i}, {j}) is not an edge"
                ));
                break 'loc;
            }
        }
    }

    let mut positive = PropertyOutcome::Holds;
    'pos: for i in 0..nv as u32 {
        for &(j, w) in op.row(i) {
            if w < 0.0 {
                positive =
                    PropertyOutcome::Violated(format!("negative weight w[{i}][{j}] = {w:.6e}"));
                break 'pos;
            }
        }
    }

    let linear_precision = check_linear_precision(op, mesh, adjacency);

    PropertyReport {
        scheme: op.scheme,
        symmetric,
        local,
        positive,
        linear_precision,
        notes: op.notes.clone(),
    }
}

fn check_linear_precision(
    op: &SparseLaplacian,
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
) -> PropertyOutcome {
    // planarity test against the best-fit plane through the first triangle
    let n = mesh.triangle_normal(0);
    let p0 = mesh.position(mesh.triangles()[0][0]);
    let extent = mesh.bbox_diagonal();
    let planar = mesh
        .positions()
        .iter()
        .all(|p| ((p - p0).dot(&n)).abs() < 1e-9 * extent);
    if !planar {
        return PropertyOutcome::Skipped("mesh is not planar".into());
    }
    // linear fields: both in-plane coordinates
    let b1 = (mesh.position(mesh.triangles()[0][1]) - p0).normalize();
    let b2 = n.cross(&b1);
    for (name, field) in [
        (
            "x",
            ScalarField(mesh.positions().iter().map(|p| (p - p0).dot(&b1)).collect()),
        ),
        (
            "y",
            ScalarField(mesh.positions().iter().map(|p| (p - p0).dot(&b2)).collect()),
        ),
    ] {
        let image = op.apply(&field);
        let scale = field.abs_scale().max(1.0);
        for v in 0..mesh.vertex_count() as u32 {
            if !adjacency.is_interior_vertex(v) {
                continue;
            }
            if image.value(v).abs() > 1e-9 * scale {
                return PropertyOutcome::Violated(format!(
                    "interior vertex {v}: L({name}) = {:.6e}",
                    image.value(v)
                ));
            }
        }
    }
    PropertyOutcome::Holds
}
