//! Indexed triangle meshes, adjacency, and vertex normals.
//!
//! A [`MeshBuffer`] is validated on construction: indices in range, no
//! degenerate triangles, consistent orientation across shared edges, at most
//! two triangles per edge. [`Adjacency`] and [`NormalField`] are derived
//! read-only structures; all three are immutable once built and safe to share
//! across threads.

use nalgebra::{Point3, Vector3};

use crate::error::MeshError;

/// Relative tolerance on triangle area: a triangle is degenerate when its
/// area falls below `1e-12 * bbox_diagonal^2`.
pub const DEGENERATE_AREA_REL: f64 = 1e-12;

/// Indexed triangle mesh with counter-clockwise oriented faces.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshBuffer {
    positions: Vec<Point3<f64>>,
    triangles: Vec<[u32; 3]>,
}

impl MeshBuffer {
    /// Builds a mesh and checks the structural invariants.
    pub fn new(positions: Vec<Point3<f64>>, triangles: Vec<[u32; 3]>) -> Result<Self, MeshError> {
        if positions.is_empty() || triangles.is_empty() {
            return Err(MeshError::Empty);
        }
        let count = positions.len();
        for tri in &triangles {
            for &i in tri {
                if i as usize >= count {
                    return Err(MeshError::IndexOutOfRange {
                        index: i as usize,
                        count,
                    });
                }
            }
        }
        let mesh = MeshBuffer {
            positions,
            triangles,
        };
        mesh.check_degenerate()?;
        mesh.check_edges()?;
        Ok(mesh)
    }

    fn check_degenerate(&self) -> Result<(), MeshError> {
        let tol = DEGENERATE_AREA_REL * self.bbox_diagonal().powi(2);
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0] {
                return Err(MeshError::DegenerateTriangle {
                    triangle: t,
                    reason: "repeated vertex index".into(),
                });
            }
            let area = self.triangle_area(t);
            if area <= tol {
                return Err(MeshError::DegenerateTriangle {
                    triangle: t,
                    reason: format!("area {area:.3e} below tolerance {tol:.3e}"),
                });
            }
        }
        Ok(())
    }

    /// Every edge may carry at most two triangles, and a shared edge must be
    /// traversed in opposite directions by its two triangles.
    fn check_edges(&self) -> Result<(), MeshError> {
        use std::collections::BTreeMap;
        // key: undirected edge; value: (forward traversals, backward traversals)
        let mut edges: BTreeMap<(u32, u32), (u32, u32)> = BTreeMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                let key = (a.min(b), a.max(b));
                let entry = edges.entry(key).or_insert((0, 0));
                if a < b {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        let bad: Vec<(u32, u32)> = edges
            .iter()
            .filter(|(_, &(f, b))| f + b > 2)
            .map(|(&e, _)| e)
            .collect();
        if !bad.is_empty() {
            return Err(MeshError::NonManifold { edges: bad });
        }
        for (&edge, &(f, b)) in &edges {
            // two triangles on one edge must traverse it in opposite directions
            if f + b == 2 && f != 1 {
                return Err(MeshError::InconsistentOrientation { edge });
            }
        }
        Ok(())
    }

    pub fn positions(&self) -> &[Point3<f64>] {
        &self.positions
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn position(&self, v: u32) -> Point3<f64> {
        self.positions[v as usize]
    }

    /// Corner positions of triangle `t` in stored order.
    pub fn triangle_points(&self, t: usize) -> [Point3<f64>; 3] {
        let [i, j, k] = self.triangles[t];
        [self.position(i), self.position(j), self.position(k)]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    /// Unit triangle normal following the stored orientation.
    pub fn triangle_normal(&self, t: usize) -> Vector3<f64> {
        let [a, b, c] = self.triangle_points(t);
        (b - a).cross(&(c - a)).normalize()
    }

    pub fn triangle_centroid(&self, t: usize) -> Point3<f64> {
        let [a, b, c] = self.triangle_points(t);
        Point3::from((a.coords + b.coords + c.coords) / 3.0)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangle_count()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn bbox(&self) -> (Point3<f64>, Point3<f64>) {
        let mut lo = self.positions[0];
        let mut hi = self.positions[0];
        for p in &self.positions {
            for d in 0..3 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (lo, hi)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi - lo).norm()
    }

    pub fn mean_edge_length(&self) -> f64 {
        let mut sum = 0.0;
        let mut n = 0usize;
        for tri in &self.triangles {
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                if a < b {
                    sum += (self.position(a) - self.position(b)).norm();
                    n += 1;
                }
            }
        }
        sum / n as f64
    }

    /// Returns a copy with new vertex positions but identical topology.
    pub fn with_positions(&self, positions: Vec<Point3<f64>>) -> MeshBuffer {
        assert_eq!(positions.len(), self.positions.len());
        MeshBuffer {
            positions,
            triangles: self.triangles.clone(),
        }
    }
}

/// Derived connectivity: edges, one-rings, and edge-to-triangle incidence.
#[derive(Debug, Clone)]
pub struct Adjacency {
    /// Undirected edges `(i, j)` with `i < j`, sorted.
    edges: Vec<(u32, u32)>,
    /// One or two incident triangles per edge, parallel to `edges`.
    edge_triangles: Vec<(u32, Option<u32>)>,
    /// Sorted one-ring neighborhood per vertex.
    neighbors: Vec<Vec<u32>>,
    /// Incident triangles per vertex, sorted.
    vertex_triangles: Vec<Vec<u32>>,
}

impl Adjacency {
    pub fn build(mesh: &MeshBuffer) -> Result<Self, MeshError> {
        use std::collections::BTreeMap;
        let nv = mesh.vertex_count();
        let mut edge_map: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        let mut vertex_triangles = vec![Vec::new(); nv];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                edge_map
                    .entry((a.min(b), a.max(b)))
                    .or_default()
                    .push(t as u32);
                vertex_triangles[tri[k] as usize].push(t as u32);
            }
        }
        let bad: Vec<(u32, u32)> = edge_map
            .iter()
            .filter(|(_, tris)| tris.len() > 2)
            .map(|(&e, _)| e)
            .collect();
        if !bad.is_empty() {
            return Err(MeshError::NonManifold { edges: bad });
        }
        let mut edges = Vec::with_capacity(edge_map.len());
        let mut edge_triangles = Vec::with_capacity(edge_map.len());
        let mut neighbors = vec![Vec::new(); nv];
        for (&(a, b), tris) in &edge_map {
            edges.push((a, b));
            edge_triangles.push((tris[0], tris.get(1).copied()));
            neighbors[a as usize].push(b);
            neighbors[b as usize].push(a);
        }
        for (v, ring) in neighbors.iter_mut().enumerate() {
            ring.sort_unstable();
            if ring.is_empty() {
                return Err(MeshError::IsolatedVertex(v as u32));
            }
        }
        for tris in &mut vertex_triangles {
            tris.sort_unstable();
            tris.dedup();
        }
        Ok(Adjacency {
            edges,
            edge_triangles,
            neighbors,
            vertex_triangles,
        })
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index into [`Self::edges`] for the undirected edge `(a, b)`.
    pub fn edge_index(&self, a: u32, b: u32) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).ok()
    }

    /// The one or two triangles incident to edge index `e`.
    pub fn edge_triangles(&self, e: usize) -> (u32, Option<u32>) {
        self.edge_triangles[e]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_triangles[e].1.is_none()
    }

    /// Sorted one-ring of vertex `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[v as usize]
    }

    pub fn vertex_triangles(&self, v: u32) -> &[u32] {
        &self.vertex_triangles[v as usize]
    }

    /// A vertex is interior when none of its incident edges is a boundary edge.
    pub fn is_interior_vertex(&self, v: u32) -> bool {
        self.neighbors(v).iter().all(|&j| {
            self.edge_index(v, j)
                .map(|e| !self.is_boundary_edge(e))
                .unwrap_or(false)
        })
    }

    pub fn boundary_vertex_count(&self) -> usize {
        (0..self.neighbors.len())
            .filter(|&v| !self.is_interior_vertex(v as u32))
            .count()
    }
}

/// Unit normals per vertex (angle-weighted) and per triangle.
#[derive(Debug, Clone)]
pub struct NormalField {
    vertex: Vec<Vector3<f64>>,
    triangle: Vec<Vector3<f64>>,
}

impl NormalField {
    /// Angle-weighted vertex normals: each incident triangle contributes its
    /// unit normal weighted by the corner angle at the vertex.
    pub fn compute(mesh: &MeshBuffer, adjacency: &Adjacency) -> Result<Self, MeshError> {
        let triangle: Vec<Vector3<f64>> = (0..mesh.triangle_count())
            .map(|t| mesh.triangle_normal(t))
            .collect();
        let mut vertex = Vec::with_capacity(mesh.vertex_count());
        for v in 0..mesh.vertex_count() as u32 {
            let tris = adjacency.vertex_triangles(v);
            if tris.is_empty() {
                return Err(MeshError::IsolatedVertex(v));
            }
            let mut acc = Vector3::zeros();
            for &t in tris {
                let tri = mesh.triangles()[t as usize];
                let corner = tri.iter().position(|&i| i == v).unwrap();
                let p = mesh.position(tri[corner]);
                let a = mesh.position(tri[(corner + 1) % 3]);
                let b = mesh.position(tri[(corner + 2) % 3]);
                let angle = corner_angle(&p, &a, &b);
                acc += angle * triangle[t as usize];
            }
            vertex.push(acc.normalize());
        }
        Ok(NormalField { vertex, triangle })
    }

    pub fn vertex(&self, v: u32) -> Vector3<f64> {
        self.vertex[v as usize]
    }

    pub fn triangle(&self, t: usize) -> Vector3<f64> {
        self.triangle[t]
    }

    pub fn vertex_normals(&self) -> &[Vector3<f64>] {
        &self.vertex
    }

    pub fn set_vertex_normals(&mut self, normals: Vec<Vector3<f64>>) {
        assert_eq!(normals.len(), self.vertex.len());
        self.vertex = normals;
    }
}

/// Interior angle at `p` in the triangle `(p, a, b)`.
pub fn corner_angle(p: &Point3<f64>, a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    let u = (a - p).normalize();
    let v = (b - p).normalize();
    u.dot(&v).clamp(-1.0, 1.0).acos()
}
