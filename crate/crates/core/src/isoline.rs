//! Zero-set extraction of per-vertex scalar fields across triangle
//! interiors, polyline assembly, line-integral strengths, and filtering.
//!
//! Each triangle with a sign change contributes one segment whose endpoints
//! lie on edges ([`OnEdgePoint`]). Segments meeting at the same edge point
//! are chained into maximal polylines. Vertex-exact zeros are nudged to a
//! tiny positive value so the crossing logic never runs through a vertex.

use nalgebra::Point3;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::GeometryError;
use crate::field::ScalarField;
use crate::mesh::{Adjacency, MeshBuffer};

/// Relative tolerance under which a vertex value counts as exactly zero.
pub const VERTEX_ZERO_REL: f64 = 1e-12;
/// Tolerance on the edge parameter when welding crossings from the two
/// triangles sharing an edge.
pub const CHAIN_T_TOL: f64 = 1e-9;

/// A point on a mesh edge: ordered vertex pair `(i, j)` with `i < j` and
/// parameter `t` running from `i` to `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnEdgePoint {
    pub edge: (u32, u32),
    pub t: f64,
    pub position: Point3<f64>,
}

impl OnEdgePoint {
    pub fn new(mesh: &MeshBuffer, a: u32, b: u32, t_from_a: f64) -> OnEdgePoint {
        let (edge, t) = if a < b {
            ((a, b), t_from_a)
        } else {
            ((b, a), 1.0 - t_from_a)
        };
        let pa = mesh.position(edge.0);
        let pb = mesh.position(edge.1);
        OnEdgePoint {
            edge,
            t,
            position: Point3::from(pa.coords * (1.0 - t) + pb.coords * t),
        }
    }

    /// Linear interpolation of a per-vertex field at this point.
    pub fn interpolate(&self, field: &ScalarField) -> f64 {
        (1.0 - self.t) * field.value(self.edge.0) + self.t * field.value(self.edge.1)
    }
}

/// Ridge/valley classification of a polyline, where applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Ridge,
    Valley,
    None,
}

/// Extraction method tags, also used as CLI and JSON identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Contour,
    Crease,
    RidgeValley,
    SuggestiveContour,
    ApparentRidge,
    PhoticExtremum,
    DemarcatingCurve,
    LaplacianLine,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Contour,
        Method::Crease,
        Method::RidgeValley,
        Method::SuggestiveContour,
        Method::ApparentRidge,
        Method::PhoticExtremum,
        Method::DemarcatingCurve,
        Method::LaplacianLine,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::Contour => "contour",
            Method::Crease => "crease",
            Method::RidgeValley => "rv",
            Method::SuggestiveContour => "sc",
            Method::ApparentRidge => "ar",
            Method::PhoticExtremum => "pel",
            Method::DemarcatingCurve => "dc",
            Method::LaplacianLine => "ll",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Method> {
        Method::ALL.iter().copied().find(|m| m.tag() == tag)
    }

    /// Whether the extracted lines depend on the camera.
    pub fn view_dependent(&self) -> bool {
        !matches!(
            self,
            Method::Crease | Method::RidgeValley | Method::DemarcatingCurve
        )
    }
}

/// A chained sequence of on-edge points with per-line strength and polarity.
/// `weights` carries the per-point filter quantity when the method has one.
#[derive(Debug, Clone)]
pub struct Polyline {
    pub points: Vec<OnEdgePoint>,
    pub weights: Vec<f64>,
    pub strength: f64,
    pub polarity: Polarity,
    pub closed: bool,
}

impl Polyline {
    pub fn length(&self) -> f64 {
        let mut len = 0.0;
        for k in 0..self.points.len().saturating_sub(1) {
            len += (self.points[k + 1].position - self.points[k].position).norm();
        }
        if self.closed && self.points.len() > 1 {
            len += (self.points[0].position - self.points[self.points.len() - 1].position).norm();
        }
        len
    }
}

/// Polylines extracted by one method.
#[derive(Debug, Clone)]
pub struct LineSet {
    pub method: Method,
    pub polylines: Vec<Polyline>,
    /// Per-triangle or per-vertex exclusions encountered during extraction.
    pub diagnostics: Vec<String>,
}

impl LineSet {
    pub fn empty(method: Method) -> LineSet {
        LineSet {
            method,
            polylines: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    pub fn total_points(&self) -> usize {
        self.polylines.iter().map(|p| p.points.len()).sum()
    }

    /// All point positions, closed loops without the duplicate closing point.
    pub fn all_positions(&self) -> Vec<Point3<f64>> {
        self.polylines
            .iter()
            .flat_map(|p| p.points.iter().map(|q| q.position))
            .collect()
    }
}

impl Serialize for LineSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct PointRepr {
            edge: [u32; 2],
            t: f64,
            xyz: [f64; 3],
        }
        #[derive(Serialize)]
        struct PolyRepr {
            strength: f64,
            polarity: Polarity,
            points: Vec<PointRepr>,
        }
        let polylines: Vec<PolyRepr> = self
            .polylines
            .iter()
            .map(|poly| {
                let mut points: Vec<PointRepr> = poly
                    .points
                    .iter()
                    .map(|p| PointRepr {
                        edge: [p.edge.0, p.edge.1],
                        t: p.t,
                        xyz: [p.position.x, p.position.y, p.position.z],
                    })
                    .collect();
                if poly.closed {
                    if let Some(first) = poly.points.first() {
                        points.push(PointRepr {
                            edge: [first.edge.0, first.edge.1],
                            t: first.t,
                            xyz: [first.position.x, first.position.y, first.position.z],
                        });
                    }
                }
                PolyRepr {
                    strength: poly.strength,
                    polarity: poly.polarity,
                    points,
                }
            })
            .collect();
        let mut state = serializer.serialize_struct("LineSet", 2)?;
        state.serialize_field("method", self.method.tag())?;
        state.serialize_field("polylines", &polylines)?;
        state.end()
    }
}

/// One segment inside a triangle, or nothing.
///
/// Values are taken per corner; a corner value within `VERTEX_ZERO_REL` of
/// zero (relative to `scale`) is treated as `+epsilon`, so a triangle yields
/// exactly zero or two crossing edges. A triangle whose three values are all
/// exact zeros is reported as degenerate and skipped.
pub fn triangle_zero_crossing(
    mesh: &MeshBuffer,
    triangle: [u32; 3],
    values: [f64; 3],
    scale: f64,
) -> Result<Option<(OnEdgePoint, OnEdgePoint)>, GeometryError> {
    let eps = VERTEX_ZERO_REL * scale.max(f64::MIN_POSITIVE);
    let nudged: Vec<f64> = values
        .iter()
        .map(|&v| if v.abs() <= eps { eps } else { v })
        .collect();
    if values.iter().all(|v| v.abs() <= eps) {
        return Err(GeometryError::InvalidParameter(
            "triangle with identically zero field".into(),
        ));
    }
    let mut crossings: Vec<OnEdgePoint> = Vec::new();
    for k in 0..3 {
        let a = triangle[k];
        let b = triangle[(k + 1) % 3];
        let va = nudged[k];
        let vb = nudged[(k + 1) % 3];
        if va * vb < 0.0 {
            let t = va / (va - vb);
            crossings.push(OnEdgePoint::new(mesh, a, b, t));
        }
    }
    match crossings.len() {
        0 => Ok(None),
        2 => Ok(Some((crossings[0], crossings[1]))),
        n => Err(GeometryError::InvalidParameter(format!(
            "{n} crossings in one triangle"
        ))),
    }
}

/// Extracts the zero set of a per-vertex field. `keep` decides per triangle
/// whether its segment enters the output (method-specific side conditions).
pub fn extract_zero_set<F>(mesh: &MeshBuffer, field: &ScalarField, keep: F) -> LineSet
where
    F: Fn(usize) -> bool,
{
    let corner_values: Vec<[f64; 3]> = mesh
        .triangles()
        .iter()
        .map(|tri| {
            [
                field.value(tri[0]),
                field.value(tri[1]),
                field.value(tri[2]),
            ]
        })
        .collect();
    extract_zero_set_corners(mesh, &corner_values, field.abs_scale(), keep, Method::Contour)
}

/// Zero-set extraction from per-triangle corner values. Used directly by
/// methods whose defining scalar is only well-defined per corner (after
/// per-triangle direction alignment).
pub fn extract_zero_set_corners<F>(
    mesh: &MeshBuffer,
    corner_values: &[[f64; 3]],
    scale: f64,
    keep: F,
    method: Method,
) -> LineSet
where
    F: Fn(usize) -> bool,
{
    let mut segments: Vec<(OnEdgePoint, OnEdgePoint)> = Vec::new();
    let mut diagnostics = Vec::new();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        if !keep(t) {
            continue;
        }
        match triangle_zero_crossing(mesh, *tri, corner_values[t], scale) {
            Ok(Some(seg)) => {
                if (seg.0.position - seg.1.position).norm() > 1e-12 {
                    segments.push(seg);
                }
            }
            Ok(None) => {}
            Err(e) => diagnostics.push(format!("triangle {t}: {e}")),
        }
    }
    let mut lines = chain_segments(segments, method);
    lines.diagnostics = diagnostics;
    lines
}

/// Chains segments sharing endpoints into maximal polylines.
///
/// Endpoints within [`CHAIN_T_TOL`] on the same edge are welded into one
/// node. Open chains start and end at nodes of degree other than two;
/// whatever remains afterwards consists of closed loops. Deterministic:
/// segments are processed in insertion order, nodes in creation order.
pub fn chain_segments(segments: Vec<(OnEdgePoint, OnEdgePoint)>, method: Method) -> LineSet {
    use std::collections::BTreeMap;

    let mut node_ids: BTreeMap<(u32, u32, i64), usize> = BTreeMap::new();
    let mut nodes: Vec<OnEdgePoint> = Vec::new();
    let mut seg_nodes: Vec<(usize, usize)> = Vec::new();
    {
        let mut node_of = |p: &OnEdgePoint, nodes: &mut Vec<OnEdgePoint>| -> usize {
            let q = (p.t / CHAIN_T_TOL).round() as i64;
            // check the adjacent quantization cells so near-boundary values
            // weld regardless of which side they round to
            for dq in [-1i64, 0, 1] {
                if let Some(&id) = node_ids.get(&(p.edge.0, p.edge.1, q + dq)) {
                    if (nodes[id].t - p.t).abs() < CHAIN_T_TOL {
                        return id;
                    }
                }
            }
            nodes.push(*p);
            let id = nodes.len() - 1;
            node_ids.insert((p.edge.0, p.edge.1, q), id);
            id
        };
        for (a, b) in &segments {
            let ia = node_of(a, &mut nodes);
            let ib = node_of(b, &mut nodes);
            if ia != ib {
                seg_nodes.push((ia, ib));
            }
        }
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (s, &(a, b)) in seg_nodes.iter().enumerate() {
        incident[a].push(s);
        incident[b].push(s);
    }

    let other = |s: usize, n: usize| {
        let (a, b) = seg_nodes[s];
        if a == n {
            b
        } else {
            a
        }
    };
    let mut used = vec![false; seg_nodes.len()];
    let walk = |start_node: usize, start_seg: usize, used: &mut Vec<bool>| -> (Vec<usize>, bool) {
        let mut chain = vec![start_node];
        let mut node = start_node;
        let mut seg = start_seg;
        loop {
            used[seg] = true;
            let next = other(seg, node);
            if next == start_node {
                return (chain, true);
            }
            chain.push(next);
            node = next;
            if incident[node].len() != 2 {
                return (chain, false);
            }
            match incident[node].iter().copied().find(|&s| !used[s]) {
                Some(s) => seg = s,
                None => return (chain, false),
            }
        }
    };

    let mut polylines = Vec::new();
    // open chains and junction-anchored chains first
    for n in 0..nodes.len() {
        if incident[n].len() == 2 {
            continue;
        }
        for s in incident[n].clone() {
            if !used[s] {
                let (chain, closed) = walk(n, s, &mut used);
                push_polyline(&nodes, chain, closed, &mut polylines);
            }
        }
    }
    // remaining segments form closed loops of degree-2 nodes
    for s0 in 0..seg_nodes.len() {
        if used[s0] {
            continue;
        }
        let (chain, closed) = walk(seg_nodes[s0].0, s0, &mut used);
        push_polyline(&nodes, chain, closed, &mut polylines);
    }
    LineSet {
        method,
        polylines,
        diagnostics: Vec::new(),
    }
}

/// Chains whole mesh edges (crease lines, edge-based contours) into
/// polylines along shared vertices. Each chained vertex is reported as an
/// [`OnEdgePoint`] with parameter 0 or 1 on one of its chain edges.
pub fn chain_mesh_edges(mesh: &MeshBuffer, edges: &[(u32, u32)], method: Method) -> LineSet {
    use std::collections::BTreeMap;
    let mut incident: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (s, &(a, b)) in edges.iter().enumerate() {
        incident.entry(a).or_default().push(s);
        incident.entry(b).or_default().push(s);
    }
    let degree = |v: u32| incident.get(&v).map(|l| l.len()).unwrap_or(0);
    let other = |s: usize, v: u32| {
        let (a, b) = edges[s];
        if a == v {
            b
        } else {
            a
        }
    };
    let mut used = vec![false; edges.len()];
    let walk = |start: u32, start_seg: usize, used: &mut Vec<bool>| -> (Vec<u32>, bool) {
        let mut chain = vec![start];
        let mut node = start;
        let mut seg = start_seg;
        loop {
            used[seg] = true;
            let next = other(seg, node);
            if next == start {
                return (chain, true);
            }
            chain.push(next);
            node = next;
            if degree(node) != 2 {
                return (chain, false);
            }
            match incident[&node].iter().copied().find(|&s| !used[s]) {
                Some(s) => seg = s,
                None => return (chain, false),
            }
        }
    };
    let mut chains: Vec<(Vec<u32>, bool)> = Vec::new();
    let starts: Vec<u32> = incident
        .iter()
        .filter(|(_, list)| list.len() != 2)
        .map(|(&v, _)| v)
        .collect();
    for v in starts {
        for s in incident[&v].clone() {
            if !used[s] {
                chains.push(walk(v, s, &mut used));
            }
        }
    }
    for s0 in 0..edges.len() {
        if !used[s0] {
            chains.push(walk(edges[s0].0, s0, &mut used));
        }
    }
    let polylines = chains
        .into_iter()
        .filter(|(chain, _)| chain.len() >= 2)
        .map(|(chain, closed)| {
            let mut points = Vec::with_capacity(chain.len());
            points.push(OnEdgePoint::new(mesh, chain[0], chain[1], 0.0));
            for k in 1..chain.len() {
                points.push(OnEdgePoint::new(mesh, chain[k - 1], chain[k], 1.0));
            }
            Polyline {
                weights: vec![0.0; points.len()],
                points,
                strength: 0.0,
                polarity: Polarity::None,
                closed,
            }
        })
        .collect();
    LineSet {
        method,
        polylines,
        diagnostics: Vec::new(),
    }
}

fn push_polyline(
    nodes: &[OnEdgePoint],
    chain: Vec<usize>,
    closed: bool,
    out: &mut Vec<Polyline>,
) {
    if chain.len() < 2 && !closed {
        return;
    }
    let points: Vec<OnEdgePoint> = chain.iter().map(|&n| nodes[n]).collect();
    out.push(Polyline {
        weights: vec![0.0; points.len()],
        points,
        strength: 0.0,
        polarity: Polarity::None,
        closed,
    });
}

/// Trapezoid-rule line integral of a per-vertex weight field along a
/// polyline: sum of `(w_i + w_{i+1})/2 * |x_i - x_{i+1}|`.
pub fn line_strength(polyline: &Polyline, weight: &ScalarField) -> f64 {
    if polyline.points.len() < 2 {
        return 0.0;
    }
    let w: Vec<f64> = polyline
        .points
        .iter()
        .map(|p| p.interpolate(weight))
        .collect();
    let mut total = 0.0;
    for k in 0..polyline.points.len() - 1 {
        let d = (polyline.points[k + 1].position - polyline.points[k].position).norm();
        total += 0.5 * (w[k] + w[k + 1]) * d;
    }
    if polyline.closed {
        let d = (polyline.points[0].position
            - polyline.points[polyline.points.len() - 1].position)
            .norm();
        total += 0.5 * (w[polyline.points.len() - 1] + w[0]) * d;
    }
    total
}

/// Fills `strength` on every polyline with the integral of `weight`.
pub fn assign_strengths(lines: &mut LineSet, weight: &ScalarField) {
    for poly in &mut lines.polylines {
        poly.strength = line_strength(poly, weight);
        poly.weights = poly.points.iter().map(|p| p.interpolate(weight)).collect();
    }
}

/// Filtering mode for extracted lines.
#[derive(Debug, Clone, Copy)]
pub enum FilterMode {
    /// Removes whole polylines with `strength < tau`.
    DropBelow(f64),
    /// Keeps runs of points with weight above `low` that contain at least
    /// one point above `high`; polylines are split at removed points.
    Hysteresis { low: f64, high: f64 },
}

/// Applies a filter, consuming the input set.
pub fn filter_lines(lines: LineSet, mode: FilterMode) -> Result<LineSet, GeometryError> {
    match mode {
        FilterMode::DropBelow(tau) => {
            let mut out = LineSet {
                method: lines.method,
                polylines: Vec::new(),
                diagnostics: lines.diagnostics,
            };
            for poly in lines.polylines {
                if poly.strength >= tau {
                    out.polylines.push(poly);
                }
            }
            Ok(out)
        }
        FilterMode::Hysteresis { low, high } => {
            if low > high {
                return Err(GeometryError::InvalidParameter(format!(
                    "hysteresis low {low} exceeds high {high}"
                )));
            }
            let mut out = LineSet {
                method: lines.method,
                polylines: Vec::new(),
                diagnostics: lines.diagnostics,
            };
            for poly in lines.polylines {
                hysteresis_split(poly, low, high, &mut out.polylines);
            }
            Ok(out)
        }
    }
}

fn hysteresis_split(poly: Polyline, low: f64, high: f64, out: &mut Vec<Polyline>) {
    // a closed loop is unrolled for run detection
    let n = poly.points.len();
    if n == 0 {
        return;
    }
    let mut runs: Vec<(usize, usize)> = Vec::new(); // inclusive index ranges
    let mut run_start: Option<usize> = None;
    for k in 0..n {
        if poly.weights[k] >= low {
            run_start.get_or_insert(k);
        } else {
            if let Some(s) = run_start.take() {
                runs.push((s, k - 1));
            }
        }
    }
    if let Some(s) = run_start.take() {
        runs.push((s, n - 1));
    }
    // a fully surviving closed loop stays closed
    if poly.closed && runs.len() == 1 && runs[0] == (0, n - 1) {
        if poly.weights.iter().any(|&w| w >= high) {
            out.push(poly);
        }
        return;
    }
    // merge wrap-around run for closed loops
    let mut runs = runs;
    if poly.closed && runs.len() >= 2 {
        let first = runs[0];
        let last = *runs.last().unwrap();
        if first.0 == 0 && last.1 == n - 1 {
            runs.remove(0);
            let idx = runs.len() - 1;
            runs[idx] = (last.0, first.1 + n);
        }
    }
    for (s, e) in runs {
        let indices: Vec<usize> = (s..=e).map(|k| k % n).collect();
        if indices.len() < 2 {
            continue;
        }
        if !indices.iter().any(|&k| poly.weights[k] >= high) {
            continue;
        }
        let points: Vec<OnEdgePoint> = indices.iter().map(|&k| poly.points[k]).collect();
        let weights: Vec<f64> = indices.iter().map(|&k| poly.weights[k]).collect();
        out.push(Polyline {
            points,
            weights,
            strength: poly.strength,
            polarity: poly.polarity,
            closed: false,
        });
    }
}

/// Convenience: mean edge length between consecutive polyline points.
pub fn mean_segment_length(lines: &LineSet) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for poly in &lines.polylines {
        total += poly.length();
        count += poly.points.len().saturating_sub(1) + usize::from(poly.closed);
    }
    if count == 0 {
        0.0
    } else {
        total / count as f64
    }
}

/// Symmetric mean distance between the point sets of two line sets.
pub fn point_set_distance(a: &LineSet, b: &LineSet) -> f64 {
    let pa = a.all_positions();
    let pb = b.all_positions();
    if pa.is_empty() || pb.is_empty() {
        return f64::INFINITY;
    }
    let one_sided = |from: &[Point3<f64>], to: &[Point3<f64>]| -> f64 {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / from.len() as f64
    };
    0.5 * (one_sided(&pa, &pb) + one_sided(&pb, &pa))
}

/// True when every polyline is closed or ends on a mesh boundary edge.
pub fn all_loops_closed_or_on_boundary(lines: &LineSet, adjacency: &Adjacency) -> bool {
    lines.polylines.iter().all(|poly| {
        if poly.closed {
            return true;
        }
        let on_boundary = |p: &OnEdgePoint| {
            adjacency
                .edge_index(p.edge.0, p.edge.1)
                .map(|e| adjacency.is_boundary_edge(e))
                .unwrap_or(false)
        };
        match (poly.points.first(), poly.points.last()) {
            (Some(first), Some(last)) => on_boundary(first) && on_boundary(last),
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use approx::assert_relative_eq;

    fn unit_triangle() -> MeshBuffer {
        MeshBuffer::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn crossing_at_midpoints() {
        let mesh = unit_triangle();
        let seg = triangle_zero_crossing(&mesh, [0, 1, 2], [1.0, 1.0, -1.0], 1.0)
            .unwrap()
            .unwrap();
        for p in [seg.0, seg.1] {
            assert_relative_eq!(p.t, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn no_sign_change_no_segment() {
        let mesh = unit_triangle();
        let seg = triangle_zero_crossing(&mesh, [0, 1, 2], [1.0, 2.0, 3.0], 3.0).unwrap();
        assert!(seg.is_none());
    }

    #[test]
    fn crossing_interpolates_to_zero() {
        let mesh = unit_triangle();
        let values = [-1.0, 4.0, 4.0];
        let seg = triangle_zero_crossing(&mesh, [0, 1, 2], values, 4.0)
            .unwrap()
            .unwrap();
        for p in [seg.0, seg.1] {
            let va = if p.edge.0 == 0 { -1.0 } else { 4.0 };
            let vb = if p.edge.1 == 0 { -1.0 } else { 4.0 };
            let lerp = (1.0 - p.t) * va + p.t * vb;
            assert_relative_eq!(lerp, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn all_zero_triangle_skipped_with_diagnostic() {
        let mesh = unit_triangle();
        let r = triangle_zero_crossing(&mesh, [0, 1, 2], [0.0, 0.0, 0.0], 1.0);
        assert!(r.is_err());
    }

    #[test]
    fn position_matches_lerp_invariant() {
        let mesh = shapes::icosphere(1);
        let field = ScalarField(mesh.positions().iter().map(|p| p.z).collect());
        let lines = extract_zero_set(&mesh, &field, |_| true);
        for poly in &lines.polylines {
            for p in &poly.points {
                let pa = mesh.position(p.edge.0);
                let pb = mesh.position(p.edge.1);
                let lerp = pa.coords * (1.0 - p.t) + pb.coords * p.t;
                assert_relative_eq!((lerp - p.position.coords).norm(), 0.0, epsilon = 1e-12);
                assert!((0.0..=1.0).contains(&p.t));
            }
        }
    }

    #[test]
    fn sphere_equator_single_closed_loop() {
        let mesh = shapes::icosphere(3);
        let field = ScalarField(mesh.positions().iter().map(|p| p.z).collect());
        let lines = extract_zero_set(&mesh, &field, |_| true);
        assert_eq!(lines.polylines.len(), 1);
        assert!(lines.polylines[0].closed);
        let length = lines.polylines[0].length();
        let expected = std::f64::consts::TAU;
        assert!((length - expected).abs() / expected < 0.05);
    }

    #[test]
    fn planar_line_straight() {
        let mesh = shapes::planar_grid(8, 1.0);
        let field = ScalarField(mesh.positions().iter().map(|p| p.x - 0.5).collect());
        let lines = extract_zero_set(&mesh, &field, |_| true);
        assert!(!lines.is_empty());
        for poly in &lines.polylines {
            for p in &poly.points {
                assert_relative_eq!(p.position.x, 0.5, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn all_positive_field_empty() {
        let mesh = shapes::icosphere(1);
        let field = ScalarField::constant(mesh.vertex_count(), 2.0);
        let lines = extract_zero_set(&mesh, &field, |_| true);
        assert!(lines.is_empty());
    }

    #[test]
    fn sign_flip_same_point_set() {
        let mesh = shapes::icosphere(2);
        let field = ScalarField(mesh.positions().iter().map(|p| p.z - 0.2).collect());
        let flipped = ScalarField(field.values().iter().map(|v| -v).collect());
        let a = extract_zero_set(&mesh, &field, |_| true);
        let b = extract_zero_set(&mesh, &flipped, |_| true);
        assert!(point_set_distance(&a, &b) < 1e-12);
    }

    #[test]
    fn reindexing_invariance() {
        let mesh = shapes::icosphere(2);
        let nv = mesh.vertex_count() as u32;
        let perm: Vec<u32> = (0..nv).rev().collect();
        let mut inv = vec![0u32; nv as usize];
        for (new, &old) in perm.iter().enumerate() {
            inv[old as usize] = new as u32;
        }
        let remesh = MeshBuffer::new(
            perm.iter().map(|&old| mesh.position(old)).collect(),
            mesh.triangles()
                .iter()
                .map(|&[i, j, k]| [inv[i as usize], inv[j as usize], inv[k as usize]])
                .collect(),
        )
        .unwrap();
        let f0 = ScalarField(mesh.positions().iter().map(|p| p.z - 0.1).collect());
        let f1 = ScalarField(remesh.positions().iter().map(|p| p.z - 0.1).collect());
        let a = extract_zero_set(&mesh, &f0, |_| true);
        let b = extract_zero_set(&remesh, &f1, |_| true);
        assert!(point_set_distance(&a, &b) < 1e-12);
    }

    #[test]
    fn strength_single_trapezoid() {
        let mesh = MeshBuffer::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(2.0, 0.0, 0.0),
                Point3::new(0.0, 2.0, 0.0),
                Point3::new(2.0, 2.0, 0.0),
            ],
            vec![[0, 1, 2], [1, 3, 2]],
        )
        .unwrap();
        // two points two units apart with weights 1 and 3
        let poly = Polyline {
            points: vec![
                OnEdgePoint::new(&mesh, 0, 1, 0.0),
                OnEdgePoint::new(&mesh, 0, 1, 1.0),
            ],
            weights: vec![],
            strength: 0.0,
            polarity: Polarity::None,
            closed: false,
        };
        let w = ScalarField(vec![1.0, 3.0, 0.0, 0.0]);
        assert_relative_eq!(line_strength(&poly, &w), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn strength_constant_weight_is_length() {
        let mesh = shapes::icosphere(2);
        let field = ScalarField(mesh.positions().iter().map(|p| p.z).collect());
        let lines = extract_zero_set(&mesh, &field, |_| true);
        let c = 2.5;
        let w = ScalarField::constant(mesh.vertex_count(), c);
        for poly in &lines.polylines {
            assert_relative_eq!(
                line_strength(poly, &w),
                c * poly.length(),
                epsilon = 1e-9,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn strength_unchanged_by_collinear_refinement() {
        let mesh = shapes::planar_grid(4, 4.0);
        let a = OnEdgePoint::new(&mesh, 0, 1, 0.0);
        let b = OnEdgePoint::new(&mesh, 0, 1, 0.5);
        let c = OnEdgePoint::new(&mesh, 0, 1, 1.0);
        let w = ScalarField(
            (0..mesh.vertex_count())
                .map(|v| 1.0 + mesh.position(v as u32).x)
                .collect(),
        );
        let coarse = Polyline {
            points: vec![a, c],
            weights: vec![],
            strength: 0.0,
            polarity: Polarity::None,
            closed: false,
        };
        let fine = Polyline {
            points: vec![a, b, c],
            weights: vec![],
            strength: 0.0,
            polarity: Polarity::None,
            closed: false,
        };
        assert_relative_eq!(
            line_strength(&coarse, &w),
            line_strength(&fine, &w),
            epsilon = 1e-12
        );
    }

    #[test]
    fn filter_identity_at_zero_threshold() {
        let mesh = shapes::icosphere(2);
        let field = ScalarField(mesh.positions().iter().map(|p| p.z).collect());
        let mut lines = extract_zero_set(&mesh, &field, |_| true);
        assign_strengths(&mut lines, &ScalarField::constant(mesh.vertex_count(), 1.0));
        let n = lines.polylines.len();
        let filtered = filter_lines(lines, FilterMode::DropBelow(0.0)).unwrap();
        assert_eq!(filtered.polylines.len(), n);
    }

    #[test]
    fn filter_drops_everything_above_all_strengths() {
        let mesh = shapes::icosphere(2);
        let field = ScalarField(mesh.positions().iter().map(|p| p.z).collect());
        let mut lines = extract_zero_set(&mesh, &field, |_| true);
        assign_strengths(&mut lines, &ScalarField::constant(mesh.vertex_count(), 1.0));
        let filtered = filter_lines(lines, FilterMode::DropBelow(1e9)).unwrap();
        assert!(filtered.is_empty());
    }

    #[test]
    fn filter_matches_brute_force_selection() {
        let mesh = shapes::icosphere(2);
        let field = ScalarField(mesh.positions().iter().map(|p| p.z * p.x).collect());
        let mut lines = extract_zero_set(&mesh, &field, |_| true);
        assign_strengths(&mut lines, &ScalarField::constant(mesh.vertex_count(), 1.0));
        let strengths: Vec<f64> = lines.polylines.iter().map(|p| p.strength).collect();
        let tau = {
            let mut s = strengths.clone();
            s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            s[s.len() / 2]
        };
        let expected = strengths.iter().filter(|&&s| s >= tau).count();
        let filtered = filter_lines(lines, FilterMode::DropBelow(tau)).unwrap();
        assert_eq!(filtered.polylines.len(), expected);
        assert!(filtered.polylines.iter().all(|p| p.strength >= tau));
    }

    #[test]
    fn hysteresis_needs_ordered_thresholds() {
        let lines = LineSet::empty(Method::Contour);
        assert!(filter_lines(lines, FilterMode::Hysteresis { low: 2.0, high: 1.0 }).is_err());
    }

    #[test]
    fn hysteresis_grows_through_low_points() {
        let mesh = shapes::planar_grid(8, 8.0);
        let points: Vec<OnEdgePoint> = (0..5)
            .map(|k| OnEdgePoint::new(&mesh, k, k + 1, 0.5))
            .collect();
        let poly = Polyline {
            weights: vec![0.5, 1.5, 5.0, 1.5, 0.5],
            points,
            strength: 1.0,
            polarity: Polarity::None,
            closed: false,
        };
        let lines = LineSet {
            method: Method::SuggestiveContour,
            polylines: vec![poly],
            diagnostics: vec![],
        };
        let filtered =
            filter_lines(lines, FilterMode::Hysteresis { low: 1.0, high: 4.0 }).unwrap();
        assert_eq!(filtered.polylines.len(), 1);
        // the two weight-0.5 endpoints are dropped, the run through 1.5 kept
        assert_eq!(filtered.polylines[0].points.len(), 3);
    }

    #[test]
    fn hysteresis_drops_runs_without_high_point() {
        let mesh = shapes::planar_grid(8, 8.0);
        let points: Vec<OnEdgePoint> = (0..3)
            .map(|k| OnEdgePoint::new(&mesh, k, k + 1, 0.5))
            .collect();
        let poly = Polyline {
            weights: vec![1.5, 1.5, 1.5],
            points,
            strength: 1.0,
            polarity: Polarity::None,
            closed: false,
        };
        let lines = LineSet {
            method: Method::SuggestiveContour,
            polylines: vec![poly],
            diagnostics: vec![],
        };
        let filtered =
            filter_lines(lines, FilterMode::Hysteresis { low: 1.0, high: 4.0 }).unwrap();
        assert!(filtered.is_empty());
    }

    #[test]
    fn closed_loops_on_closed_mesh() {
        let mesh = shapes::icosphere(3);
        let adj = Adjacency::build(&mesh).unwrap();
        for offset in [-0.4, 0.0, 0.3, 0.7] {
            let field = ScalarField(mesh.positions().iter().map(|p| p.z - offset).collect());
            let lines = extract_zero_set(&mesh, &field, |_| true);
            assert!(all_loops_closed_or_on_boundary(&lines, &adj));
        }
    }

    #[test]
    fn json_schema_shape() {
        let mesh = shapes::icosphere(1);
        let field = ScalarField(mesh.positions().iter().map(|p| p.z).collect());
        let lines = extract_zero_set(&mesh, &field, |_| true);
        let json = serde_json::to_value(&lines).unwrap();
        assert_eq!(json["method"], "contour");
        let first = &json["polylines"][0];
        assert!(first["strength"].is_number());
        assert_eq!(first["polarity"], "none");
        let p = &first["points"][0];
        assert_eq!(p["edge"].as_array().unwrap().len(), 2);
        assert!(p["t"].is_number());
        assert_eq!(p["xyz"].as_array().unwrap().len(), 3);
    }
}
