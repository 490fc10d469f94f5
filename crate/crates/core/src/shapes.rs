//! Procedural test meshes: icospheres, cubes, planar grids, and the small
//! fixtures used to witness operator properties.

use std::collections::HashMap;

use nalgebra::{Point3, Vector3};

use crate::mesh::MeshBuffer;

/// Unit icosphere obtained by `level` loop subdivisions of the icosahedron,
/// with every vertex projected back onto the unit sphere.
pub fn icosphere(level: usize) -> MeshBuffer {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut positions: Vec<Point3<f64>> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .iter()
    .map(|&[x, y, z]| Point3::from(Vector3::new(x, y, z).normalize()))
    .collect();

    let mut triangles: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..level {
        let mut midpoint: HashMap<(u32, u32), u32> = HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for tri in &triangles {
            let mut mids = [0u32; 3];
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                let key = (a.min(b), a.max(b));
                mids[k] = *midpoint.entry(key).or_insert_with(|| {
                    let mid = (positions[a as usize].coords + positions[b as usize].coords) / 2.0;
                    positions.push(Point3::from(mid.normalize()));
                    (positions.len() - 1) as u32
                });
            }
            next.push([tri[0], mids[0], mids[2]]);
            next.push([tri[1], mids[1], mids[0]]);
            next.push([tri[2], mids[2], mids[1]]);
            next.push([mids[0], mids[1], mids[2]]);
        }
        triangles = next;
    }

    MeshBuffer::new(positions, triangles).unwrap()
}

/// Axis-aligned cube `[-half, half]^3`, each face split into two triangles
/// with outward orientation. 8 vertices, 12 triangles, 18 edges.
pub fn cube(half: f64) -> MeshBuffer {
    subdivided_cube(half, 1)
}

/// Cube `[-half, half]^3` with each face meshed as an `n x n` quad grid
/// (two triangles per quad), vertices welded across face boundaries.
pub fn subdivided_cube(half: f64, n: usize) -> MeshBuffer {
    assert!(n >= 1);
    let mut positions: Vec<Point3<f64>> = Vec::new();
    let mut lookup: HashMap<(i64, i64, i64), u32> = HashMap::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();
    let quant = |x: f64| (x / half * 1e12).round() as i64;
    let mut vertex = |p: Point3<f64>, positions: &mut Vec<Point3<f64>>| -> u32 {
        let key = (quant(p.x), quant(p.y), quant(p.z));
        *lookup.entry(key).or_insert_with(|| {
            positions.push(p);
            (positions.len() - 1) as u32
        })
    };
    // each face: (normal axis, sign, u axis, v axis) chosen for outward CCW
    let faces: [(usize, f64, usize, usize); 6] = [
        (0, 1.0, 1, 2),
        (0, -1.0, 2, 1),
        (1, 1.0, 2, 0),
        (1, -1.0, 0, 2),
        (2, 1.0, 0, 1),
        (2, -1.0, 1, 0),
    ];
    for &(axis, sign, ua, va) in &faces {
        let at = |iu: usize, iv: usize| -> Point3<f64> {
            let mut c = [0.0; 3];
            c[axis] = sign * half;
            c[ua] = -half + 2.0 * half * iu as f64 / n as f64;
            c[va] = -half + 2.0 * half * iv as f64 / n as f64;
            Point3::new(c[0], c[1], c[2])
        };
        for iu in 0..n {
            for iv in 0..n {
                let p00 = vertex(at(iu, iv), &mut positions);
                let p10 = vertex(at(iu + 1, iv), &mut positions);
                let p01 = vertex(at(iu, iv + 1), &mut positions);
                let p11 = vertex(at(iu + 1, iv + 1), &mut positions);
                // (ua, va) are chosen so that u cross v already points outward
                triangles.push([p00, p10, p11]);
                triangles.push([p00, p11, p01]);
            }
        }
    }
    MeshBuffer::new(positions, triangles).unwrap()
}

/// Cube with rounded edges: the icosphere at `level` mapped onto the surface
/// at offset `radius` from the box `[-(half-radius), half-radius]^3`.
/// Faces stay exactly planar; edges and corners become cylinder/sphere arcs.
pub fn rounded_cube(half: f64, radius: f64, level: usize) -> MeshBuffer {
    assert!(radius > 0.0 && radius < half);
    let inner = half - radius;
    let sphere = icosphere(level);
    let positions: Vec<Point3<f64>> = sphere
        .positions()
        .iter()
        .map(|p| {
            // far point in direction p, pulled back onto the rounded surface
            let x = p.coords * (10.0 * half);
            let c = Vector3::new(
                x.x.clamp(-inner, inner),
                x.y.clamp(-inner, inner),
                x.z.clamp(-inner, inner),
            );
            Point3::from(c + (x - c).normalize() * radius)
        })
        .collect();
    MeshBuffer::new(positions, sphere.triangles().to_vec()).unwrap()
}

/// Planar right-triangle grid over `[0, extent]^2` with `n x n` cells in the
/// `z = 0` plane, oriented with `+z` normals.
pub fn planar_grid(n: usize, extent: f64) -> MeshBuffer {
    planar_grid_with(n, extent, |x, y| Point3::new(x, y, 0.0))
}

/// Planar grid pushed through an arbitrary embedding of the unit square.
pub fn planar_grid_with<F>(n: usize, extent: f64, f: F) -> MeshBuffer
where
    F: Fn(f64, f64) -> Point3<f64>,
{
    assert!(n >= 1);
    let mut positions = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            positions.push(f(
                extent * i as f64 / n as f64,
                extent * j as f64 / n as f64,
            ));
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    let idx = |i: usize, j: usize| (j * (n + 1) + i) as u32;
    for j in 0..n {
        for i in 0..n {
            triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            triangles.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    MeshBuffer::new(positions, triangles).unwrap()
}

/// Equilateral-triangle grid in the `z = 0` plane with edge length `edge`,
/// `n x n` rhombic cells. Every interior vertex has six neighbors at equal
/// distance and all corner angles are 60 degrees.
pub fn equilateral_grid(n: usize, edge: f64) -> MeshBuffer {
    assert!(n >= 1);
    let h = edge * 3.0_f64.sqrt() / 2.0;
    let mut positions = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            let x = edge * i as f64 + 0.5 * edge * j as f64;
            positions.push(Point3::new(x, h * j as f64, 0.0));
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    let idx = |i: usize, j: usize| (j * (n + 1) + i) as u32;
    for j in 0..n {
        for i in 0..n {
            triangles.push([idx(i, j), idx(i + 1, j), idx(i, j + 1)]);
            triangles.push([idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    MeshBuffer::new(positions, triangles).unwrap()
}

/// A planar one-ring star with deliberately asymmetric neighbor placement:
/// a fan of triangles around a center vertex whose ring radii and angles are
/// irregular. Witness for the (Lin) violations of graph-based weights.
pub fn irregular_star() -> MeshBuffer {
    let ring = [
        (1.0, 0.0),
        (0.45, 1.1),
        (-0.7, 0.9),
        (-1.6, 0.05),
        (-0.5, -0.8),
        (0.65, -1.35),
    ];
    let mut positions = vec![Point3::new(0.0, 0.0, 0.0)];
    for &(x, y) in &ring {
        positions.push(Point3::new(x, y, 0.0));
    }
    let n = ring.len() as u32;
    let triangles = (0..n)
        .map(|k| [0, 1 + k, 1 + (k + 1) % n])
        .collect();
    MeshBuffer::new(positions, triangles).unwrap()
}

/// Two triangles sharing edge `(0, 1)` whose opposite corner angles are both
/// obtuse, giving the shared edge a negative cotangent weight.
pub fn obtuse_edge_pair() -> MeshBuffer {
    MeshBuffer::new(
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.5, 0.12, 0.0),
            Point3::new(0.5, -0.12, 0.0),
        ],
        vec![[0, 1, 2], [1, 0, 3]],
    )
    .unwrap()
}

/// Deterministically jittered planar triangulation of `[0, extent]^2` with
/// `(n+1)^2` vertices. Interior vertices are displaced by a hash-seeded
/// offset bounded well below half a cell so no triangle flips.
pub fn jittered_grid(n: usize, extent: f64, seed: u64) -> MeshBuffer {
    let cell = extent / n as f64;
    let amp = 0.28 * cell;
    planar_grid_with(n, extent, |x, y| {
        let i = (x / cell).round() as u64;
        let j = (y / cell).round() as u64;
        let interior =
            i > 0 && j > 0 && (i as usize) < n && (j as usize) < n;
        if interior {
            let (dx, dy) = hash_offset(seed, i, j);
            Point3::new(x + amp * dx, y + amp * dy, 0.0)
        } else {
            Point3::new(x, y, 0.0)
        }
    })
}

fn hash_offset(seed: u64, i: u64, j: u64) -> (f64, f64) {
    let mut state = seed ^ (i.wrapping_mul(0x9E37_79B9_7F4A_7C15)) ^ (j.wrapping_mul(0xC2B2_AE3D_27D4_EB4F));
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let dx = next();
    let dy = next();
    (dx, dy)
}

/// Icosphere with a deterministic radial perturbation, used to exercise the
/// noise warnings of the higher-order methods.
pub fn noisy_icosphere(level: usize, amplitude: f64, seed: u64) -> MeshBuffer {
    let base = icosphere(level);
    let positions: Vec<Point3<f64>> = base
        .positions()
        .iter()
        .enumerate()
        .map(|(v, p)| {
            let (d, _) = hash_offset(seed, v as u64, 17);
            Point3::from(p.coords * (1.0 + amplitude * d))
        })
        .collect();
    base.with_positions(positions)
}
