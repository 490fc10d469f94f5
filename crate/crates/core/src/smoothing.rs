//! Preprocessing smoothers: iterative one-ring averaging applied to vertex
//! normals, vertex positions, or scalar fields, with an optional negative
//! inflation step for shrink compensation. Updates are simultaneous
//! (Jacobi-style), so results do not depend on vertex order.

use nalgebra::Vector3;

use crate::error::GeometryError;
use crate::field::ScalarField;
use crate::mesh::{Adjacency, MeshBuffer, NormalField};

/// What a smoothing pass operates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingTarget {
    Normals,
    Geometry,
    ScalarField,
}

impl SmoothingTarget {
    pub fn name(&self) -> &'static str {
        match self {
            SmoothingTarget::Normals => "normals",
            SmoothingTarget::Geometry => "geometry",
            SmoothingTarget::ScalarField => "scalar-field",
        }
    }

    pub fn from_name(name: &str) -> Option<SmoothingTarget> {
        match name {
            "normals" => Some(SmoothingTarget::Normals),
            "geometry" => Some(SmoothingTarget::Geometry),
            "scalar-field" | "scalar" => Some(SmoothingTarget::ScalarField),
            _ => None,
        }
    }
}

/// Iterations and step sizes for one smoothing pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingConfig {
    pub target: SmoothingTarget,
    pub iterations: usize,
    /// Averaging step in `(0, 1]`.
    pub lambda: f64,
    /// Optional negative inflation step applied after each lambda step.
    pub mu: Option<f64>,
}

impl SmoothingConfig {
    pub fn new(target: SmoothingTarget, iterations: usize, lambda: f64) -> SmoothingConfig {
        SmoothingConfig {
            target,
            iterations,
            lambda,
            mu: None,
        }
    }

    pub fn with_mu(mut self, mu: f64) -> SmoothingConfig {
        self.mu = Some(mu);
        self
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(GeometryError::InvalidParameter(format!(
                "lambda must lie in (0, 1], got {}",
                self.lambda
            )));
        }
        if let Some(mu) = self.mu {
            if mu >= 0.0 {
                return Err(GeometryError::InvalidParameter(format!(
                    "mu must be negative, got {mu}"
                )));
            }
        }
        Ok(())
    }
}

fn average_step(
    positions: &[Vector3<f64>],
    adjacency: &Adjacency,
    step: f64,
) -> Vec<Vector3<f64>> {
    positions
        .iter()
        .enumerate()
        .map(|(v, p)| {
            let ring = adjacency.neighbors(v as u32);
            let mean: Vector3<f64> =
                ring.iter().map(|&j| positions[j as usize] - p).sum::<Vector3<f64>>()
                    / ring.len() as f64;
            p + step * mean
        })
        .collect()
}

/// Iterative normal smoothing; the geometry is untouched. Each step moves a
/// normal toward its one-ring mean and renormalizes.
pub fn smooth_normals(
    adjacency: &Adjacency,
    normals: &NormalField,
    config: &SmoothingConfig,
) -> Result<NormalField, GeometryError> {
    config.validate()?;
    let mut current: Vec<Vector3<f64>> = normals.vertex_normals().to_vec();
    for _ in 0..config.iterations {
        let stepped = average_step(&current, adjacency, config.lambda);
        let mut next = Vec::with_capacity(stepped.len());
        for (v, n) in stepped.into_iter().enumerate() {
            let len = n.norm();
            if len < 1e-9 {
                return Err(GeometryError::VanishingNormal(v as u32));
            }
            next.push(n / len);
        }
        current = next;
        if let Some(mu) = config.mu {
            let stepped = average_step(&current, adjacency, mu);
            let mut next = Vec::with_capacity(stepped.len());
            for (v, n) in stepped.into_iter().enumerate() {
                let len = n.norm();
                if len < 1e-9 {
                    return Err(GeometryError::VanishingNormal(v as u32));
                }
                next.push(n / len);
            }
            current = next;
        }
    }
    let mut out = normals.clone();
    out.set_vertex_normals(current);
    Ok(out)
}

/// Iterative geometry smoothing with optional anti-shrink inflation step.
/// Topology is unchanged.
pub fn smooth_mesh(
    mesh: &MeshBuffer,
    adjacency: &Adjacency,
    config: &SmoothingConfig,
) -> Result<MeshBuffer, GeometryError> {
    config.validate()?;
    let mut current: Vec<Vector3<f64>> = mesh.positions().iter().map(|p| p.coords).collect();
    for _ in 0..config.iterations {
        current = average_step(&current, adjacency, config.lambda);
        if let Some(mu) = config.mu {
            current = average_step(&current, adjacency, mu);
        }
    }
    Ok(mesh.with_positions(current.into_iter().map(nalgebra::Point3::from).collect()))
}

/// Iterative scalar-field smoothing with the same averaging template.
pub fn smooth_scalar_field(
    adjacency: &Adjacency,
    field: &ScalarField,
    config: &SmoothingConfig,
) -> Result<ScalarField, GeometryError> {
    config.validate()?;
    let mut current = field.0.clone();
    for _ in 0..config.iterations {
        let step = |values: &[f64], step: f64| -> Vec<f64> {
            values
                .iter()
                .enumerate()
                .map(|(v, &x)| {
                    let ring = adjacency.neighbors(v as u32);
                    let mean: f64 =
                        ring.iter().map(|&j| values[j as usize] - x).sum::<f64>() / ring.len() as f64;
                    x + step * mean
                })
                .collect()
        };
        current = step(&current, config.lambda);
        if let Some(mu) = config.mu {
            current = step(&current, mu);
        }
    }
    Ok(ScalarField(current))
}
