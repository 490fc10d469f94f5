//! The eight feature-line extraction methods, plus the camera, light, and
//! per-vertex view machinery they share.
//!
//! View-dependent methods (contours, suggestive contours, apparent ridges,
//! photic extremum lines, Laplacian lines) consume a [`ViewContext`];
//! crease lines, ridges and valleys, and demarcating curves are functions
//! of the geometry alone.

mod apparent;
mod contour;
mod crease;
mod demarcating;
mod laplacian_lines;
mod pel;
mod ridge_valley;
mod suggestive;

pub use apparent::{apparent_ridges, view_dependent_curvature, ApparentRidgeParams};
pub use contour::{contours, ContourMode};
pub use crease::crease_lines;
pub use demarcating::{demarcating_curves, max_curvature_derivative_direction, DemarcatingParams};
pub use laplacian_lines::{laplacian_lines, LaplacianLineParams};
pub use pel::{photic_extremum_lines, PelParams};
pub use ridge_valley::{ridges_valleys, RidgeValleyParams};
pub use suggestive::{radial_curvature_field, suggestive_contours, SuggestiveParams};

use nalgebra::{Point3, Vector3};

use crate::error::GeometryError;
use crate::field::ScalarField;
use crate::mesh::{MeshBuffer, NormalField};

/// Camera projection model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    Orthographic,
    Perspective,
}

/// View description: eye position, look-at target, up hint, projection.
#[derive(Debug, Clone)]
pub struct Camera {
    pub eye: Point3<f64>,
    pub look_at: Point3<f64>,
    pub up: Vector3<f64>,
    pub projection: Projection,
}

impl Camera {
    pub fn orthographic(eye: Point3<f64>, look_at: Point3<f64>, up: Vector3<f64>) -> Camera {
        Camera {
            eye,
            look_at,
            up,
            projection: Projection::Orthographic,
        }
    }

    pub fn perspective(eye: Point3<f64>, look_at: Point3<f64>, up: Vector3<f64>) -> Camera {
        Camera {
            eye,
            look_at,
            up,
            projection: Projection::Perspective,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if (self.look_at - self.eye).norm() < 1e-12 {
            return Err(GeometryError::InvalidParameter(
                "camera eye coincides with look-at target".into(),
            ));
        }
        let f = self.forward();
        if f.cross(&self.up).norm() < 1e-9 {
            return Err(GeometryError::InvalidParameter(
                "camera up vector is parallel to the view direction".into(),
            ));
        }
        Ok(())
    }

    /// Unit view direction, from the eye toward the target.
    pub fn forward(&self) -> Vector3<f64> {
        (self.look_at - self.eye).normalize()
    }

    /// Orthonormal screen-plane basis `(v1, v2)`, both perpendicular to the
    /// view direction.
    pub fn screen_basis(&self) -> (Vector3<f64>, Vector3<f64>) {
        let f = self.forward();
        let right = f.cross(&self.up).normalize();
        let up = right.cross(&f);
        (right, up)
    }

    /// Unit vector from `p` toward the camera.
    pub fn view_vector(&self, p: &Point3<f64>) -> Result<Vector3<f64>, GeometryError> {
        match self.projection {
            Projection::Orthographic => Ok(-self.forward()),
            Projection::Perspective => {
                let d = self.eye - p;
                let len = d.norm();
                if len < 1e-12 {
                    return Err(GeometryError::InvalidParameter(
                        "point coincides with the camera eye".into(),
                    ));
                }
                Ok(d / len)
            }
        }
    }
}

/// A single light source with a diffuse intensity.
#[derive(Debug, Clone, Copy)]
pub enum Light {
    /// Light riding on the camera; its direction at a vertex is the view
    /// vector itself.
    Headlight { intensity: f64 },
    /// Light at infinity; `toward_light` points from the surface to it.
    Directional {
        toward_light: Vector3<f64>,
        intensity: f64,
    },
    Point {
        position: Point3<f64>,
        intensity: f64,
    },
}

/// Non-empty set of lights; defaults to a unit headlight.
#[derive(Debug, Clone)]
pub struct LightRig {
    pub lights: Vec<Light>,
}

impl LightRig {
    pub fn headlight() -> LightRig {
        LightRig {
            lights: vec![Light::Headlight { intensity: 1.0 }],
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.lights.is_empty() {
            return Err(GeometryError::InvalidParameter(
                "light rig must contain at least one light".into(),
            ));
        }
        Ok(())
    }

    /// Diffuse illumination of a point with unit normal `n` as seen with
    /// view vector `v`. Plain sum of dot products, no clamping, so
    /// intensities act linearly.
    pub fn illuminate(&self, p: &Point3<f64>, n: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        self.lights
            .iter()
            .map(|light| match light {
                Light::Headlight { intensity } => intensity * n.dot(v),
                Light::Directional {
                    toward_light,
                    intensity,
                } => intensity * n.dot(&toward_light.normalize()),
                Light::Point {
                    position,
                    intensity,
                } => {
                    let d = position - p;
                    let len = d.norm();
                    if len < 1e-12 {
                        0.0
                    } else {
                        intensity * n.dot(&d) / len
                    }
                }
            })
            .sum()
    }
}

/// Per-vertex view data: unit view vectors, illumination, and the
/// tangent-plane projection `w = (Id - n n^T) v` of the view vector.
#[derive(Debug, Clone)]
pub struct ViewContext {
    pub view: Vec<Vector3<f64>>,
    pub illumination: ScalarField,
    pub tangent_view: Vec<Vector3<f64>>,
}

impl ViewContext {
    pub fn view(&self, v: u32) -> Vector3<f64> {
        self.view[v as usize]
    }

    pub fn tangent_view(&self, v: u32) -> Vector3<f64> {
        self.tangent_view[v as usize]
    }

    /// The pure headlight term `<n, v>` per vertex.
    pub fn facing(&self, normals: &NormalField) -> ScalarField {
        ScalarField(
            (0..self.view.len())
                .map(|v| normals.vertex(v as u32).dot(&self.view[v]))
                .collect(),
        )
    }
}

/// Assembles the per-vertex view context for a camera and light rig.
pub fn view_context(
    mesh: &MeshBuffer,
    normals: &NormalField,
    camera: &Camera,
    lights: &LightRig,
) -> Result<ViewContext, GeometryError> {
    camera.validate()?;
    lights.validate()?;
    let nv = mesh.vertex_count();
    let mut view = Vec::with_capacity(nv);
    let mut illumination = Vec::with_capacity(nv);
    let mut tangent_view = Vec::with_capacity(nv);
    for i in 0..nv as u32 {
        let p = mesh.position(i);
        let v = camera
            .view_vector(&p)
            .map_err(|_| GeometryError::VertexAtEye(i))?;
        let n = normals.vertex(i);
        view.push(v);
        illumination.push(lights.illuminate(&p, &n, &v));
        tangent_view.push(v - n * n.dot(&v));
    }
    Ok(ViewContext {
        view,
        illumination: ScalarField(illumination),
        tangent_view,
    })
}

/// A filter threshold, either in raw field units or normalized against the
/// 95th percentile of the relevant field's magnitudes (so presets transfer
/// across models).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Raw(f64),
    Normalized(f64),
}

impl Threshold {
    /// Resolves against the field the method thresholds on.
    pub fn resolve(&self, field: &ScalarField) -> f64 {
        match self {
            Threshold::Raw(t) => *t,
            Threshold::Normalized(t) => {
                let scale = field.abs_percentile(0.95);
                t * scale
            }
        }
    }
}
