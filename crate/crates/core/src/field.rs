//! Per-vertex scalar and vector attachments.

use nalgebra::Vector3;

/// One scalar per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField(pub Vec<f64>);

impl ScalarField {
    pub fn constant(n: usize, value: f64) -> Self {
        ScalarField(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self, v: u32) -> f64 {
        self.0[v as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute value; the reference scale for zero tolerances.
    pub fn abs_scale(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// The `q`-quantile of the absolute values (`q` in `[0, 1]`); used to
    /// express thresholds in mesh-independent units.
    pub fn abs_percentile(&self, q: f64) -> f64 {
        let mut mags: Vec<f64> = self.0.iter().map(|v| v.abs()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let idx = ((mags.len() - 1) as f64 * q).round() as usize;
        mags[idx]
    }
}

/// One 3-vector per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField(pub Vec<Vector3<f64>>);

impl VectorField {
    pub fn zeros(n: usize) -> Self {
        VectorField(vec![Vector3::zeros(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self, v: u32) -> Vector3<f64> {
        self.0[v as usize]
    }

    pub fn values(&self) -> &[Vector3<f64>] {
        &self.0
    }

    /// Per-vertex Euclidean norms as a scalar field.
    pub fn norms(&self) -> ScalarField {
        ScalarField(self.0.iter().map(|v| v.norm()).collect())
    }
}
