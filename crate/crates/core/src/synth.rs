//! Synthetic fixtures: separable blobs, the 4-point XOR set, cosine-labelled
//! data.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::DetRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthKind {
    Blobs,
    Xor,
    Cosine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSettings {
    pub kind: SynthKind,
    /// Ignored for `xor`.
    pub samples: usize,
    /// Ignored for `xor`.
    pub dim: usize,
    /// Gap between the blobs along the first coordinate.
    pub margin: f64,
    pub seed: u64,
}

impl Default for SynthSettings {
    fn default() -> Self {
        Self {
            kind: SynthKind::Blobs,
            samples: 40,
            dim: 2,
            margin: 2.0,
            seed: 0,
        }
    }
}

/// Even rows are +1, odd rows -1. The first coordinate is
/// `y (margin/2 + u)` with `u` in [0, 1); the rest are uniform in [-1, 1).
pub fn blobs(samples: usize, dim: usize, margin: f64, seed: u64) -> Result<Dataset> {
    if samples < 2 || dim == 0 {
        return Err(Error::InvalidParameter(format!(
            "blobs need samples >= 2 and dim >= 1, got {samples} and {dim}"
        )));
    }
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidParameter(format!("margin must be >= 0, got {margin}")));
    }
    let mut rng = DetRng::new(seed);
    let mut rows = Vec::with_capacity(samples);
    let mut labels = Vec::with_capacity(samples);
    for i in 0..samples {
        let y: i8 = if i % 2 == 0 { 1 } else { -1 };
        let mut x = Vec::with_capacity(dim);
        x.push(f64::from(y) * (margin / 2.0 + rng.unit()));
        for _ in 1..dim {
            x.push(rng.uniform(-1.0, 1.0));
        }
        rows.push(x);
        labels.push(y);
    }
    Dataset::new(rows, labels)
}

/// (1,1) and (-1,-1) are -1; (1,-1) and (-1,1) are +1.
pub fn xor() -> Dataset {
    let rows = vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]];
    Dataset::new(rows, vec![-1, 1, 1, -1]).expect("fixed xor set is valid")
}

/// Uniform points in [-1, 1)^dim labelled by the sign of `cos(pi * sum x)`,
/// with zero counted as +1. Redraws until both classes occur.
pub fn cosine(samples: usize, dim: usize, seed: u64) -> Result<Dataset> {
    if samples < 2 || dim == 0 {
        return Err(Error::InvalidParameter(format!(
            "cosine data needs samples >= 2 and dim >= 1, got {samples} and {dim}"
        )));
    }
    let mut rng = DetRng::new(seed);
    loop {
        let mut rows = Vec::with_capacity(samples);
        let mut labels = Vec::with_capacity(samples);
        for _ in 0..samples {
            let x: Vec<f64> = (0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let v = (std::f64::consts::PI * x.iter().sum::<f64>()).cos();
            labels.push(if v >= 0.0 { 1 } else { -1 });
            rows.push(x);
        }
        if labels.contains(&1) && labels.contains(&-1) {
            return Dataset::new(rows, labels);
        }
    }
}

pub fn generate(settings: &SynthSettings) -> Result<Dataset> {
    match settings.kind {
        SynthKind::Blobs => blobs(settings.samples, settings.dim, settings.margin, settings.seed),
        SynthKind::Xor => Ok(xor()),
        SynthKind::Cosine => cosine(settings.samples, settings.dim, settings.seed),
    }
}
