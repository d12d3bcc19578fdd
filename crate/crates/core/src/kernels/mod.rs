//! Gram and cross-kernel matrices for the quantum and classical kernels.

mod cache;
mod matrix;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{encode, state_kernel, EncodingSpec, StateVector};

pub use cache::{content_key, GramCache};
pub use matrix::KernelMatrix;

/// Shape parameters of the classical baseline kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ClassicalKernelParams {
    /// `a . b`
    Linear,
    /// `exp(-gamma |a - b|^2)`, gamma used as a raw multiplier.
    Rbf { gamma: f64 },
    /// `(gamma (a . b) + coef0)^degree`
    Polynomial { gamma: f64, degree: u32, coef0: f64 },
}

impl ClassicalKernelParams {
    /// Polynomial kernel with `gamma = 1/dim` unless given explicitly.
    pub fn polynomial(degree: u32, gamma: Option<f64>, coef0: f64, dim: usize) -> Result<Self> {
        let gamma = gamma.unwrap_or(1.0 / dim.max(1) as f64);
        let p = ClassicalKernelParams::Polynomial { gamma, degree, coef0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ClassicalKernelParams::Linear => Ok(()),
            ClassicalKernelParams::Rbf { gamma } => check_gamma(gamma),
            ClassicalKernelParams::Polynomial { gamma, degree, coef0 } => {
                check_gamma(gamma)?;
                if degree == 0 {
                    return Err(Error::InvalidParameter("polynomial degree must be at least 1".into()));
                }
                if !coef0.is_finite() {
                    return Err(Error::InvalidParameter("coef0 must be finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            ClassicalKernelParams::Linear => dot(a, b),
            ClassicalKernelParams::Rbf { gamma } => {
                let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * sq).exp()
            }
            ClassicalKernelParams::Polynomial { gamma, degree, coef0 } => {
                (gamma * dot(a, b) + coef0).powi(degree as i32)
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ClassicalKernelParams::Linear => "linear",
            ClassicalKernelParams::Rbf { .. } => "rbf",
            ClassicalKernelParams::Polynomial { .. } => "polynomial",
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Which kernel generated a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelKind {
    Quantum(EncodingSpec),
    Classical(ClassicalKernelParams),
}

impl KernelKind {
    /// Canonical JSON descriptor, also the hashing input for the cache.
    pub fn descriptor(&self) -> String {
        serde_json::to_string(self).expect("kernel descriptors always serialise")
    }
}

fn check_samples(samples: &[Vec<f64>], dim: Option<usize>) -> Result<usize> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidParameter("sample set is empty".into()))?;
    let d = dim.unwrap_or(first.len());
    for s in samples {
        if s.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: s.len(),
            });
        }
    }
    Ok(d)
}

/// Encodes every sample once; the states are reused for all pairs.
pub fn feature_states(samples: &[Vec<f64>], spec: &EncodingSpec, workers: usize) -> Result<Vec<StateVector>> {
    run_pool(workers, || {
        if workers > 1 {
            samples.par_iter().map(|x| encode(x, spec)).collect()
        } else {
            samples.iter().map(|x| encode(x, spec)).collect()
        }
    })
}

fn run_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Quantum Gram matrix, serial.
pub fn quantum_gram(samples: &[Vec<f64>], spec: &EncodingSpec) -> Result<KernelMatrix> {
    quantum_gram_par(samples, spec, 1)
}

/// Quantum Gram matrix with `workers` threads. Each unordered pair is
/// evaluated once; the diagonal is assigned 1.
pub fn quantum_gram_par(samples: &[Vec<f64>], spec: &EncodingSpec, workers: usize) -> Result<KernelMatrix> {
    check_samples(samples, Some(spec.dim()))?;
    let states = feature_states(samples, spec, workers)?;
    let m = states.len();
    let row_upper = |i: usize| -> Result<Vec<f64>> {
        states[i + 1..].iter().map(|s| state_kernel(&states[i], s)).collect()
    };
    let uppers: Vec<Vec<f64>> = run_pool(workers, || {
        if workers > 1 {
            (0..m).into_par_iter().map(row_upper).collect::<Result<_>>()
        } else {
            (0..m).map(row_upper).collect::<Result<_>>()
        }
    })?;
    let mut data = vec![0.0; m * m];
    for (i, upper) in uppers.iter().enumerate() {
        data[i * m + i] = 1.0;
        for (off, &v) in upper.iter().enumerate() {
            let j = i + 1 + off;
            data[i * m + j] = v;
            data[j * m + i] = v;
        }
    }
    Ok(KernelMatrix::from_parts(m, m, data, KernelKind::Quantum(spec.clone())))
}

/// Rows are `test`, columns are `train`: entry (l, i) = k(test_l, train_i).
pub fn quantum_cross_gram(train: &[Vec<f64>], test: &[Vec<f64>], spec: &EncodingSpec) -> Result<KernelMatrix> {
    quantum_cross_gram_par(train, test, spec, 1)
}

pub fn quantum_cross_gram_par(
    train: &[Vec<f64>],
    test: &[Vec<f64>],
    spec: &EncodingSpec,
    workers: usize,
) -> Result<KernelMatrix> {
    check_samples(train, Some(spec.dim()))?;
    check_samples(test, Some(spec.dim()))?;
    let train_states = feature_states(train, spec, workers)?;
    let test_states = feature_states(test, spec, workers)?;
    cross_from_states(&train_states, &test_states, spec, workers)
}

/// Cross kernel from already-encoded states.
pub fn cross_from_states(
    train_states: &[StateVector],
    test_states: &[StateVector],
    spec: &EncodingSpec,
    workers: usize,
) -> Result<KernelMatrix> {
    let row = |t: &StateVector| -> Result<Vec<f64>> { train_states.iter().map(|s| state_kernel(t, s)).collect() };
    let rows: Vec<Vec<f64>> = run_pool(workers, || {
        if workers > 1 {
            test_states.par_iter().map(row).collect::<Result<_>>()
        } else {
            test_states.iter().map(row).collect::<Result<_>>()
        }
    })?;
    let data = rows.into_iter().flatten().collect();
    Ok(KernelMatrix::from_parts(
        test_states.len(),
        train_states.len(),
        data,
        KernelKind::Quantum(spec.clone()),
    ))
}

/// Classical kernel between two sample sets; rows follow `samples_a`.
pub fn classical_gram(
    samples_a: &[Vec<f64>],
    samples_b: &[Vec<f64>],
    params: &ClassicalKernelParams,
) -> Result<KernelMatrix> {
    params.validate()?;
    let d = check_samples(samples_a, None)?;
    check_samples(samples_b, Some(d))?;
    let mut data = Vec::with_capacity(samples_a.len() * samples_b.len());
    for a in samples_a {
        for b in samples_b {
            data.push(params.eval(a, b));
        }
    }
    Ok(KernelMatrix::from_parts(
        samples_a.len(),
        samples_b.len(),
        data,
        KernelKind::Classical(params.clone()),
    ))
}

/// Square Gram matrix for any kernel kind.
pub fn gram(samples: &[Vec<f64>], kind: &KernelKind, workers: usize) -> Result<KernelMatrix> {
    match kind {
        KernelKind::Quantum(spec) => quantum_gram_par(samples, spec, workers),
        KernelKind::Classical(params) => classical_gram(samples, samples, params),
    }
}

/// Cross kernel for any kernel kind (rows `test`, columns `train`).
pub fn cross_gram(train: &[Vec<f64>], test: &[Vec<f64>], kind: &KernelKind, workers: usize) -> Result<KernelMatrix> {
    match kind {
        KernelKind::Quantum(spec) => quantum_cross_gram_par(train, test, spec, workers),
        KernelKind::Classical(params) => classical_gram(test, train, params),
    }
}
