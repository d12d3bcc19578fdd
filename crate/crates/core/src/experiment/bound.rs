use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::qsim::{hamiltonian_expectation_zero, EncodingSpec};

/// Components of the generalisation bound
/// `8 (|a|^2 + kappa t^2) / sqrt(M) * (1 + 1/2 sqrt(ln(1/delta) / 2))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub alpha_norm_sq: f64,
    pub kappa: f64,
    /// Set when kappa came out negative (possible only for mixed-sign alphas).
    pub kappa_negative: bool,
    pub t: f64,
    pub samples: usize,
    pub delta: f64,
    pub multiplier: f64,
    pub bound: f64,
}

/// `sum_ij a_i a_j (h_i - h_j)^2` with `h_i = <0|H(x_i)|0>`, as a full double sum.
pub fn kappa(alphas: &[f64], samples: &[Vec<f64>], spec: &EncodingSpec) -> Result<f64> {
    ensure_dim(alphas.len(), samples.len())?;
    let h = samples
        .iter()
        .map(|x| hamiltonian_expectation_zero(x, spec))
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for (i, ai) in alphas.iter().enumerate() {
        for (j, aj) in alphas.iter().enumerate() {
            let diff = h[i] - h[j];
            total += ai * aj * diff * diff;
        }
    }
    Ok(total)
}

/// Evaluates the bound with `M = alphas.len()` and `t` from `spec`.
pub fn generalization_bound(alphas: &[f64], samples: &[Vec<f64>], spec: &EncodingSpec, delta: f64) -> Result<BoundReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("bound needs at least one sample".into()));
    }
    if alphas.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite("dual coefficients".into()));
    }
    let kappa = kappa(alphas, samples, spec)?;
    let alpha_norm_sq: f64 = alphas.iter().map(|a| a * a).sum();
    let m = alphas.len();
    let t = spec.time();
    let multiplier = 1.0 + 0.5 * ((1.0 / delta).ln() / 2.0).sqrt();
    let bound = 8.0 * (alpha_norm_sq + kappa * t * t) / (m as f64).sqrt() * multiplier;
    if kappa < 0.0 {
        log::warn!("kappa is negative ({kappa:e}); reporting the raw value");
    }
    Ok(BoundReport {
        alpha_norm_sq,
        kappa,
        kappa_negative: kappa < 0.0,
        t,
        samples: m,
        delta,
        multiplier,
        bound,
    })
}
