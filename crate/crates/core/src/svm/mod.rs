//! Soft-margin SVM on a precomputed kernel.
//!
//! The dual
//!
//! ```text
//! min_a  1/2 sum_ij a_i a_j y_i y_j K_ij - sum_i a_i
//! s.t.   0 <= a_i <= C,  sum_i a_i y_i = 0
//! ```
//!
//! is solved by pairwise coordinate descent on the maximal violating pair.
//! With gradient `G = Q a - 1` (`Q_ij = y_i y_j K_ij`), the working pair is
//! `i = argmax_{t in I_up} -y_t G_t` and `j = argmin_{t in I_low} -y_t G_t`,
//! lowest index first on ties; iteration stops once the gap between the two
//! drops to the tolerance.

mod io;

use crate::error::{ensure_dim, Error, Result};
use crate::kernels::{cross_gram, KernelKind, KernelMatrix};

pub use io::{read_model, write_model, MODEL_FORMAT_VERSION};

/// Threshold above which a dual coefficient marks a support vector.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Stop when the maximal KKT violation `m(a) - M(a)` is at most this.
    pub tolerance: f64,
    /// Cap on pair updates before reporting nonconvergence.
    pub max_iterations: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_iterations: 10_000_000,
        }
    }
}

/// Trained binary classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    alphas: Vec<f64>,
    bias: f64,
    penalty: f64,
    labels: Vec<i8>,
    support_indices: Vec<usize>,
    objective: f64,
    iterations: u64,
    kernel: Option<KernelKind>,
    samples: Option<Vec<Vec<f64>>>,
}

impl SvmModel {
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn support_indices(&self) -> &[usize] {
        &self.support_indices
    }

    /// Dual objective at the returned coefficients.
    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// Pair updates performed by the solver (0 for deserialised models).
    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn kernel(&self) -> Option<&KernelKind> {
        self.kernel.as_ref()
    }

    pub fn samples(&self) -> Option<&[Vec<f64>]> {
        self.samples.as_deref()
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Attaches the training vectors so the model can predict raw samples.
    pub fn with_training_data(mut self, samples: Vec<Vec<f64>>) -> Result<Self> {
        ensure_dim(self.alphas.len(), samples.len())?;
        self.samples = Some(samples);
        Ok(self)
    }

    /// `sum_i a_i y_i K(x, x_i) + b` for one kernel row.
    pub fn decision_value(&self, kernel_row: &[f64]) -> Result<f64> {
        ensure_dim(self.alphas.len(), kernel_row.len())?;
        let sum: f64 = self
            .alphas
            .iter()
            .zip(&self.labels)
            .zip(kernel_row)
            .map(|((a, &y), k)| a * f64::from(y) * k)
            .sum();
        Ok(sum + self.bias)
    }

    /// Sign of the decision value, with `sign(0) = +1`.
    pub fn predict(&self, kernel_row: &[f64]) -> Result<i8> {
        Ok(sign(self.decision_value(kernel_row)?))
    }

    /// Decision values for every row of an L x M cross kernel.
    pub fn decision_values(&self, cross: &KernelMatrix) -> Result<Vec<f64>> {
        ensure_dim(self.alphas.len(), cross.cols())?;
        (0..cross.rows()).map(|l| self.decision_value(cross.row(l))).collect()
    }

    pub fn predict_batch(&self, cross: &KernelMatrix) -> Result<Vec<i8>> {
        Ok(self.decision_values(cross)?.into_iter().map(sign).collect())
    }

    /// Predicts raw samples using the stored kernel and training vectors.
    pub fn predict_samples(&self, test: &[Vec<f64>], workers: usize) -> Result<Vec<i8>> {
        let (kind, train) = match (&self.kernel, &self.samples) {
            (Some(k), Some(s)) => (k, s),
            _ => {
                return Err(Error::InvalidParameter(
                    "model carries no kernel descriptor or training samples".into(),
                ))
            }
        };
        let cross = cross_gram(train, test, kind, workers)?;
        self.predict_batch(&cross)
    }
}

pub fn sign(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

fn check_problem(kernel: &KernelMatrix, labels: &[i8], c: f64) -> Result<()> {
    if !kernel.is_square() {
        return Err(Error::InvalidParameter(format!(
            "kernel must be square, got {}x{}",
            kernel.rows(),
            kernel.cols()
        )));
    }
    ensure_dim(kernel.rows(), labels.len())?;
    if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
        return Err(Error::InvalidParameter(format!("label {bad} is not +1 or -1")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("penalty C must be positive, got {c}")));
    }
    if kernel.data().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("kernel matrix".into()));
    }
    let has_pos = labels.contains(&1);
    let has_neg = labels.contains(&-1);
    if !(has_pos && has_neg) {
        return Err(Error::SingleClass);
    }
    Ok(())
}

/// Solves the dual with default options.
pub fn solve_dual(kernel: &KernelMatrix, labels: &[i8], c: f64) -> Result<SvmModel> {
    solve_dual_with(kernel, labels, c, &SolverOptions::default())
}

pub fn solve_dual_with(kernel: &KernelMatrix, labels: &[i8], c: f64, opts: &SolverOptions) -> Result<SvmModel> {
    check_problem(kernel, labels, c)?;
    let m = labels.len();
    let y: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();
    let mut alpha = vec![0.0; m];
    let mut grad = vec![-1.0; m];
    let mut iterations = 0u64;
    let mut warned = false;

    loop {
        let (mut i, mut up) = (usize::MAX, f64::NEG_INFINITY);
        let (mut j, mut low) = (usize::MAX, f64::INFINITY);
        for t in 0..m {
            let v = -y[t] * grad[t];
            let in_up = if y[t] > 0.0 { alpha[t] < c } else { alpha[t] > 0.0 };
            let in_low = if y[t] > 0.0 { alpha[t] > 0.0 } else { alpha[t] < c };
            if in_up && v > up {
                up = v;
                i = t;
            }
            if in_low && v < low {
                low = v;
                j = t;
            }
        }
        let gap = up - low;
        if i == usize::MAX || j == usize::MAX || gap <= opts.tolerance {
            break;
        }
        if iterations >= opts.max_iterations {
            return Err(Error::NotConverged {
                iterations,
                violation: gap,
            });
        }
        iterations += 1;

        // Moving a_i by +y_i*delta and a_j by -y_j*delta keeps sum a y fixed.
        let curvature = kernel.get(i, i) + kernel.get(j, j) - 2.0 * kernel.get(i, j);
        let room_i = if y[i] > 0.0 { c - alpha[i] } else { alpha[i] };
        let room_j = if y[j] > 0.0 { alpha[j] } else { c - alpha[j] };
        let room = room_i.min(room_j);
        if curvature < -1e-6 && !warned {
            log::warn!("kernel is indefinite (pair curvature {curvature:e}); stepping to the box boundary");
            warned = true;
        }
        let delta = if curvature > 0.0 { (gap / curvature).min(room) } else { room };

        let old_i = alpha[i];
        let old_j = alpha[j];
        alpha[i] = if delta >= room_i {
            if y[i] > 0.0 {
                c
            } else {
                0.0
            }
        } else {
            old_i + y[i] * delta
        };
        alpha[j] = if delta >= room_j {
            if y[j] > 0.0 {
                0.0
            } else {
                c
            }
        } else {
            old_j - y[j] * delta
        };
        let di = (alpha[i] - old_i) * y[i];
        let dj = (alpha[j] - old_j) * y[j];
        let row_i = kernel.row(i);
        let row_j = kernel.row(j);
        for t in 0..m {
            grad[t] += y[t] * (row_i[t] * di + row_j[t] * dj);
        }
    }

    let objective = 0.5 * alpha.iter().zip(&grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>();
    let bias = compute_bias(&alpha, kernel, labels, c)?;
    let support_indices = support_indices(&alpha);
    Ok(SvmModel {
        alphas: alpha,
        bias,
        penalty: c,
        labels: labels.to_vec(),
        support_indices,
        objective,
        iterations,
        kernel: Some(kernel.kind().clone()),
        samples: None,
    })
}

pub(crate) fn support_indices(alphas: &[f64]) -> Vec<usize> {
    alphas
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > SUPPORT_THRESHOLD)
        .map(|(i, _)| i)
        .collect()
}

/// Bias from the KKT conditions.
///
/// With `r_i = y_i - sum_j a_j y_j K_ij`, the bias is the mean of `r_i` over
/// free vectors (`eps < a_i < C - eps`, `eps = 1e-8 * min(1, C)`). Without
/// free vectors it is the midpoint of `[max L, min U]`, where bound vectors
/// at zero contribute lower limits for `y = +1` and upper limits for
/// `y = -1`, and vectors at C the reverse.
pub fn compute_bias(alphas: &[f64], kernel: &KernelMatrix, labels: &[i8], c: f64) -> Result<f64> {
    ensure_dim(labels.len(), alphas.len())?;
    ensure_dim(kernel.rows(), alphas.len())?;
    ensure_dim(kernel.cols(), alphas.len())?;
    if alphas.iter().all(|&a| a == 0.0) {
        return Err(Error::Degenerate("all dual coefficients are zero".into()));
    }
    let eps = SUPPORT_THRESHOLD * c.min(1.0);
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for i in 0..alphas.len() {
        let row = kernel.row(i);
        let s: f64 = alphas
            .iter()
            .zip(labels)
            .zip(row)
            .map(|((a, &y), k)| a * f64::from(y) * k)
            .sum();
        let yi = f64::from(labels[i]);
        let r = yi - s;
        let a = alphas[i];
        if a > eps && a < c - eps {
            free_sum += r;
            free_count += 1;
        } else {
            let at_zero = a <= eps;
            if at_zero == (yi > 0.0) {
                lower = lower.max(r);
            } else {
                upper = upper.min(r);
            }
        }
    }
    if free_count > 0 {
        return Ok(free_sum / free_count as f64);
    }
    Ok(match (lower.is_finite(), upper.is_finite()) {
        (true, true) => 0.5 * (lower + upper),
        (true, false) => lower,
        (false, true) => upper,
        (false, false) => 0.0,
    })
}

/// `1/2 a^T Q a - sum a`, evaluated directly.
pub fn dual_objective(alphas: &[f64], kernel: &KernelMatrix, labels: &[i8]) -> f64 {
    let m = alphas.len();
    let mut quad = 0.0;
    for i in 0..m {
        for j in 0..m {
            quad += alphas[i] * alphas[j] * f64::from(labels[i]) * f64::from(labels[j]) * kernel.get(i, j);
        }
    }
    0.5 * quad - alphas.iter().sum::<f64>()
}
