//! The full protocol: preprocessing, random Pauli sampling, grid search with
//! stratified CV, test evaluation, the generalisation bound, and the
//! repeated random-Pauli study.

mod bound;
mod cv;
mod grid;
mod study;

use serde::{Deserialize, Serialize};

use crate::data::{
    apply_standardizer, fit_standardizer, stratified_folds, stratified_split, undersample, Dataset, SplitPlan,
    StandardizationParams,
};
use crate::error::{Error, Result};
use crate::kernels::GramCache;
use crate::qsim::{Pauli, PauliString};
use crate::rng::DetRng;

pub use bound::{generalization_bound, kappa, BoundReport};
pub use cv::{evaluate_test, run_cv, score, train_model, ConfigResult, CvReport, FoldResult, TestReport};
pub use grid::{GridSpec, LinearGrid, ModelConfig, PolynomialGrid, QuantumGrid, RbfGrid, DEFAULT_C_GRID};
pub use study::{random_pauli_study, BaselineResult, StudyReport, StudyRow, StudySettings};

/// `d` strings drawn i.i.d. and uniformly from the 4^n Pauli strings. Each
/// symbol is `[I, X, Y, Z][below(4)]` from `DetRng::new(seed)`, string by
/// string, leftmost symbol first.
pub fn sample_pauli_strings(d: usize, n: usize, seed: u64) -> Result<Vec<PauliString>> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "need d >= 1 and n >= 1 to sample Pauli strings, got d={d}, n={n}"
        )));
    }
    let mut rng = DetRng::new(seed);
    (0..d)
        .map(|_| {
            let symbols = (0..n).map(|_| Pauli::ALL[rng.below(4) as usize]).collect();
            PauliString::new(symbols)
        })
        .collect()
}

/// Preprocessing knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Protocol {
    pub seed: u64,
    pub test_fraction: f64,
    pub folds: usize,
    pub undersample: bool,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            seed: 0,
            test_fraction: 0.2,
            folds: 5,
            undersample: true,
        }
    }
}

/// Standardised train/test data plus CV folds, ready for model selection.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    pub plan: SplitPlan,
    pub standardization: StandardizationParams,
    pub train: Vec<Vec<f64>>,
    pub train_labels: Vec<i8>,
    pub test: Vec<Vec<f64>>,
    pub test_labels: Vec<i8>,
    /// Positions into `train` (not dataset rows).
    pub folds: Vec<Vec<usize>>,
}

impl PreparedData {
    pub fn dim(&self) -> usize {
        self.standardization.means.len()
    }
}

/// Split, then undersample the training portion, then fit the standardiser
/// on the remaining training rows and apply it to train and test.
///
/// Seeds: the split uses `seed`, undersampling `seed + 1`, folds `seed + 2`
/// (wrapping).
pub fn prepare(ds: &Dataset, protocol: &Protocol) -> Result<PreparedData> {
    let mut plan = stratified_split(ds, protocol.test_fraction, protocol.seed)?;
    if protocol.undersample {
        let kept = undersample(ds, &plan.train, protocol.seed.wrapping_add(1))?;
        let mut keep = vec![false; ds.len()];
        kept.iter().for_each(|&i| keep[i] = true);
        plan.dropped = plan.train.iter().copied().filter(|&i| !keep[i]).collect();
        plan.train = kept;
    }
    let folds = stratified_folds(&plan.train, ds.labels(), protocol.folds, protocol.seed.wrapping_add(2))?;
    plan.folds = Some(folds.clone());
    plan.validate(ds.len())?;

    let standardization = fit_standardizer(ds, &plan.train)?;
    let train_ds = apply_standardizer(&ds.subset(&plan.train)?, &standardization)?;
    let test_ds = apply_standardizer(&ds.subset(&plan.test)?, &standardization)?;

    let mut position = vec![usize::MAX; ds.len()];
    for (p, &row) in plan.train.iter().enumerate() {
        position[row] = p;
    }
    let folds = folds
        .iter()
        .map(|f| f.iter().map(|&row| position[row]).collect())
        .collect();
    Ok(PreparedData {
        plan,
        standardization,
        train: train_ds.samples().to_vec(),
        train_labels: train_ds.labels().to_vec(),
        test: test_ds.samples().to_vec(),
        test_labels: test_ds.labels().to_vec(),
        folds,
    })
}

/// Shared state for a run: worker count and the Gram cache.
#[derive(Debug)]
pub struct RunContext {
    pub workers: usize,
    pub cache: GramCache,
}

impl RunContext {
    pub fn new(workers: usize, cache: GramCache) -> Self {
        Self {
            workers: workers.max(1),
            cache,
        }
    }

    pub fn serial() -> Self {
        Self::new(1, GramCache::in_memory())
    }
}

pub(crate) fn accuracy(predicted: &[i8], truth: &[i8]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let correct = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    correct as f64 / truth.len() as f64
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
