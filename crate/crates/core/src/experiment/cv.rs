use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{accuracy, mean_std, ModelConfig, PreparedData, RunContext};
use crate::error::{Error, Result};
use crate::kernels::{cross_gram, gram, KernelKind, KernelMatrix};
use crate::svm::{solve_dual, SvmModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_accuracy: f64,
    pub validation_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigResult {
    pub index: usize,
    pub config: ModelConfig,
    pub folds: Vec<FoldResult>,
    pub mean_train: f64,
    pub std_train: f64,
    pub mean_validation: f64,
    pub std_validation: f64,
}

impl ConfigResult {
    pub fn gap(&self) -> f64 {
        (self.mean_train - self.mean_validation).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub results: Vec<ConfigResult>,
    /// Index into `results` of the selected configuration.
    pub chosen: usize,
}

impl CvReport {
    pub fn chosen(&self) -> &ConfigResult {
        &self.results[self.chosen]
    }
}

/// Gram matrix over the full training set, shared through the cache.
fn training_gram(data: &PreparedData, kind: &KernelKind, ctx: &RunContext, workers: usize) -> Result<Arc<KernelMatrix>> {
    ctx.cache
        .get_or_compute(&data.train, kind, || gram(&data.train, kind, workers))
}

fn labels_at(labels: &[i8], idx: &[usize]) -> Vec<i8> {
    idx.iter().map(|&i| labels[i]).collect()
}

fn evaluate_config(
    index: usize,
    config: &ModelConfig,
    data: &PreparedData,
    ctx: &RunContext,
    workers: usize,
) -> Result<ConfigResult> {
    let kind = config.kernel_kind(data.dim())?;
    let full = training_gram(data, &kind, ctx, workers)?;
    let mut folds = Vec::with_capacity(data.folds.len());
    for (f, val) in data.folds.iter().enumerate() {
        let mut in_val = vec![false; data.train.len()];
        val.iter().for_each(|&i| in_val[i] = true);
        let tr: Vec<usize> = (0..data.train.len()).filter(|&i| !in_val[i]).collect();
        let y_tr = labels_at(&data.train_labels, &tr);
        let y_val = labels_at(&data.train_labels, val);
        if !(y_val.contains(&1) && y_val.contains(&-1)) {
            return Err(Error::InvalidParameter(format!("validation fold {f} is missing a class")));
        }
        let k_tr = full.select(&tr, &tr);
        let model = solve_dual(&k_tr, &y_tr, config.penalty())?;
        let train_pred = model.predict_batch(&k_tr)?;
        let val_pred = model.predict_batch(&full.select(val, &tr))?;
        folds.push(FoldResult {
            fold: f,
            train_accuracy: accuracy(&train_pred, &y_tr),
            validation_accuracy: accuracy(&val_pred, &y_val),
        });
    }
    let (mean_train, std_train) = mean_std(&folds.iter().map(|f| f.train_accuracy).collect::<Vec<_>>());
    let (mean_validation, std_validation) =
        mean_std(&folds.iter().map(|f| f.validation_accuracy).collect::<Vec<_>>());
    Ok(ConfigResult {
        index,
        config: config.clone(),
        folds,
        mean_train,
        std_train,
        mean_validation,
        std_validation,
    })
}

/// k-fold cross-validation of every configuration.
///
/// Selection: highest mean validation accuracy, then smallest
/// `|mean train - mean validation|`, then lowest index.
pub fn run_cv(data: &PreparedData, configs: &[ModelConfig], ctx: &RunContext) -> Result<CvReport> {
    if configs.is_empty() {
        return Err(Error::InvalidParameter("grid contains no configurations".into()));
    }
    if data.folds.len() < 2 {
        return Err(Error::InvalidParameter("cross-validation needs at least two folds".into()));
    }
    let results: Vec<ConfigResult> = if ctx.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(ctx.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            configs
                .par_iter()
                .enumerate()
                .map(|(i, c)| evaluate_config(i, c, data, ctx, 1))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        configs
            .iter()
            .enumerate()
            .map(|(i, c)| evaluate_config(i, c, data, ctx, 1))
            .collect::<Result<Vec<_>>>()?
    };
    let chosen = select(&results);
    Ok(CvReport { results, chosen })
}

fn select(results: &[ConfigResult]) -> usize {
    let mut best = 0;
    for (i, r) in results.iter().enumerate().skip(1) {
        let b = &results[best];
        let better = r.mean_validation > b.mean_validation
            || (r.mean_validation == b.mean_validation && r.gap() < b.gap());
        if better {
            best = i;
        }
    }
    best
}

/// Trains `config` on the whole (standardised) training set. The returned
/// model carries its kernel descriptor and training vectors.
pub fn train_model(data: &PreparedData, config: &ModelConfig, ctx: &RunContext) -> Result<SvmModel> {
    let kind = config.kernel_kind(data.dim())?;
    let k = training_gram(data, &kind, ctx, ctx.workers)?;
    solve_dual(&k, &data.train_labels, config.penalty())?.with_training_data(data.train.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub samples: usize,
    pub accuracy: f64,
    pub error_rate: f64,
    pub true_positive: usize,
    pub true_negative: usize,
    pub false_positive: usize,
    pub false_negative: usize,
}

impl TestReport {
    pub fn from_predictions(predicted: &[i8], truth: &[i8]) -> Self {
        let mut r = TestReport {
            samples: truth.len(),
            accuracy: 0.0,
            error_rate: 0.0,
            true_positive: 0,
            true_negative: 0,
            false_positive: 0,
            false_negative: 0,
        };
        for (&p, &t) in predicted.iter().zip(truth) {
            match (p, t) {
                (1, 1) => r.true_positive += 1,
                (-1, -1) => r.true_negative += 1,
                (1, _) => r.false_positive += 1,
                _ => r.false_negative += 1,
            }
        }
        let wrong = r.false_positive + r.false_negative;
        if r.samples > 0 {
            r.accuracy = (r.samples - wrong) as f64 / r.samples as f64;
            r.error_rate = wrong as f64 / r.samples as f64;
        }
        r
    }
}

/// Retrains on the full training set and scores the held-out test set.
pub fn evaluate_test(data: &PreparedData, config: &ModelConfig, ctx: &RunContext) -> Result<(TestReport, SvmModel)> {
    let model = train_model(data, config, ctx)?;
    let report = score(&model, &data.test, &data.test_labels, ctx.workers)?;
    Ok((report, model))
}

/// Scores a trained model on labelled samples.
pub fn score(model: &SvmModel, samples: &[Vec<f64>], labels: &[i8], workers: usize) -> Result<TestReport> {
    if samples.is_empty() {
        return Ok(TestReport::from_predictions(&[], &[]));
    }
    let (kind, train) = match (model.kernel(), model.samples()) {
        (Some(k), Some(s)) => (k, s),
        _ => return Err(Error::InvalidParameter("model has no kernel or training samples".into())),
    };
    let cross = cross_gram(train, samples, kind, workers)?;
    Ok(TestReport::from_predictions(&model.predict_batch(&cross)?, labels))
}
