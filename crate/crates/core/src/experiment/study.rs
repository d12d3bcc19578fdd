use serde::{Deserialize, Serialize};

use super::{evaluate_test, run_cv, GridSpec, ModelConfig, PreparedData, RunContext, DEFAULT_C_GRID};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudySettings {
    pub qubits: usize,
    pub t: f64,
    pub s: u32,
    /// Penalties searched by CV for each Pauli sample.
    pub c: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl Default for StudySettings {
    fn default() -> Self {
        Self {
            qubits: 6,
            t: 0.15,
            s: 10,
            c: DEFAULT_C_GRID.to_vec(),
            seeds: (0..30).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub seed: u64,
    pub c: f64,
    pub train_accuracy: f64,
    pub validation_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub config: ModelConfig,
    pub validation_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
    pub baseline: Option<BaselineResult>,
    pub test_min: f64,
    pub test_median: f64,
    pub test_max: f64,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// For each Pauli seed: CV over the penalty list at fixed (t, s), then test
/// evaluation of the chosen penalty. The best classical model from
/// `baseline` (if given) is evaluated once for reference.
pub fn random_pauli_study(
    data: &PreparedData,
    settings: &StudySettings,
    baseline: Option<&GridSpec>,
    ctx: &RunContext,
) -> Result<StudyReport> {
    if settings.seeds.is_empty() {
        return Err(Error::InvalidParameter("study needs at least one seed".into()));
    }
    if settings.c.is_empty() {
        return Err(Error::InvalidParameter("study needs at least one penalty value".into()));
    }
    let mut rows = Vec::with_capacity(settings.seeds.len());
    for &seed in &settings.seeds {
        let configs: Vec<ModelConfig> = settings
            .c
            .iter()
            .map(|&c| ModelConfig::Quantum {
                qubits: settings.qubits,
                t: settings.t,
                s: settings.s,
                pauli_seed: seed,
                c,
            })
            .collect();
        for cfg in &configs {
            cfg.validate()?;
        }
        let cv = run_cv(data, &configs, ctx)?;
        let chosen = cv.chosen();
        let (test, _) = evaluate_test(data, &chosen.config, ctx)?;
        rows.push(StudyRow {
            seed,
            c: chosen.config.penalty(),
            train_accuracy: chosen.mean_train,
            validation_accuracy: chosen.mean_validation,
            test_accuracy: test.accuracy,
        });
    }
    let baseline = match baseline {
        Some(grid) => {
            let configs = grid.classical().expand()?;
            let cv = run_cv(data, &configs, ctx)?;
            let chosen = cv.chosen();
            let (test, _) = evaluate_test(data, &chosen.config, ctx)?;
            Some(BaselineResult {
                config: chosen.config.clone(),
                validation_accuracy: chosen.mean_validation,
                test_accuracy: test.accuracy,
            })
        }
        None => None,
    };
    let mut tests: Vec<f64> = rows.iter().map(|r| r.test_accuracy).collect();
    tests.sort_by(f64::total_cmp);
    Ok(StudyReport {
        test_min: tests[0],
        test_median: median(&tests),
        test_max: tests[tests.len() - 1],
        rows,
        baseline,
    })
}
