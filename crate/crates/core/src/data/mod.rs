//! Dataset ingestion, z-score standardisation, class balancing and
//! stratified split/fold generation.

mod csv_io;
mod split;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::rng::DetRng;

pub use csv_io::{load_csv, load_csv_reader, write_csv, CsvSchema};
pub use split::{read_split_plan, stratified_folds, stratified_split, write_split_plan, SplitPlan};

/// Labelled descriptor vectors; labels are +1 / -1.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<Vec<f64>>,
    labels: Vec<i8>,
    ids: Option<Vec<String>>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(samples: Vec<Vec<f64>>, labels: Vec<i8>) -> Result<Self> {
        let d = samples.first().map_or(0, Vec::len);
        let names = (1..=d).map(|i| format!("f{i}")).collect();
        Self::with_names(samples, labels, names, None)
    }

    pub fn with_names(
        samples: Vec<Vec<f64>>,
        labels: Vec<i8>,
        feature_names: Vec<String>,
        ids: Option<Vec<String>>,
    ) -> Result<Self> {
        ensure_dim(samples.len(), labels.len())?;
        if let Some(ids) = &ids {
            ensure_dim(samples.len(), ids.len())?;
        }
        let d = feature_names.len();
        for s in &samples {
            ensure_dim(d, s.len())?;
            if s.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("dataset sample".into()));
            }
        }
        if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
            return Err(Error::InvalidParameter(format!("label {bad} is not +1 or -1")));
        }
        Ok(Self {
            samples,
            labels,
            ids,
            feature_names,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn ids(&self) -> Option<&[String]> {
        self.ids.as_deref()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// (positive, negative) counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&y| y == 1).count();
        (pos, self.labels.len() - pos)
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(Error::InvalidParameter(format!("index {bad} out of range for {} rows", self.len())));
        }
        Ok(Dataset {
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            ids: self.ids.as_ref().map(|ids| indices.iter().map(|&i| ids[i].clone()).collect()),
            feature_names: self.feature_names.clone(),
        })
    }
}

/// Per-column mean and population standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationParams {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

/// Fits column statistics on the rows at `on` only (Welford's update).
pub fn fit_standardizer(ds: &Dataset, on: &[usize]) -> Result<StandardizationParams> {
    if on.is_empty() {
        return Err(Error::InvalidParameter("cannot fit standardiser on zero rows".into()));
    }
    let d = ds.dim();
    let mut mean = vec![0.0; d];
    let mut m2 = vec![0.0; d];
    for (count, &i) in on.iter().enumerate() {
        let row = ds
            .samples
            .get(i)
            .ok_or_else(|| Error::InvalidParameter(format!("index {i} out of range")))?;
        let n = (count + 1) as f64;
        for c in 0..d {
            let delta = row[c] - mean[c];
            mean[c] += delta / n;
            m2[c] += delta * (row[c] - mean[c]);
        }
    }
    let n = on.len() as f64;
    let stds = m2.iter().map(|v| (v / n).max(0.0).sqrt()).collect();
    Ok(StandardizationParams { means: mean, stds })
}

impl StandardizationParams {
    /// `(x - mean) / std`; zero-variance columns map to 0.
    pub fn transform(&self, row: &[f64]) -> Result<Vec<f64>> {
        ensure_dim(self.means.len(), row.len())?;
        Ok(row
            .iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(x, (m, s))| if *s > 0.0 { (x - m) / s } else { 0.0 })
            .collect())
    }
}

pub fn apply_standardizer(ds: &Dataset, params: &StandardizationParams) -> Result<Dataset> {
    ensure_dim(params.means.len(), ds.dim())?;
    let samples = ds
        .samples
        .iter()
        .map(|r| params.transform(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        samples,
        labels: ds.labels.clone(),
        ids: ds.ids.clone(),
        feature_names: ds.feature_names.clone(),
    })
}

/// Balances the classes among `on` by dropping majority-class rows uniformly
/// at random. The majority members are shuffled with `DetRng::new(seed)`, the
/// first `min(count)` are kept, and the result preserves the input order.
pub fn undersample(ds: &Dataset, on: &[usize], seed: u64) -> Result<Vec<usize>> {
    let labels = ds.labels();
    if let Some(&bad) = on.iter().find(|&&i| i >= labels.len()) {
        return Err(Error::InvalidParameter(format!("index {bad} out of range")));
    }
    let pos: Vec<usize> = on.iter().copied().filter(|&i| labels[i] == 1).collect();
    let neg: Vec<usize> = on.iter().copied().filter(|&i| labels[i] == -1).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::SingleClass);
    }
    if pos.len() == neg.len() {
        return Ok(on.to_vec());
    }
    let (mut major, minor_len, major_label) = if pos.len() > neg.len() {
        (pos, neg.len(), 1)
    } else {
        (neg, pos.len(), -1)
    };
    let mut rng = DetRng::new(seed);
    rng.shuffle(&mut major);
    let mut keep = vec![false; labels.len()];
    for &i in &major[..minor_len] {
        keep[i] = true;
    }
    Ok(on
        .iter()
        .copied()
        .filter(|&i| labels[i] != major_label || keep[i])
        .collect())
}
