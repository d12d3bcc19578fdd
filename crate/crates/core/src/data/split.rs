use std::io::{BufRead, Write};

use super::Dataset;
use crate::error::{Error, Result};
use crate::rng::DetRng;

/// Train/test partition with optional CV folds over the training rows.
/// All index lists refer to rows of the original dataset; `dropped` holds
/// training rows removed by undersampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub seed: u64,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub dropped: Vec<usize>,
    pub folds: Option<Vec<Vec<usize>>>,
}

impl SplitPlan {
    /// Checks disjointness, coverage of `0..len`, and that folds partition `train`.
    pub fn validate(&self, len: usize) -> Result<()> {
        let mut seen = vec![0u8; len];
        for &i in self.train.iter().chain(&self.test).chain(&self.dropped) {
            let slot = seen
                .get_mut(i)
                .ok_or_else(|| Error::InvalidParameter(format!("split index {i} out of range")))?;
            *slot += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err(Error::InvalidParameter(
                "train, test and dropped rows must be disjoint and cover the dataset".into(),
            ));
        }
        if let Some(folds) = &self.folds {
            let mut in_fold: Vec<usize> = folds.iter().flatten().copied().collect();
            in_fold.sort_unstable();
            let mut train = self.train.clone();
            train.sort_unstable();
            if in_fold != train {
                return Err(Error::InvalidParameter("folds must partition the training rows".into()));
            }
        }
        Ok(())
    }
}

fn class_members(indices: impl Iterator<Item = usize>, labels: &[i8]) -> [Vec<usize>; 2] {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for i in indices {
        if labels[i] == 1 {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    [pos, neg]
}

/// Per-class shuffled split. One `DetRng::new(seed)` stream shuffles the
/// positive class, then the negative class (each in ascending index order
/// before shuffling); the first `round(count * test_fraction)` of each
/// shuffled class go to the test set, capped so every class keeps at least
/// one training row. Lists are returned sorted.
pub fn stratified_split(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<SplitPlan> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let classes = class_members(0..ds.len(), ds.labels());
    if classes.iter().any(|c| c.len() < 2) {
        return Err(Error::InvalidParameter(
            "each class needs at least two rows for a stratified split".into(),
        ));
    }
    let mut rng = DetRng::new(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for mut members in classes {
        rng.shuffle(&mut members);
        let n_test = ((members.len() as f64 * test_fraction).round() as usize).min(members.len() - 1);
        test.extend_from_slice(&members[..n_test]);
        train.extend_from_slice(&members[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitPlan {
        seed,
        train,
        test,
        dropped: Vec::new(),
        folds: None,
    })
}

/// Stratified k-fold assignment of `train` (dataset indices; `labels` is
/// indexed by dataset row). Each class is shuffled with one shared
/// `DetRng::new(seed)` stream (positive class first) and dealt round robin;
/// the negative class starts where the positive class stopped so fold sizes
/// stay balanced overall. Folds are returned sorted.
pub fn stratified_folds(train: &[usize], labels: &[i8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("fold count must be at least 2, got {k}")));
    }
    if let Some(&bad) = train.iter().find(|&&i| i >= labels.len()) {
        return Err(Error::InvalidParameter(format!("index {bad} out of range")));
    }
    let classes = class_members(train.iter().copied(), labels);
    if classes.iter().any(|c| c.len() < k) {
        return Err(Error::InvalidParameter(format!(
            "each class needs at least {k} training rows for {k}-fold CV"
        )));
    }
    let mut rng = DetRng::new(seed);
    let mut folds = vec![Vec::new(); k];
    let mut offset = 0;
    for mut members in classes {
        rng.shuffle(&mut members);
        for (p, i) in members.iter().enumerate() {
            folds[(offset + p) % k].push(*i);
        }
        offset = (offset + members.len()) % k;
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

fn write_list<W: Write>(out: &mut W, key: &str, items: &[usize]) -> Result<()> {
    write!(out, "{key}")?;
    for i in items {
        write!(out, " {i}")?;
    }
    writeln!(out)?;
    Ok(())
}

/// Text form: `qsvm-split 1`, `seed <u64>`, `train ...`, `test ...`,
/// `dropped ...`, then optionally `folds <k>` followed by `k` lines `fold ...`.
pub fn write_split_plan<W: Write>(mut out: W, plan: &SplitPlan) -> Result<()> {
    writeln!(out, "qsvm-split 1")?;
    writeln!(out, "seed {}", plan.seed)?;
    write_list(&mut out, "train", &plan.train)?;
    write_list(&mut out, "test", &plan.test)?;
    write_list(&mut out, "dropped", &plan.dropped)?;
    if let Some(folds) = &plan.folds {
        writeln!(out, "folds {}", folds.len())?;
        for f in folds {
            write_list(&mut out, "fold", f)?;
        }
    }
    Ok(())
}

pub fn read_split_plan<R: BufRead>(input: R) -> Result<SplitPlan> {
    let lines: Vec<String> = input
        .lines()
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let err = |m: &str| Error::Parse(format!("split plan: {m}"));
    let mut it = lines.iter().map(|l| l.split_whitespace().collect::<Vec<_>>());
    let mut expect = |key: &str| -> Result<Vec<String>> {
        let parts = it.next().ok_or_else(|| err(&format!("missing '{key}' line")))?;
        if parts.first() != Some(&key) {
            return Err(err(&format!("expected '{key}' line")));
        }
        Ok(parts[1..].iter().map(|s| s.to_string()).collect())
    };
    let ints = |v: Vec<String>| -> Result<Vec<usize>> {
        v.iter()
            .map(|s| s.parse::<usize>().map_err(|e| err(&e.to_string())))
            .collect()
    };
    if expect("qsvm-split")? != ["1"] {
        return Err(err("unsupported version"));
    }
    let seed = expect("seed")?
        .first()
        .ok_or_else(|| err("missing seed"))?
        .parse::<u64>()
        .map_err(|e| err(&e.to_string()))?;
    let train = ints(expect("train")?)?;
    let test = ints(expect("test")?)?;
    let dropped = ints(expect("dropped")?)?;
    let folds = if lines.len() > 5 {
        let k = ints(expect("folds")?)?.first().copied().ok_or_else(|| err("missing fold count"))?;
        Some((0..k).map(|_| ints(expect("fold")?)).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    Ok(SplitPlan {
        seed,
        train,
        test,
        dropped,
        folds,
    })
}
