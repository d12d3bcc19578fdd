//! The subcommands behind the `qsvm` binary. Each writes its artifacts into
//! an output directory and reports what it wrote.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::data::{apply_standardizer, fit_standardizer, load_csv, write_csv, write_split_plan, CsvSchema, Dataset};
use crate::error::{Error, Result};
use crate::experiment::{
    evaluate_test, generalization_bound, prepare, random_pauli_study, run_cv, score, train_model, ConfigResult,
    GridSpec, ModelConfig, PreparedData, RunContext,
};
use crate::kernels::{content_key, gram, GramCache, KernelKind};
use crate::svm::{read_model, write_model};
use crate::synth::generate;

/// Files written by a command plus a one-line summary for stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let file = File::create(&path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok((path, BufWriter::new(file)))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let (path, mut out) = create(dir, name)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(path)
}

fn config_json(cfg: &ExperimentConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("configuration serialises")
}

fn load_dataset(cfg: &ExperimentConfig) -> Result<(Dataset, &CsvSchema)> {
    let ds = cfg.dataset()?;
    Ok((load_csv(&ds.path, &ds.schema)?, &ds.schema))
}

fn load_prepared(cfg: &ExperimentConfig) -> Result<(Dataset, PreparedData)> {
    let (ds, _) = load_dataset(cfg)?;
    let data = prepare(&ds, &cfg.protocol)?;
    Ok((ds, data))
}

fn context(cfg: &ExperimentConfig) -> RunContext {
    RunContext::new(cfg.workers, GramCache::in_memory())
}

/// Gram matrix of the dataset under `[model]`: `gram.csv` (with the resolved
/// config as comments) plus a binary entry in `cache/`. Prints the content key.
pub fn cmd_kernel(cfg: &ExperimentConfig, out_dir: &Path) -> Result<CommandOutput> {
    let (mut ds, _) = load_dataset(cfg)?;
    if cfg.kernel.standardize {
        let all: Vec<usize> = (0..ds.len()).collect();
        let params = fit_standardizer(&ds, &all)?;
        ds = apply_standardizer(&ds, &params)?;
    }
    let kind = cfg.model()?.kernel_kind(ds.dim())?;
    let key = content_key(ds.samples(), &kind);
    let cache = GramCache::with_dir(out_dir.join("cache"))?;
    let m = cache.get_or_compute(ds.samples(), &kind, || gram(ds.samples(), &kind, cfg.workers))?;

    let mut header = cfg.header_lines();
    header.push(format!("kernel = {}", kind.descriptor()));
    header.push(format!("content_key = {key}"));
    let (path, mut out) = create(out_dir, "gram.csv")?;
    m.write_csv(&mut out, &header)?;
    out.flush()?;
    Ok(CommandOutput {
        files: vec![path, out_dir.join("cache").join(format!("{key}.gram"))],
        summary: format!("gram {}x{} content_key {key}", m.rows(), m.cols()),
    })
}

/// kernel, qubits, t, s, pauli_seed, gamma, degree; blank where not applicable.
fn config_columns(c: &ModelConfig) -> [String; 7] {
    let mut cols: [String; 7] = Default::default();
    cols[0] = c.family().into();
    match *c {
        ModelConfig::Quantum {
            qubits, t, s, pauli_seed, ..
        } => {
            cols[1] = qubits.to_string();
            cols[2] = t.to_string();
            cols[3] = s.to_string();
            cols[4] = pauli_seed.to_string();
        }
        ModelConfig::Linear { .. } => {}
        ModelConfig::Rbf { gamma, .. } => cols[5] = gamma.to_string(),
        ModelConfig::Polynomial { degree, gamma, .. } => {
            cols[5] = gamma.map(|g| g.to_string()).unwrap_or_default();
            cols[6] = degree.to_string();
        }
    }
    cols
}

fn write_cv_table(dir: &Path, header: &[String], results: &[ConfigResult], chosen: usize) -> Result<PathBuf> {
    let (path, mut out) = create(dir, "cv_table.csv")?;
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(
        out,
        "index,kernel,qubits,t,s,pauli_seed,gamma,degree,c,mean_train,std_train,mean_validation,std_validation,chosen"
    )?;
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.index,
            config_columns(&r.config).join(","),
            r.config.penalty(),
            r.mean_train,
            r.std_train,
            r.mean_validation,
            r.std_validation,
            u8::from(r.index == chosen)
        )?;
    }
    out.flush()?;
    Ok(path)
}

/// Stratified CV over `[grid]`: `gridsearch.json` (every fold), `cv_table.csv`,
/// `split.txt` and the chosen model retrained on the full training set as
/// `model.txt`.
pub fn cmd_gridsearch(cfg: &ExperimentConfig, out_dir: &Path) -> Result<CommandOutput> {
    let (ds, data) = load_prepared(cfg)?;
    let configs = cfg.grid.expand()?;
    let ctx = context(cfg);
    let report = run_cv(&data, &configs, &ctx)?;
    let chosen = report.chosen();
    let model = train_model(&data, &chosen.config, &ctx)?;

    let header = cfg.header_lines();
    let (model_path, mut out) = create(out_dir, "model.txt")?;
    let mut comments = header.clone();
    comments.push(format!("chosen = {}", serde_json::to_string(&chosen.config).expect("serialises")));
    write_model(&mut out, &model, &comments)?;
    out.flush()?;

    let (split_path, mut out) = create(out_dir, "split.txt")?;
    write_split_plan(&mut out, &data.plan)?;
    out.flush()?;

    let table = write_cv_table(out_dir, &header, &report.results, report.chosen)?;
    let (pos, neg) = ds.class_counts();
    let doc = json!({
        "config": config_json(cfg),
        "dataset": { "rows": ds.len(), "dim": ds.dim(), "positive": pos, "negative": neg },
        "split": { "train": data.plan.train.len(), "test": data.plan.test.len(), "dropped": data.plan.dropped.len() },
        "chosen": chosen,
        "results": report.results,
    });
    let json_path = write_json(out_dir, "gridsearch.json", &doc)?;
    Ok(CommandOutput {
        files: vec![json_path, table, split_path, model_path],
        summary: format!(
            "chosen #{} {} mean_validation {}",
            chosen.index,
            chosen.config.family(),
            chosen.mean_validation
        ),
    })
}

/// Test metrics (`eval.json`) for `[model]` retrained on the training split,
/// or for a saved model when `eval.model_file` is set.
pub fn cmd_eval(cfg: &ExperimentConfig, out_dir: &Path) -> Result<CommandOutput> {
    let (_, data) = load_prepared(cfg)?;
    let ctx = context(cfg);
    let (report, model) = match &cfg.eval.model_file {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
            let saved = read_model(BufReader::new(file))?;
            if saved.kernel().is_none() || saved.samples().is_none() {
                return Err(Error::Parse(format!("{} has no kernel or training samples", path.display())));
            }
            (score(&saved, &data.test, &data.test_labels, cfg.workers)?, None)
        }
        None => {
            let m = cfg.model()?;
            m.validate()?;
            (evaluate_test(&data, m, &ctx)?.0, Some(m.clone()))
        }
    };
    let doc = json!({
        "config": config_json(cfg),
        "model": model,
        "test": report,
    });
    let path = write_json(out_dir, "eval.json", &doc)?;
    Ok(CommandOutput {
        files: vec![path],
        summary: format!("test accuracy {} on {} samples", report.accuracy, report.samples),
    })
}

/// Trains the quantum `[model]` on the training split and evaluates the
/// generalisation bound with the solved coefficients (`bound.json`).
pub fn cmd_bound(cfg: &ExperimentConfig, out_dir: &Path) -> Result<CommandOutput> {
    let m = cfg.model()?;
    m.validate()?;
    let (_, data) = load_prepared(cfg)?;
    let spec = match m.kernel_kind(data.dim())? {
        KernelKind::Quantum(spec) => spec,
        KernelKind::Classical(_) => {
            return Err(Error::Config("the bound needs a quantum [model]".into()));
        }
    };
    let model = train_model(&data, m, &context(cfg))?;
    let report = generalization_bound(model.alphas(), &data.train, &spec, cfg.bound.delta)?;
    let doc = json!({
        "config": config_json(cfg),
        "model": m,
        "support_vectors": model.support_indices().len(),
        "bound": report,
    });
    let path = write_json(out_dir, "bound.json", &doc)?;
    Ok(CommandOutput {
        files: vec![path],
        summary: format!("bound {} (kappa {}, |alpha|^2 {})", report.bound, report.kappa, report.alpha_norm_sq),
    })
}

fn has_classical(grid: &GridSpec) -> bool {
    grid.linear.is_some() || grid.rbf.is_some() || grid.polynomial.is_some()
}

/// Repeated random-Pauli study over `study.seeds`: `study.json` and
/// `study.csv`. Classical families in `[grid]` provide the baseline.
pub fn cmd_study(cfg: &ExperimentConfig, out_dir: &Path) -> Result<CommandOutput> {
    let (_, data) = load_prepared(cfg)?;
    let baseline = has_classical(&cfg.grid).then(|| cfg.grid.classical());
    let report = random_pauli_study(&data, &cfg.study, baseline.as_ref(), &context(cfg))?;

    let (csv_path, mut out) = create(out_dir, "study.csv")?;
    for line in cfg.header_lines() {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "seed,c,train_accuracy,validation_accuracy,test_accuracy")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.seed, r.c, r.train_accuracy, r.validation_accuracy, r.test_accuracy
        )?;
    }
    out.flush()?;
    let doc = json!({ "config": config_json(cfg), "study": report });
    let json_path = write_json(out_dir, "study.json", &doc)?;
    Ok(CommandOutput {
        files: vec![json_path, csv_path],
        summary: format!(
            "{} seeds: test min {} median {} max {}",
            report.rows.len(),
            report.test_min,
            report.test_median,
            report.test_max
        ),
    })
}

/// Synthetic dataset from `[synth]` as `synth.csv`, in the default schema
/// unless `[dataset.schema]` is given.
pub fn cmd_synth(cfg: &ExperimentConfig, out_dir: &Path) -> Result<CommandOutput> {
    let ds = generate(&cfg.synth)?;
    let default_schema = CsvSchema::default();
    let schema = cfg.dataset.as_ref().map_or(&default_schema, |d| &d.schema);
    let (path, mut out) = create(out_dir, "synth.csv")?;
    write_csv(&mut out, &ds, schema, &cfg.header_lines())?;
    out.flush()?;
    let (pos, neg) = ds.class_counts();
    Ok(CommandOutput {
        files: vec![path],
        summary: format!("{} rows ({pos} positive, {neg} negative), dim {}", ds.len(), ds.dim()),
    })
}
