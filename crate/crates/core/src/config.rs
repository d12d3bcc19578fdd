//! Experiment configuration: one TOML file plus dotted `key=value` overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::CsvSchema;
use crate::error::{Error, Result};
use crate::experiment::{GridSpec, ModelConfig, Protocol, StudySettings};
use crate::synth::SynthSettings;

/// Environment variable consulted when neither the command line nor the
/// config names an output directory.
pub const OUTPUT_DIR_ENV: &str = "QSVM_OUTPUT_DIR";

pub const DEFAULT_OUTPUT_DIR: &str = "qsvm-out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub schema: CsvSchema,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSettings {
    /// Standardise every column (statistics over all rows) before computing
    /// the Gram matrix.
    pub standardize: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalSettings {
    /// Saved model to score instead of retraining `[model]`.
    pub model_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundSettings {
    pub delta: f64,
}

impl Default for BoundSettings {
    fn default() -> Self {
        Self { delta: 0.05 }
    }
}

/// Everything a subcommand can consume. Unknown keys are errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Not echoed into artifacts, so runs in different directories agree.
    #[serde(skip_serializing)]
    pub output_dir: Option<PathBuf>,
    pub workers: usize,
    pub dataset: Option<DatasetConfig>,
    pub protocol: Protocol,
    pub grid: GridSpec,
    pub model: Option<ModelConfig>,
    pub kernel: KernelSettings,
    pub eval: EvalSettings,
    pub bound: BoundSettings,
    pub study: StudySettings,
    pub synth: SynthSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            output_dir: None,
            workers: 1,
            dataset: None,
            protocol: Protocol::default(),
            grid: GridSpec::default(),
            model: None,
            kernel: KernelSettings::default(),
            eval: EvalSettings::default(),
            bound: BoundSettings::default(),
            study: StudySettings::default(),
            synth: SynthSettings::default(),
        }
    }
}

/// Parses `value` as a TOML value, falling back to a plain string.
fn parse_value(value: &str) -> toml::Value {
    match format!("v = {value}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key just written"),
        Err(_) => toml::Value::String(value.to_string()),
    }
}

/// Applies one `a.b.c=value` override, creating tables on the way.
pub fn apply_override(root: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override '{assignment}' is not key=value")))?;
    let path: Vec<&str> = key.trim().split('.').map(str::trim).collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("override key '{key}' is malformed")));
    }
    let (last, parents) = path.split_last().expect("split yields at least one part");
    let mut table = root;
    for part in parents {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override '{key}': '{part}' is not a table")))?;
    }
    table.insert(last.to_string(), parse_value(value.trim()));
    Ok(())
}

impl ExperimentConfig {
    /// Parses `text`, applies `overrides` in order, then validates the keys.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(flatten(&e.to_string())))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: ExperimentConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(flatten(&e.to_string())))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))))?,
            None => String::new(),
        };
        Self::from_toml_str(&text, overrides)
    }

    fn check(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        if !(self.bound.delta > 0.0 && self.bound.delta <= 1.0) {
            return Err(Error::Config(format!("bound.delta must lie in (0, 1], got {}", self.bound.delta)));
        }
        Ok(())
    }

    /// Command line beats the config file, which beats the environment.
    pub fn resolve_output_dir(&self, cli: Option<&Path>) -> PathBuf {
        if let Some(p) = cli {
            return p.to_path_buf();
        }
        if let Some(p) = &self.output_dir {
            return p.clone();
        }
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(v) if !v.is_empty() => PathBuf::from(v),
            _ => PathBuf::from(DEFAULT_OUTPUT_DIR),
        }
    }

    pub fn dataset(&self) -> Result<&DatasetConfig> {
        self.dataset
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs [dataset] path".into()))
    }

    pub fn model(&self) -> Result<&ModelConfig> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs a [model] section".into()))
    }

    /// The resolved configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    /// Non-empty lines of `to_toml`, for artifact headers.
    pub fn header_lines(&self) -> Vec<String> {
        self.to_toml()
            .lines()
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect()
    }
}

fn flatten(message: &str) -> String {
    message.split_whitespace().collect::<Vec<_>>().join(" ")
}
