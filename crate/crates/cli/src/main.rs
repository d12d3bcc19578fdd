use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use qsvm_core::commands::{cmd_bound, cmd_eval, cmd_gridsearch, cmd_kernel, cmd_study, cmd_synth, CommandOutput};
use qsvm_core::config::ExperimentConfig;

const COMMON_KEYS: &str = "\
Common config keys:
  output_dir                      artifact directory (else --output-dir, else $QSVM_OUTPUT_DIR, else ./qsvm-out)
  workers                         worker threads, default 1";

const DATASET_KEYS: &str = "
  dataset.path                    input CSV
  dataset.schema.label_column     default \"label\"
  dataset.schema.id_column        optional identifier column
  dataset.schema.feature_columns  list; default every other column
  dataset.schema.positive_labels  cells mapped to +1, default [\"1\"]
  dataset.schema.negative_labels  cells mapped to -1, default [\"0\"]";

const PROTOCOL_KEYS: &str = "
  protocol.seed                   split seed (undersampling uses seed+1, folds seed+2)
  protocol.test_fraction          default 0.2
  protocol.folds                  default 5
  protocol.undersample            default true";

const MODEL_KEYS: &str = "
  model.kernel                    quantum | linear | rbf | polynomial
  model.c                         penalty C
  model.qubits, model.t, model.s, model.pauli_seed   (quantum)
  model.gamma                     (rbf; optional for polynomial, default 1/d)
  model.degree, model.coef0       (polynomial)";

const GRID_KEYS: &str = "
  grid.quantum.qubits, grid.quantum.t, grid.quantum.s, grid.quantum.c, grid.quantum.pauli_seeds
  grid.linear.c
  grid.rbf.c, grid.rbf.gamma
  grid.polynomial.c, grid.polynomial.degree, grid.polynomial.gamma, grid.polynomial.coef0
  A family is searched only when its table is present.";

const STUDY_KEYS: &str = "
  study.qubits, study.t, study.s  fixed encoding for every seed
  study.c                         penalties searched by CV per seed
  study.seeds                     Pauli sampling seeds, default 0..29
  grid.linear / grid.rbf / grid.polynomial   optional classical baseline";

const SYNTH_KEYS: &str = "
  synth.kind                      blobs | xor | cosine
  synth.samples, synth.dim        ignored for xor
  synth.margin                    blob gap along the first coordinate, default 2.0
  synth.seed
  dataset.schema.*                optional output layout";

fn keys(parts: &[&str]) -> String {
    let mut s = String::from(COMMON_KEYS);
    for p in parts {
        s.push_str(p);
    }
    s
}

/// Quantum-kernel SVM experiments driven by a TOML config.
///
/// Every option can come from the config file and be overridden with
/// repeated `--set key=value` (values parse as TOML, else as strings).
#[derive(Debug, Parser)]
#[command(name = "qsvm", version)]
struct Cli {
    /// TOML experiment config.
    #[arg(short, long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override a config key, e.g. `--set protocol.seed=3`. Applied in order after the file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Output directory (takes precedence over `output_dir` and the environment).
    #[arg(short, long, global = true, value_name = "DIR")]
    output_dir: Option<PathBuf>,

    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gram matrix of a dataset as CSV, plus a binary cache entry.
    #[command(after_help = keys(&[DATASET_KEYS, MODEL_KEYS, "\n  kernel.standardize              standardise columns first, default false"]))]
    Kernel,
    /// Stratified cross-validated grid search; writes the report and the chosen model.
    #[command(after_help = keys(&[DATASET_KEYS, PROTOCOL_KEYS, GRID_KEYS]))]
    Gridsearch,
    /// Test-set metrics of `[model]` (or of a saved model).
    #[command(after_help = keys(&[DATASET_KEYS, PROTOCOL_KEYS, MODEL_KEYS, "\n  eval.model_file                 saved model to score instead of retraining"]))]
    Eval,
    /// Generalisation bound for a trained quantum model.
    #[command(after_help = keys(&[DATASET_KEYS, PROTOCOL_KEYS, MODEL_KEYS, "\n  bound.delta                     confidence parameter in (0, 1], default 0.05"]))]
    Bound,
    /// Repeated random-Pauli study at fixed (t, s).
    #[command(after_help = keys(&[DATASET_KEYS, PROTOCOL_KEYS, STUDY_KEYS]))]
    Study,
    /// Synthetic dataset CSV.
    #[command(after_help = keys(&[SYNTH_KEYS]))]
    Synth,
}

fn fail(kind: &str, message: &str) -> ExitCode {
    let one_line = message.split_whitespace().collect::<Vec<_>>().join(" ");
    eprintln!("qsvm-error[{kind}]: {one_line}");
    ExitCode::FAILURE
}

fn run(cli: &Cli) -> qsvm_core::Result<CommandOutput> {
    let cfg = ExperimentConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let out_dir = cfg.resolve_output_dir(cli.output_dir.as_deref());
    log::info!("output directory {}", out_dir.display());
    match cli.command {
        Command::Kernel => cmd_kernel(&cfg, &out_dir),
        Command::Gridsearch => cmd_gridsearch(&cfg, &out_dir),
        Command::Eval => cmd_eval(&cfg, &out_dir),
        Command::Bound => cmd_bound(&cfg, &out_dir),
        Command::Study => cmd_study(&cfg, &out_dir),
        Command::Synth => cmd_synth(&cfg, &out_dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return fail("usage", first.trim_start_matches("error: "));
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();

    match run(&cli) {
        Ok(out) => {
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            println!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.kind(), &e.to_string()),
    }
}
