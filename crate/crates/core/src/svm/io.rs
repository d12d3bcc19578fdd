//! Plain-text model files.
//!
//! ```text
//! qsvm-model 1
//! # free-form comment lines
//! samples <M>
//! dim <d>
//! penalty <C>
//! bias <b>
//! kernel <json descriptor>
//! data
//! <alpha> <label> <x_1> ... <x_d>      (M lines)
//! ```
//!
//! Reals are written with 17 significant digits so reading is exact.

use std::io::{BufRead, Write};

use super::{support_indices, SvmModel};
use crate::error::{Error, Result};
use crate::kernels::KernelKind;

pub const MODEL_FORMAT_VERSION: u32 = 1;

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_model<W: Write>(mut out: W, model: &SvmModel, comments: &[String]) -> Result<()> {
    writeln!(out, "qsvm-model {MODEL_FORMAT_VERSION}")?;
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let dim = model
        .samples
        .as_ref()
        .and_then(|s| s.first())
        .map_or(0, Vec::len);
    writeln!(out, "samples {}", model.len())?;
    writeln!(out, "dim {dim}")?;
    writeln!(out, "penalty {}", real(model.penalty))?;
    writeln!(out, "bias {}", real(model.bias))?;
    match &model.kernel {
        Some(k) => writeln!(out, "kernel {}", k.descriptor())?,
        None => writeln!(out, "kernel none")?,
    }
    writeln!(out, "data")?;
    for i in 0..model.len() {
        let mut line = format!("{} {}", real(model.alphas[i]), model.labels[i]);
        if let Some(samples) = &model.samples {
            for v in &samples[i] {
                line.push(' ');
                line.push_str(&real(*v));
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("model file line {line}: {msg}"))
}

pub fn read_model<R: BufRead>(input: R) -> Result<SvmModel> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(n, l)| l.map(|l| (n + 1, l)))
        .filter(|r| !matches!(r, Ok((_, l)) if l.trim_start().starts_with('#') || l.trim().is_empty()));

    let mut next = |what: &str| -> Result<(usize, String)> {
        lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::Parse(format!("model file ended before {what}")))
    };

    let (n, magic) = next("header")?;
    match magic.trim().split_once(' ') {
        Some(("qsvm-model", v)) if v.trim() == MODEL_FORMAT_VERSION.to_string() => {}
        _ => return Err(parse_err(n, format!("expected 'qsvm-model {MODEL_FORMAT_VERSION}'"))),
    }

    let mut field = |key: &str| -> Result<(usize, String)> {
        let (n, line) = next(key)?;
        match line.trim().split_once(' ') {
            Some((k, v)) if k == key => Ok((n, v.trim().to_string())),
            _ => Err(parse_err(n, format!("expected '{key} ...'"))),
        }
    };
    let num = |(n, v): (usize, String)| -> Result<f64> { v.parse::<f64>().map_err(|e| parse_err(n, e)) };
    let int = |(n, v): (usize, String)| -> Result<usize> { v.parse::<usize>().map_err(|e| parse_err(n, e)) };

    let m = int(field("samples")?)?;
    let dim = int(field("dim")?)?;
    let penalty = num(field("penalty")?)?;
    let bias = num(field("bias")?)?;
    let (kn, kdesc) = field("kernel")?;
    let kernel = if kdesc == "none" {
        None
    } else {
        Some(serde_json::from_str::<KernelKind>(&kdesc).map_err(|e| parse_err(kn, e))?)
    };
    let (dn, data) = next("data")?;
    if data.trim() != "data" {
        return Err(parse_err(dn, "expected 'data'"));
    }

    let mut alphas = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    let mut samples = Vec::with_capacity(if dim > 0 { m } else { 0 });
    for _ in 0..m {
        let (n, line) = next("all sample lines")?;
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != dim + 2 {
            return Err(parse_err(n, format!("expected {} fields, found {}", dim + 2, cells.len())));
        }
        alphas.push(cells[0].parse::<f64>().map_err(|e| parse_err(n, e))?);
        let y = cells[1].parse::<i8>().map_err(|e| parse_err(n, e))?;
        if y != 1 && y != -1 {
            return Err(parse_err(n, format!("label {y} is not +1 or -1")));
        }
        labels.push(y);
        if dim > 0 {
            samples.push(
                cells[2..]
                    .iter()
                    .map(|c| c.parse::<f64>().map_err(|e| parse_err(n, e)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    if let Some(Ok((n, _))) = lines.next() {
        return Err(parse_err(n, "trailing content after sample lines"));
    }
    Ok(SvmModel {
        support_indices: support_indices(&alphas),
        alphas,
        bias,
        penalty,
        labels,
        objective: f64::NAN,
        iterations: 0,
        kernel,
        samples: if dim > 0 { Some(samples) } else { None },
    })
}
