use serde::{Deserialize, Serialize};

use super::sample_pauli_strings;
use crate::error::{Error, Result};
use crate::kernels::{ClassicalKernelParams, KernelKind};
use crate::qsim::EncodingSpec;

/// Penalty grid used when none is configured.
pub const DEFAULT_C_GRID: [f64; 8] = [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0];

/// One fully specified model: kernel plus penalty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Quantum {
        qubits: usize,
        t: f64,
        s: u32,
        pauli_seed: u64,
        c: f64,
    },
    Linear {
        c: f64,
    },
    Rbf {
        gamma: f64,
        c: f64,
    },
    Polynomial {
        degree: u32,
        /// `None` resolves to `1/d`.
        gamma: Option<f64>,
        coef0: f64,
        c: f64,
    },
}

impl ModelConfig {
    pub fn penalty(&self) -> f64 {
        match *self {
            ModelConfig::Quantum { c, .. }
            | ModelConfig::Linear { c }
            | ModelConfig::Rbf { c, .. }
            | ModelConfig::Polynomial { c, .. } => c,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ModelConfig::Quantum { .. } => "quantum",
            ModelConfig::Linear { .. } => "linear",
            ModelConfig::Rbf { .. } => "rbf",
            ModelConfig::Polynomial { .. } => "polynomial",
        }
    }

    /// Resolves the kernel for `dim` input features (samples Pauli strings
    /// for quantum configurations).
    pub fn kernel_kind(&self, dim: usize) -> Result<KernelKind> {
        let kind = match *self {
            ModelConfig::Quantum {
                qubits,
                t,
                s,
                pauli_seed,
                ..
            } => {
                let paulis = sample_pauli_strings(dim, qubits, pauli_seed)?;
                KernelKind::Quantum(EncodingSpec::new(qubits, paulis, t, s)?)
            }
            ModelConfig::Linear { .. } => KernelKind::Classical(ClassicalKernelParams::Linear),
            ModelConfig::Rbf { gamma, .. } => KernelKind::Classical(ClassicalKernelParams::Rbf { gamma }),
            ModelConfig::Polynomial {
                degree, gamma, coef0, ..
            } => KernelKind::Classical(ClassicalKernelParams::polynomial(degree, gamma, coef0, dim)?),
        };
        if let KernelKind::Classical(p) = &kind {
            p.validate()?;
        }
        Ok(kind)
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.penalty();
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("penalty C must be positive, got {c}")));
        }
        match *self {
            ModelConfig::Quantum { qubits, t, s, .. } => {
                if qubits == 0 || s == 0 || !(t.is_finite() && t > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "quantum configuration needs qubits >= 1, s >= 1, t > 0 (got {qubits}, {s}, {t})"
                    )));
                }
                Ok(())
            }
            _ => self.kernel_kind(1).map(|_| ()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantumGrid {
    pub qubits: usize,
    pub t: Vec<f64>,
    pub s: Vec<u32>,
    pub c: Vec<f64>,
    pub pauli_seeds: Vec<u64>,
}

impl Default for QuantumGrid {
    fn default() -> Self {
        Self {
            qubits: 6,
            t: vec![0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 1.0],
            s: vec![1, 2, 5, 10, 20],
            c: DEFAULT_C_GRID.to_vec(),
            pauli_seeds: vec![0, 1, 2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearGrid {
    pub c: Vec<f64>,
}

impl Default for LinearGrid {
    fn default() -> Self {
        Self {
            c: DEFAULT_C_GRID.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RbfGrid {
    pub c: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl Default for RbfGrid {
    fn default() -> Self {
        Self {
            c: DEFAULT_C_GRID.to_vec(),
            gamma: vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolynomialGrid {
    pub c: Vec<f64>,
    pub degree: Vec<u32>,
    pub gamma: Option<f64>,
    pub coef0: f64,
}

impl Default for PolynomialGrid {
    fn default() -> Self {
        Self {
            c: DEFAULT_C_GRID.to_vec(),
            degree: vec![2, 3],
            gamma: None,
            coef0: 0.0,
        }
    }
}

/// Hyperparameter grid. Absent families are not searched.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub quantum: Option<QuantumGrid>,
    pub linear: Option<LinearGrid>,
    pub rbf: Option<RbfGrid>,
    pub polynomial: Option<PolynomialGrid>,
}

fn nonempty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidParameter(format!("grid list '{name}' is empty")));
    }
    Ok(())
}

impl GridSpec {
    /// Configurations in a fixed order: quantum (seed, t, s, C), then linear
    /// (C), rbf (gamma, C) and polynomial (degree, C).
    pub fn expand(&self) -> Result<Vec<ModelConfig>> {
        let mut out = Vec::new();
        if let Some(q) = &self.quantum {
            nonempty("quantum.t", &q.t)?;
            nonempty("quantum.s", &q.s)?;
            nonempty("quantum.c", &q.c)?;
            nonempty("quantum.pauli_seeds", &q.pauli_seeds)?;
            for &pauli_seed in &q.pauli_seeds {
                for &t in &q.t {
                    for &s in &q.s {
                        for &c in &q.c {
                            out.push(ModelConfig::Quantum {
                                qubits: q.qubits,
                                t,
                                s,
                                pauli_seed,
                                c,
                            });
                        }
                    }
                }
            }
        }
        if let Some(l) = &self.linear {
            nonempty("linear.c", &l.c)?;
            out.extend(l.c.iter().map(|&c| ModelConfig::Linear { c }));
        }
        if let Some(r) = &self.rbf {
            nonempty("rbf.c", &r.c)?;
            nonempty("rbf.gamma", &r.gamma)?;
            for &gamma in &r.gamma {
                out.extend(r.c.iter().map(|&c| ModelConfig::Rbf { gamma, c }));
            }
        }
        if let Some(p) = &self.polynomial {
            nonempty("polynomial.c", &p.c)?;
            nonempty("polynomial.degree", &p.degree)?;
            for &degree in &p.degree {
                out.extend(p.c.iter().map(|&c| ModelConfig::Polynomial {
                    degree,
                    gamma: p.gamma,
                    coef0: p.coef0,
                    c,
                }));
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("grid contains no configurations".into()));
        }
        for cfg in &out {
            cfg.validate()?;
        }
        Ok(out)
    }

    /// Classical part only.
    pub fn classical(&self) -> GridSpec {
        GridSpec {
            quantum: None,
            ..self.clone()
        }
    }
}
