use serde::{Deserialize, Serialize};

use super::pauli::PauliString;
use super::state::StateVector;
use crate::error::{ensure_dim, Error, Result};

/// Parameters of the Trotterised Pauli-Hamiltonian feature map
/// `U(x) = (prod_j exp(-i x_j P_j t / s))^s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEncodingSpec", into = "RawEncodingSpec")]
pub struct EncodingSpec {
    qubits: usize,
    paulis: Vec<PauliString>,
    time: f64,
    steps: u32,
}

#[derive(Serialize, Deserialize)]
struct RawEncodingSpec {
    qubits: usize,
    paulis: Vec<PauliString>,
    t: f64,
    s: u32,
}

impl TryFrom<RawEncodingSpec> for EncodingSpec {
    type Error = Error;

    fn try_from(raw: RawEncodingSpec) -> Result<Self> {
        EncodingSpec::new(raw.qubits, raw.paulis, raw.t, raw.s)
    }
}

impl From<EncodingSpec> for RawEncodingSpec {
    fn from(spec: EncodingSpec) -> Self {
        RawEncodingSpec {
            qubits: spec.qubits,
            paulis: spec.paulis,
            t: spec.time,
            s: spec.steps,
        }
    }
}

impl EncodingSpec {
    pub fn new(qubits: usize, paulis: Vec<PauliString>, time: f64, steps: u32) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::InvalidParameter("qubit count must be at least 1".into()));
        }
        if paulis.is_empty() {
            return Err(Error::InvalidParameter("at least one Pauli string is required".into()));
        }
        if let Some(p) = paulis.iter().find(|p| p.len() != qubits) {
            return Err(Error::InvalidParameter(format!(
                "Pauli string {p} has length {} but the register has {qubits} qubits",
                p.len()
            )));
        }
        if !(time.is_finite() && time > 0.0) {
            return Err(Error::InvalidParameter(format!("evolution time must be positive, got {time}")));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("Trotter step count must be at least 1".into()));
        }
        Ok(Self {
            qubits,
            paulis,
            time,
            steps,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Input dimension d (one Pauli string per feature).
    pub fn dim(&self) -> usize {
        self.paulis.len()
    }

    pub fn paulis(&self) -> &[PauliString] {
        &self.paulis
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    /// Same strings with different (t, s).
    pub fn with_schedule(&self, time: f64, steps: u32) -> Result<Self> {
        Self::new(self.qubits, self.paulis.clone(), time, steps)
    }

    /// Whether every pair of strings commutes.
    pub fn is_commuting(&self) -> bool {
        self.paulis
            .iter()
            .enumerate()
            .all(|(i, a)| self.paulis[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    pub(crate) fn check_input(&self, x: &[f64]) -> Result<()> {
        ensure_dim(self.dim(), x.len())?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("input vector".into()));
        }
        Ok(())
    }
}

/// Feature state `U(x)|0^n>`.
///
/// Within each of the `s` repetitions the factors are applied with `P_1`
/// acting first and ascending `j` thereafter; each angle is `(x_j * t) / s`.
pub fn encode(x: &[f64], spec: &EncodingSpec) -> Result<StateVector> {
    spec.check_input(x)?;
    let mut state = StateVector::zero(spec.qubits())?;
    let steps = f64::from(spec.steps());
    let angles: Vec<f64> = x.iter().map(|v| v * spec.time() / steps).collect();
    for _ in 0..spec.steps() {
        for (p, &theta) in spec.paulis().iter().zip(&angles) {
            state.rotate_unchecked(p, theta);
        }
    }
    Ok(state)
}

const CLAMP_TOLERANCE: f64 = 1e-12;

/// Clamps a fidelity into [0, 1], rejecting excursions beyond rounding error.
pub fn clamp_unit(value: f64) -> Result<f64> {
    if !(-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&value) {
        return Err(Error::KernelOutOfRange(value));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Kernel value between two precomputed feature states.
pub fn state_kernel(a: &StateVector, b: &StateVector) -> Result<f64> {
    clamp_unit(a.fidelity(b)?)
}

/// Fidelity kernel `|<0|U(x)^dagger U(x2)|0>|^2`.
pub fn kernel_value(x: &[f64], x2: &[f64], spec: &EncodingSpec) -> Result<f64> {
    let a = encode(x, spec)?;
    let b = encode(x2, spec)?;
    state_kernel(&a, &b)
}

/// `<0^n|H(x)|0^n>` with `H(x) = sum_j x_j P_j`; only diagonal strings contribute.
pub fn hamiltonian_expectation_zero(x: &[f64], spec: &EncodingSpec) -> Result<f64> {
    spec.check_input(x)?;
    Ok(x
        .iter()
        .zip(spec.paulis())
        .map(|(v, p)| v * p.vacuum_expectation())
        .sum())
}
