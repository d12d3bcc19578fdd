use num_complex::Complex64;

use super::pauli::PauliString;
use crate::error::{ensure_dim, Error, Result};

/// Largest register simulated as a full statevector.
pub const MAX_STATE_QUBITS: usize = 30;

const NORM_TOLERANCE: f64 = 1e-12;

/// Pure n-qubit state stored as 2^n amplitudes in Kronecker basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state |0^n>.
    pub fn zero(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_STATE_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "qubit count must be in 1..={MAX_STATE_QUBITS}, got {qubits}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amplitudes })
    }

    /// Computational basis state |index>.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        let mut state = Self::zero(qubits)?;
        if index >= state.amplitudes.len() {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        state.amplitudes[0] = Complex64::new(0.0, 0.0);
        state.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Wraps amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes".into()));
        }
        let state = Self {
            qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!("state norm {norm} differs from 1")));
        }
        Ok(state)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Euclidean distance between amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Returns `P|psi>` without materialising the operator.
    pub fn apply_pauli_string(&self, p: &PauliString) -> Result<StateVector> {
        ensure_dim(self.qubits, p.len())?;
        let phase = p.global_phase();
        let x = p.x_mask();
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (b, amp) in self.amplitudes.iter().enumerate() {
            out[b ^ x] = phase * p.sign(b) * amp;
        }
        Ok(StateVector {
            qubits: self.qubits,
            amplitudes: out,
        })
    }

    /// Returns `exp(-i theta P)|psi> = cos(theta)|psi> - i sin(theta) P|psi>`.
    pub fn apply_pauli_exponential(&self, p: &PauliString, theta: f64) -> Result<StateVector> {
        let mut out = self.clone();
        out.pauli_exponential_in_place(p, theta)?;
        Ok(out)
    }

    /// In-place form of [`apply_pauli_exponential`](Self::apply_pauli_exponential).
    pub fn pauli_exponential_in_place(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        ensure_dim(self.qubits, p.len())?;
        if !theta.is_finite() {
            return Err(Error::NonFinite("rotation angle".into()));
        }
        self.rotate_unchecked(p, theta);
        Ok(())
    }

    pub(crate) fn rotate_unchecked(&mut self, p: &PauliString, theta: f64) {
        let (sin, cos) = theta.sin_cos();
        let x = p.x_mask();
        // -i sin(theta) * i^{#Y}
        let coeff = Complex64::new(0.0, -sin) * p.global_phase();
        let amps = &mut self.amplitudes;
        if x == 0 {
            for (b, amp) in amps.iter_mut().enumerate() {
                *amp = *amp * cos + coeff * p.sign(b) * *amp;
            }
            return;
        }
        for j in 0..amps.len() {
            let k = j ^ x;
            if k < j {
                continue;
            }
            let a = amps[j];
            let b = amps[k];
            // (P psi)[j] = phase(k) psi[k], (P psi)[k] = phase(j) psi[j]
            amps[j] = a * cos + coeff * p.sign(k) * b;
            amps[k] = b * cos + coeff * p.sign(j) * a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn zero_state_layout() {
        let s = StateVector::zero(3).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
        assert!(StateVector::zero(0).is_err());
    }

    #[test]
    fn identity_and_bit_flip() {
        let zero = StateVector::zero(1).unwrap();
        assert_eq!(zero.apply_pauli_string(&ps("I")).unwrap(), zero);
        let one = zero.apply_pauli_string(&ps("X")).unwrap();
        assert_eq!(one, StateVector::basis(1, 1).unwrap());
    }

    #[test]
    fn y_phases() {
        let zero = StateVector::zero(1).unwrap();
        let y0 = zero.apply_pauli_string(&ps("Y")).unwrap();
        assert!(close(y0.amplitudes()[1], Complex64::new(0.0, 1.0)));
        let one = StateVector::basis(1, 1).unwrap();
        let y1 = one.apply_pauli_string(&ps("Y")).unwrap();
        assert!(close(y1.amplitudes()[0], Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply_pauli_string(&ps("X")),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(s.apply_pauli_exponential(&ps("XYZ"), 0.1).is_err());
    }

    #[test]
    fn exponential_special_cases() {
        let zero = StateVector::zero(1).unwrap();
        assert_eq!(zero.apply_pauli_exponential(&ps("Y"), 0.0).unwrap(), zero);

        let theta = 0.37;
        let z = zero.apply_pauli_exponential(&ps("Z"), theta).unwrap();
        assert!(close(z.amplitudes()[0], Complex64::new(theta.cos(), -theta.sin())));
        assert!(close(z.amplitudes()[1], Complex64::new(0.0, 0.0)));

        let x = zero.apply_pauli_exponential(&ps("X"), FRAC_PI_2).unwrap();
        assert!(close(x.amplitudes()[1], Complex64::new(0.0, -1.0)));
        assert!(x.amplitudes()[0].norm() < 1e-15);
    }

    #[test]
    fn non_finite_angle_rejected() {
        let zero = StateVector::zero(1).unwrap();
        assert!(matches!(
            zero.apply_pauli_exponential(&ps("X"), f64::NAN),
            Err(Error::NonFinite(_))
        ));
        assert!(zero.apply_pauli_exponential(&ps("X"), f64::INFINITY).is_err());
    }

    #[test]
    fn from_amplitudes_validates() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(StateVector::from_amplitudes(vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)]).is_ok());
        assert!(StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 2]).is_err());
        assert!(StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_err());
    }
}
