//! Dense reference computations used to cross-check the statevector path.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::encoding::{clamp_unit, encode, EncodingSpec};
use super::pauli::{Pauli, PauliString};
use super::state::StateVector;
use crate::error::{Error, Result};

/// Largest register for which dense 2^n x 2^n matrices are built.
pub const DENSE_QUBIT_LIMIT: usize = 10;

fn check_dense(n: usize) -> Result<()> {
    if n > DENSE_QUBIT_LIMIT {
        return Err(Error::DenseLimit {
            n,
            max: DENSE_QUBIT_LIMIT,
        });
    }
    Ok(())
}

fn single_qubit(p: Pauli) -> DMatrix<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        Pauli::I => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        Pauli::X => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        Pauli::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        Pauli::Z => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    }
}

/// Kronecker product of the single-qubit matrices, leftmost symbol first.
pub fn pauli_matrix(p: &PauliString) -> Result<DMatrix<Complex64>> {
    check_dense(p.len())?;
    let mut out = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for &s in p.symbols() {
        out = out.kronecker(&single_qubit(s));
    }
    Ok(out)
}

/// Dense `H(x) = sum_j x_j P_j`.
pub fn hamiltonian_matrix(x: &[f64], spec: &EncodingSpec) -> Result<DMatrix<Complex64>> {
    check_dense(spec.qubits())?;
    spec.check_input(x)?;
    let dim = 1usize << spec.qubits();
    let mut h = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (v, p) in x.iter().zip(spec.paulis()) {
        h += pauli_matrix(p)? * Complex64::new(*v, 0.0);
    }
    Ok(h)
}

/// `exp(-i H(x) t)|0^n>` via Hermitian eigendecomposition of the dense Hamiltonian.
pub fn exact_evolution(x: &[f64], spec: &EncodingSpec) -> Result<StateVector> {
    let h = hamiltonian_matrix(x, spec)?;
    let eig = h.symmetric_eigen();
    let t = spec.time();
    // V diag(e^{-i lambda t}) V^dagger e_0: column 0 of V^dagger is conj(row 0 of V).
    let v = &eig.eigenvectors;
    let dim = v.nrows();
    let coeffs: Vec<Complex64> = (0..dim)
        .map(|k| Complex64::from_polar(1.0, -eig.eigenvalues[k] * t) * v[(0, k)].conj())
        .collect();
    let amplitudes = (0..dim)
        .map(|r| (0..dim).map(|k| v[(r, k)] * coeffs[k]).sum())
        .collect();
    StateVector::from_amplitudes(amplitudes)
}

fn density(state: &StateVector) -> DMatrix<Complex64> {
    let a = state.amplitudes();
    DMatrix::from_fn(a.len(), a.len(), |i, j| a[i] * a[j].conj())
}

/// `Tr[rho(x) rho(x2)]` from explicitly built density matrices.
pub fn kernel_via_density(x: &[f64], x2: &[f64], spec: &EncodingSpec) -> Result<f64> {
    check_dense(spec.qubits())?;
    let rho_a = density(&encode(x, spec)?);
    let rho_b = density(&encode(x2, spec)?);
    let trace = (&rho_a * &rho_b).trace();
    clamp_unit(trace.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, paulis: &[&str], t: f64, s: u32) -> EncodingSpec {
        EncodingSpec::new(n, paulis.iter().map(|p| p.parse().unwrap()).collect(), t, s).unwrap()
    }

    #[test]
    fn pauli_matrices_square_to_identity() {
        for s in ["XYZ", "IZY", "YYX"] {
            let m = pauli_matrix(&s.parse().unwrap()).unwrap();
            let id = DMatrix::<Complex64>::identity(8, 8);
            assert!((&m * &m - &id).norm() < 1e-14);
            assert!((m.adjoint() - &m).norm() < 1e-14);
        }
    }

    #[test]
    fn dense_limit_enforced() {
        let p = "X".repeat(11);
        let sp = spec(11, &[p.as_str()], 1.0, 1);
        let x = [0.1];
        assert!(matches!(exact_evolution(&x, &sp), Err(Error::DenseLimit { .. })));
        assert!(matches!(kernel_via_density(&x, &x, &sp), Err(Error::DenseLimit { .. })));
    }

    #[test]
    fn exact_zero_input() {
        let sp = spec(2, &["XY", "ZZ"], 1.0, 1);
        let s = exact_evolution(&[0.0, 0.0], &sp).unwrap();
        assert!(s.distance(&StateVector::zero(2).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn single_term_needs_no_trotter() {
        for s in [1, 2, 7] {
            let sp = spec(2, &["YX"], 0.8, s);
            let a = encode(&[1.3], &sp).unwrap();
            let b = exact_evolution(&[1.3], &sp).unwrap();
            assert!(a.distance(&b).unwrap() < 1e-10);
        }
    }

    #[test]
    fn density_kernel_purity() {
        let sp = spec(2, &["XY", "ZX"], 0.6, 3);
        let k = kernel_via_density(&[0.2, -1.0], &[0.2, -1.0], &sp).unwrap();
        assert!((k - 1.0).abs() < 1e-12);
    }
}
