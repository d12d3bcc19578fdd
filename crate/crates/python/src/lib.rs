//! Python bindings: `import qsvm`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qsvm_core::kernels::{ClassicalKernelParams, KernelKind, KernelMatrix};
use qsvm_core::{experiment, kernels, qsim, svm};

fn py_err(e: qsvm_core::Error) -> PyErr {
    PyValueError::new_err(format!("[{}] {e}", e.kind()))
}

fn square(rows: &[Vec<f64>], tag: KernelKind) -> PyResult<KernelMatrix> {
    KernelMatrix::from_rows(rows, tag).map_err(py_err)
}

#[pyclass(name = "PauliString", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPauliString(qsim::PauliString);

#[pymethods]
impl PyPauliString {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(py_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliString('{}')", self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn is_diagonal(&self) -> bool {
        self.0.is_diagonal()
    }

    fn commutes_with(&self, other: &PyPauliString) -> bool {
        self.0.commutes_with(&other.0)
    }

    /// `<0...0| P |0...0>`.
    fn vacuum_expectation(&self) -> f64 {
        self.0.vacuum_expectation()
    }
}

#[pyclass(name = "EncodingSpec", frozen, from_py_object)]
#[derive(Clone)]
struct PyEncodingSpec(qsim::EncodingSpec);

#[pymethods]
impl PyEncodingSpec {
    #[new]
    #[pyo3(signature = (qubits, paulis, t, s=1))]
    fn new(qubits: usize, paulis: Vec<String>, t: f64, s: u32) -> PyResult<Self> {
        let paulis = paulis
            .iter()
            .map(|p| p.parse().map_err(py_err))
            .collect::<PyResult<Vec<_>>>()?;
        qsim::EncodingSpec::new(qubits, paulis, t, s).map(Self).map_err(py_err)
    }

    /// Spec with `d` Pauli strings sampled from `seed`.
    #[staticmethod]
    #[pyo3(signature = (qubits, d, t, s, seed))]
    fn random(qubits: usize, d: usize, t: f64, s: u32, seed: u64) -> PyResult<Self> {
        let paulis = experiment::sample_pauli_strings(d, qubits, seed).map_err(py_err)?;
        qsim::EncodingSpec::new(qubits, paulis, t, s).map(Self).map_err(py_err)
    }

    #[getter]
    fn qubits(&self) -> usize {
        self.0.qubits()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn t(&self) -> f64 {
        self.0.time()
    }

    #[getter]
    fn s(&self) -> u32 {
        self.0.steps()
    }

    #[getter]
    fn paulis(&self) -> Vec<String> {
        self.0.paulis().iter().map(ToString::to_string).collect()
    }

    fn is_commuting(&self) -> bool {
        self.0.is_commuting()
    }

    fn __repr__(&self) -> String {
        format!(
            "EncodingSpec(qubits={}, paulis={:?}, t={}, s={})",
            self.0.qubits(),
            self.paulis(),
            self.0.time(),
            self.0.steps()
        )
    }
}

#[pyclass(name = "SvmModel", frozen)]
struct PySvmModel(svm::SvmModel);

#[pymethods]
impl PySvmModel {
    #[getter]
    fn alphas(&self) -> Vec<f64> {
        self.0.alphas().to_vec()
    }

    #[getter]
    fn bias(&self) -> f64 {
        self.0.bias()
    }

    #[getter]
    fn penalty(&self) -> f64 {
        self.0.penalty()
    }

    #[getter]
    fn support_indices(&self) -> Vec<usize> {
        self.0.support_indices().to_vec()
    }

    #[getter]
    fn objective(&self) -> f64 {
        self.0.objective()
    }

    #[getter]
    fn iterations(&self) -> u64 {
        self.0.iterations()
    }

    /// Decision value from one row of kernel values against the training set.
    fn decision_value(&self, kernel_row: Vec<f64>) -> PyResult<f64> {
        self.0.decision_value(&kernel_row).map_err(py_err)
    }

    /// Labels (+1/-1) for a test-by-train kernel matrix.
    fn predict(&self, cross: Vec<Vec<f64>>) -> PyResult<Vec<i8>> {
        let tag = KernelKind::Classical(ClassicalKernelParams::Linear);
        self.0.predict_batch(&square(&cross, tag)?).map_err(py_err)
    }
}

#[pyfunction]
fn encode(x: Vec<f64>, spec: &PyEncodingSpec) -> PyResult<Vec<Complex64>> {
    qsim::encode(&x, &spec.0).map(|s| s.into_amplitudes()).map_err(py_err)
}

#[pyfunction]
fn exact_evolution(x: Vec<f64>, spec: &PyEncodingSpec) -> PyResult<Vec<Complex64>> {
    qsim::exact_evolution(&x, &spec.0).map(|s| s.into_amplitudes()).map_err(py_err)
}

#[pyfunction]
fn kernel_value(a: Vec<f64>, b: Vec<f64>, spec: &PyEncodingSpec) -> PyResult<f64> {
    qsim::kernel_value(&a, &b, &spec.0).map_err(py_err)
}

#[pyfunction]
fn kernel_via_density(a: Vec<f64>, b: Vec<f64>, spec: &PyEncodingSpec) -> PyResult<f64> {
    qsim::kernel_via_density(&a, &b, &spec.0).map_err(py_err)
}

#[pyfunction]
fn hamiltonian_expectation_zero(x: Vec<f64>, spec: &PyEncodingSpec) -> PyResult<f64> {
    qsim::hamiltonian_expectation_zero(&x, &spec.0).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (samples, spec, workers=1))]
fn quantum_gram(py: Python<'_>, samples: Vec<Vec<f64>>, spec: &PyEncodingSpec, workers: usize) -> PyResult<Vec<Vec<f64>>> {
    let spec = spec.0.clone();
    py.detach(|| kernels::quantum_gram_par(&samples, &spec, workers))
        .map(|m| m.to_rows())
        .map_err(py_err)
}

/// Rows follow `test`, columns `train`.
#[pyfunction]
#[pyo3(signature = (train, test, spec, workers=1))]
fn quantum_cross_gram(
    py: Python<'_>,
    train: Vec<Vec<f64>>,
    test: Vec<Vec<f64>>,
    spec: &PyEncodingSpec,
    workers: usize,
) -> PyResult<Vec<Vec<f64>>> {
    let spec = spec.0.clone();
    py.detach(|| kernels::quantum_cross_gram_par(&train, &test, &spec, workers))
        .map(|m| m.to_rows())
        .map_err(py_err)
}

/// `family` is `linear`, `rbf` or `polynomial`.
#[pyfunction]
#[pyo3(signature = (a, b, family, gamma=None, degree=3, coef0=0.0))]
fn classical_gram(
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    family: &str,
    gamma: Option<f64>,
    degree: u32,
    coef0: f64,
) -> PyResult<Vec<Vec<f64>>> {
    let dim = a.first().map_or(1, Vec::len);
    let params = match family {
        "linear" => ClassicalKernelParams::Linear,
        "rbf" => ClassicalKernelParams::Rbf {
            gamma: gamma.ok_or_else(|| PyValueError::new_err("rbf needs gamma"))?,
        },
        "polynomial" => ClassicalKernelParams::polynomial(degree, gamma, coef0, dim).map_err(py_err)?,
        other => return Err(PyValueError::new_err(format!("unknown kernel family '{other}'"))),
    };
    kernels::classical_gram(&a, &b, &params).map(|m| m.to_rows()).map_err(py_err)
}

/// Solves the soft-margin dual for a precomputed Gram matrix.
#[pyfunction]
fn solve_dual(kernel: Vec<Vec<f64>>, labels: Vec<i8>, c: f64) -> PyResult<PySvmModel> {
    let tag = KernelKind::Classical(ClassicalKernelParams::Linear);
    svm::solve_dual(&square(&kernel, tag)?, &labels, c).map(PySvmModel).map_err(py_err)
}

#[pyfunction]
fn sample_pauli_strings(d: usize, n: usize, seed: u64) -> PyResult<Vec<String>> {
    experiment::sample_pauli_strings(d, n, seed)
        .map(|v| v.iter().map(ToString::to_string).collect())
        .map_err(py_err)
}

#[pyfunction]
fn generalization_bound<'py>(
    py: Python<'py>,
    alphas: Vec<f64>,
    samples: Vec<Vec<f64>>,
    spec: &PyEncodingSpec,
    delta: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = experiment::generalization_bound(&alphas, &samples, &spec.0, delta).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("alpha_norm_sq", r.alpha_norm_sq)?;
    d.set_item("kappa", r.kappa)?;
    d.set_item("kappa_negative", r.kappa_negative)?;
    d.set_item("t", r.t)?;
    d.set_item("samples", r.samples)?;
    d.set_item("delta", r.delta)?;
    d.set_item("multiplier", r.multiplier)?;
    d.set_item("bound", r.bound)?;
    Ok(d)
}

#[pymodule]
fn qsvm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauliString>()?;
    m.add_class::<PyEncodingSpec>()?;
    m.add_class::<PySvmModel>()?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(exact_evolution, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_value, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_via_density, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian_expectation_zero, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_gram, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_cross_gram, m)?)?;
    m.add_function(wrap_pyfunction!(classical_gram, m)?)?;
    m.add_function(wrap_pyfunction!(solve_dual, m)?)?;
    m.add_function(wrap_pyfunction!(sample_pauli_strings, m)?)?;
    m.add_function(wrap_pyfunction!(generalization_bound, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
