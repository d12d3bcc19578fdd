mod common;

use common::*;
use num_complex::Complex64;
use qsvm_core::kernels::{classical_gram, quantum_cross_gram, quantum_gram, ClassicalKernelParams};
use qsvm_core::qsim::{encode, exact_evolution, hamiltonian_expectation_zero, kernel_value, pauli_matrix, PauliString};
use qsvm_core::rng::DetRng;
use qsvm_core::svm::{dual_objective, solve_dual};

#[test]
fn pauli_matrices_match_kronecker_products() {
    for s in ["X", "YZ", "IXY", "ZZIY", "YYYY"] {
        let p: PauliString = s.parse().unwrap();
        let lib = pauli_matrix(&p).unwrap();
        let oracle = pauli_dense(&p);
        for i in 0..oracle.len() {
            for j in 0..oracle.len() {
                assert_eq!(lib[(i, j)], oracle[i][j], "{s} at ({i},{j})");
            }
        }
    }
}

#[test]
fn expm_oracle_reproduces_rotation_closed_form() {
    let p: PauliString = "XY".parse().unwrap();
    let theta = 0.37;
    let u = expm(&scale(&pauli_dense(&p), Complex64::new(0.0, -theta)));
    let pm = pauli_dense(&p);
    for i in 0..4 {
        for j in 0..4 {
            let id = if i == j { 1.0 } else { 0.0 };
            let expect = Complex64::new(theta.cos() * id, 0.0) - Complex64::new(0.0, theta.sin()) * pm[i][j];
            assert!((u[i][j] - expect).norm() < 1e-14);
        }
    }
}

#[test]
fn encoding_matches_dense_products() {
    let mut rng = DetRng::new(101);
    for _ in 0..30 {
        let n = 1 + rng.below(4) as usize;
        let d = 1 + rng.below(5) as usize;
        let s = 1 + rng.below(6) as u32;
        let t = rng.uniform(0.1, 2.0);
        let spec = random_spec(&mut rng, n, d, t, s);
        let x = random_point(&mut rng, d);
        let psi = encode(&x, &spec).unwrap();
        assert!(max_abs_diff(psi.amplitudes(), &trotter_oracle(&x, &spec)) < 1e-10);
    }
}

#[test]
fn exact_evolution_matches_dense_exponential() {
    let mut rng = DetRng::new(7);
    for _ in 0..20 {
        let n = 1 + rng.below(4) as usize;
        let d = 1 + rng.below(5) as usize;
        let t = rng.uniform(0.1, 1.5);
        let spec = random_spec(&mut rng, n, d, t, 1);
        let x = random_point(&mut rng, d);
        let psi = exact_evolution(&x, &spec).unwrap();
        assert!(max_abs_diff(psi.amplitudes(), &exact_oracle(&x, &spec)) < 1e-10);
    }
}

#[test]
fn kernel_is_squared_overlap_of_oracle_states() {
    let mut rng = DetRng::new(8);
    for _ in 0..20 {
        let spec = random_spec(&mut rng, 3, 3, 0.9, 3);
        let (a, b) = (random_point(&mut rng, 3), random_point(&mut rng, 3));
        let (pa, pb) = (trotter_oracle(&a, &spec), trotter_oracle(&b, &spec));
        let overlap: Complex64 = pa.iter().zip(&pb).map(|(x, y)| x.conj() * y).sum();
        assert!((kernel_value(&a, &b, &spec).unwrap() - overlap.norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn vacuum_expectation_matches_dense_diagonal() {
    let mut rng = DetRng::new(9);
    for _ in 0..20 {
        let spec = random_spec(&mut rng, 3, 4, 1.0, 1);
        let x = random_point(&mut rng, 4);
        let oracle: f64 = x.iter().zip(spec.paulis()).map(|(xj, p)| xj * pauli_dense(p)[0][0].re).sum();
        assert!((hamiltonian_expectation_zero(&x, &spec).unwrap() - oracle).abs() < 1e-14);
    }
}

#[test]
fn cross_gram_rows_follow_test_points() {
    let mut rng = DetRng::new(10);
    let spec = random_spec(&mut rng, 2, 2, 0.7, 2);
    let train: Vec<Vec<f64>> = (0..5).map(|_| random_point(&mut rng, 2)).collect();
    let test: Vec<Vec<f64>> = (0..3).map(|_| random_point(&mut rng, 2)).collect();
    let k = quantum_cross_gram(&train, &test, &spec).unwrap();
    assert_eq!((k.rows(), k.cols()), (3, 5));
    for (i, t) in test.iter().enumerate() {
        for (j, x) in train.iter().enumerate() {
            assert!((k.get(i, j) - kernel_value(t, x, &spec).unwrap()).abs() < 1e-15);
        }
    }
    let g = quantum_gram(&train, &spec).unwrap();
    assert!(g.is_symmetric());
}

#[test]
fn classical_kernels_match_formulas() {
    let a = vec![vec![1.0, 2.0], vec![-0.5, 0.25]];
    let b = vec![vec![0.0, 1.0], vec![3.0, -1.0], vec![1.0, 1.0]];
    let rbf = classical_gram(&a, &b, &ClassicalKernelParams::Rbf { gamma: 0.3 }).unwrap();
    let poly = classical_gram(
        &a,
        &b,
        &ClassicalKernelParams::Polynomial {
            gamma: 0.5,
            degree: 3,
            coef0: 1.0,
        },
    )
    .unwrap();
    for i in 0..2 {
        for j in 0..3 {
            let dot = a[i][0] * b[j][0] + a[i][1] * b[j][1];
            let sq = (a[i][0] - b[j][0]).powi(2) + (a[i][1] - b[j][1]).powi(2);
            assert!((rbf.get(i, j) - (-0.3 * sq).exp()).abs() < 1e-15);
            assert!((poly.get(i, j) - (0.5 * dot + 1.0).powi(3)).abs() < 1e-12);
        }
    }
}

#[test]
fn solver_matches_projected_gradient() {
    let mut rng = DetRng::new(2024);
    for trial in 0..20 {
        let m = 2 + rng.below(9) as usize;
        let k = random_psd(&mut rng, m);
        let y = random_labels(&mut rng, m);
        let c = [0.1, 1.0, 10.0][trial % 3];
        let model = solve_dual(&k, &y, c).unwrap();
        let oracle = qp_oracle(&k, &y, c, 20_000);
        let (ours, theirs) = (model.objective(), dual_objective(&oracle, &k, &y));
        assert!((ours - dual_objective(model.alphas(), &k, &y)).abs() < 1e-9);
        assert!(ours <= theirs + 1e-6, "trial {trial}: {ours} vs {theirs}");
        assert!((ours - theirs).abs() < 1e-6, "trial {trial}: {ours} vs {theirs}");
        assert!(kkt_residual(&k, &y, model.alphas(), model.bias(), c) <= 1e-5);
    }
}

#[test]
fn jacobi_oracle_finds_known_spectrum() {
    let rows = vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]];
    let k = qsvm_core::kernels::KernelMatrix::from_rows(&rows, linear_tag()).unwrap();
    assert!((min_eigenvalue(&k) - 1.0).abs() < 1e-12);
}
