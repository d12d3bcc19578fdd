mod common;

use common::{random_labels, random_psd};
use proptest::prelude::*;
use qsvm_core::data::{stratified_split, Dataset};
use qsvm_core::experiment::{prepare, Protocol};
use qsvm_core::kernels::quantum_gram;
use qsvm_core::qsim::{encode, kernel_value, EncodingSpec, Pauli, PauliString, StateVector};
use qsvm_core::rng::DetRng;
use qsvm_core::svm::solve_dual;

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(0usize..4, n).prop_map(|v| PauliString::new(v.into_iter().map(|i| Pauli::ALL[i]).collect()).unwrap())
}

fn spec_and_points() -> impl Strategy<Value = (EncodingSpec, Vec<f64>, Vec<f64>)> {
    (1usize..=4, 1usize..=4, 0.05f64..2.0, 1u32..6).prop_flat_map(|(n, d, t, s)| {
        (
            prop::collection::vec(pauli_string(n), d).prop_map(move |ps| EncodingSpec::new(n, ps, t, s).unwrap()),
            prop::collection::vec(-3.0f64..3.0, d),
            prop::collection::vec(-3.0f64..3.0, d),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponentials_preserve_norm(p in (1usize..=5).prop_flat_map(pauli_string), theta in -10.0f64..10.0, seed in any::<u64>()) {
        let n = p.len();
        let mut rng = DetRng::new(seed);
        let raw: Vec<_> = (0..1 << n).map(|_| num_complex::Complex64::new(rng.normal(), rng.normal())).collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let psi = StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap();
        let out = psi.apply_pauli_exponential(&p, theta).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_symmetric_and_bounded((spec, a, b) in spec_and_points()) {
        let kab = kernel_value(&a, &b, &spec).unwrap();
        let kba = kernel_value(&b, &a, &spec).unwrap();
        prop_assert!((kab - kba).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&kab));
        prop_assert!((kernel_value(&a, &a, &spec).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encoding_is_deterministic((spec, a, _b) in spec_and_points()) {
        prop_assert_eq!(encode(&a, &spec).unwrap(), encode(&a, &spec).unwrap());
    }

    #[test]
    fn pauli_text_round_trips(p in (1usize..=8).prop_flat_map(pauli_string)) {
        let back: PauliString = p.to_string().to_lowercase().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn flipping_labels_negates_the_decision(seed in any::<u64>(), m in 2usize..10, c in prop::sample::select(vec![0.1, 1.0, 10.0])) {
        let mut rng = DetRng::new(seed);
        let k = random_psd(&mut rng, m);
        let y = random_labels(&mut rng, m);
        let flipped: Vec<i8> = y.iter().map(|v| -v).collect();
        let a = solve_dual(&k, &y, c).unwrap();
        let b = solve_dual(&k, &flipped, c).unwrap();
        prop_assert!((a.objective() - b.objective()).abs() < 1e-9);
        for i in 0..m {
            let fa = a.decision_value(k.row(i)).unwrap();
            let fb = b.decision_value(k.row(i)).unwrap();
            prop_assert!((fa + fb).abs() < 1e-5 * (1.0 + fa.abs()), "{} vs {}", fa, fb);
        }
    }

    #[test]
    fn gram_is_symmetric_with_unit_diagonal(seed in any::<u64>(), m in 1usize..12) {
        let mut rng = DetRng::new(seed);
        let spec = common::random_spec(&mut rng, 3, 3, 0.8, 2);
        let xs: Vec<Vec<f64>> = (0..m).map(|_| common::random_point(&mut rng, 3)).collect();
        let g = quantum_gram(&xs, &spec).unwrap();
        prop_assert!(g.is_symmetric());
        for i in 0..m {
            prop_assert_eq!(g.get(i, i), 1.0);
        }
    }

    #[test]
    fn split_partitions_rows(seed in any::<u64>(), pos in 2usize..30, neg in 2usize..30, frac in 0.1f64..0.5) {
        let labels: Vec<i8> = (0..pos + neg).map(|i| if i < pos { 1 } else { -1 }).collect();
        let samples: Vec<Vec<f64>> = (0..pos + neg).map(|i| vec![i as f64]).collect();
        let ds = Dataset::new(samples, labels).unwrap();
        let plan = stratified_split(&ds, frac, seed).unwrap();
        let mut all: Vec<usize> = plan.train.iter().chain(&plan.test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..pos + neg).collect::<Vec<_>>());
    }

    #[test]
    fn undersampled_training_is_balanced(seed in any::<u64>(), pos in 6usize..30, neg in 6usize..30) {
        let labels: Vec<i8> = (0..pos + neg).map(|i| if i < pos { 1 } else { -1 }).collect();
        let samples: Vec<Vec<f64>> = (0..pos + neg).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let ds = Dataset::new(samples, labels).unwrap();
        let protocol = Protocol { seed, folds: 2, ..Protocol::default() };
        let data = prepare(&ds, &protocol).unwrap();
        let p = data.train_labels.iter().filter(|&&y| y == 1).count();
        prop_assert_eq!(2 * p, data.train_labels.len());
    }
}
