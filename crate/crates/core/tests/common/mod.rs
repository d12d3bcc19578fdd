//! Reference implementations used only by the tests: dense complex matrices
//! built from 2x2 blocks, a Taylor matrix exponential with scaling and
//! squaring, and a projected-gradient QP solver.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use qsvm_core::experiment::sample_pauli_strings;
use qsvm_core::kernels::{ClassicalKernelParams, KernelKind, KernelMatrix};
use qsvm_core::qsim::{EncodingSpec, PauliString};
use qsvm_core::rng::DetRng;

pub type Mat = Vec<Vec<C>>;

pub fn zeros(n: usize) -> Mat {
    vec![vec![C::new(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

fn single(symbol: char) -> Mat {
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    match symbol {
        'I' => vec![vec![l, o], vec![o, l]],
        'X' => vec![vec![o, l], vec![l, o]],
        'Y' => vec![vec![o, -i], vec![i, o]],
        'Z' => vec![vec![l, o], vec![o, -l]],
        _ => panic!("bad symbol {symbol}"),
    }
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Leftmost symbol is the most significant tensor factor.
pub fn pauli_dense(p: &PauliString) -> Mat {
    p.to_string().chars().fold(vec![vec![C::new(1.0, 0.0)]], |acc, c| kron(&acc, &single(c)))
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Mat, v: &[C]) -> Vec<C> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn scale(a: &Mat, s: C) -> Mat {
    a.iter().map(|r| r.iter().map(|v| v * s).collect()).collect()
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, q)| r.iter().zip(q).map(|(x, y)| x + y).collect()).collect()
}

fn one_norm(a: &Mat) -> f64 {
    (0..a.len()).map(|j| a.iter().map(|r| r[j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// exp(A) by halving until the norm is below 1/2, a 30-term Taylor series,
/// then repeated squaring.
pub fn expm(a: &Mat) -> Mat {
    let mut squarings = 0;
    let mut norm = one_norm(a);
    while norm > 0.5 {
        norm /= 2.0;
        squarings += 1;
    }
    let a = scale(a, C::new(0.5f64.powi(squarings), 0.0));
    let n = a.len();
    let mut sum = eye(n);
    let mut term = eye(n);
    for k in 1..=30 {
        term = scale(&matmul(&term, &a), C::new(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

fn zero_state(dim: usize) -> Vec<C> {
    let mut v = vec![C::new(0.0, 0.0); dim];
    v[0] = C::new(1.0, 0.0);
    v
}

/// Product of dense exponentials exp(-i x_j t/s P_j), j ascending, s times.
pub fn trotter_oracle(x: &[f64], spec: &EncodingSpec) -> Vec<C> {
    let s = spec.steps();
    let mut step = eye(1usize << spec.qubits());
    for (xj, p) in x.iter().zip(spec.paulis()) {
        let theta = xj * spec.time() / f64::from(s);
        let u = expm(&scale(&pauli_dense(p), C::new(0.0, -theta)));
        step = matmul(&u, &step);
    }
    let mut psi = zero_state(1usize << spec.qubits());
    for _ in 0..s {
        psi = matvec(&step, &psi);
    }
    psi
}

/// exp(-i t sum_j x_j P_j)|0>.
pub fn exact_oracle(x: &[f64], spec: &EncodingSpec) -> Vec<C> {
    let mut h = zeros(1usize << spec.qubits());
    for (xj, p) in x.iter().zip(spec.paulis()) {
        h = add(&h, &scale(&pauli_dense(p), C::new(*xj, 0.0)));
    }
    matvec(&expm(&scale(&h, C::new(0.0, -spec.time()))), &zero_state(1usize << spec.qubits()))
}

pub fn max_abs_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn distance(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn random_spec(rng: &mut DetRng, qubits: usize, d: usize, t: f64, s: u32) -> EncodingSpec {
    let paulis = sample_pauli_strings(d, qubits, rng.next_u64()).unwrap();
    EncodingSpec::new(qubits, paulis, t, s).unwrap()
}

pub fn random_point(rng: &mut DetRng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.uniform(-1.5, 1.5)).collect()
}

pub fn linear_tag() -> KernelKind {
    KernelKind::Classical(ClassicalKernelParams::Linear)
}

/// Labels with both classes present.
pub fn random_labels(rng: &mut DetRng, m: usize) -> Vec<i8> {
    loop {
        let y: Vec<i8> = (0..m).map(|_| if rng.below(2) == 0 { 1 } else { -1 }).collect();
        if y.contains(&1) && y.contains(&-1) {
            return y;
        }
    }
}

/// Gram matrix of random low-rank features plus a small ridge.
pub fn random_psd(rng: &mut DetRng, m: usize) -> KernelMatrix {
    let r = 1 + rng.below(4) as usize;
    let feats: Vec<Vec<f64>> = (0..m).map(|_| (0..r).map(|_| rng.normal()).collect()).collect();
    let ridge = 0.05 * rng.unit();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let dot: f64 = feats[i].iter().zip(&feats[j]).map(|(a, b)| a * b).sum();
                    dot + if i == j { ridge } else { 0.0 }
                })
                .collect()
        })
        .collect();
    KernelMatrix::from_rows(&rows, linear_tag()).unwrap()
}

/// Projection onto {0 <= a <= c, y.a = 0}: a_i = clip(v_i - lambda y_i),
/// with lambda found by bisection on the monotone constraint residual.
fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |lambda: f64| -> Vec<f64> { v.iter().zip(y).map(|(vi, yi)| (vi - lambda * yi).clamp(0.0, c)).collect() };
    let residual = |lambda: f64| -> f64 { at(lambda).iter().zip(y).map(|(a, yi)| a * yi).sum() };
    let bound = v.iter().map(|x| x.abs()).fold(0.0, f64::max) + c + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// FISTA on `1/2 a^T Q a - sum a` over the box-and-hyperplane feasible set.
pub fn qp_oracle(kernel: &KernelMatrix, labels: &[i8], c: f64, iterations: usize) -> Vec<f64> {
    let m = labels.len();
    let y: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();
    let q: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| y[i] * y[j] * kernel.get(i, j)).collect()).collect();
    let lipschitz = q.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max).max(1e-12);
    let grad = |a: &[f64]| -> Vec<f64> { (0..m).map(|i| q[i].iter().zip(a).map(|(x, y)| x * y).sum::<f64>() - 1.0).collect() };
    let mut a = vec![0.0; m];
    let mut z = a.clone();
    let mut tk = 1.0f64;
    for _ in 0..iterations {
        let g = grad(&z);
        let step: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - gi / lipschitz).collect();
        let next = project(&step, &y, c);
        let tn = 0.5 * (1.0 + (1.0 + 4.0 * tk * tk).sqrt());
        let moved = next.iter().zip(&a).map(|(n, p)| (n - p).abs()).fold(0.0, f64::max);
        z = next.iter().zip(&a).map(|(n, p)| n + (tk - 1.0) / tn * (n - p)).collect();
        a = next;
        tk = tn;
        if moved < 1e-14 {
            break;
        }
    }
    a
}

/// Largest KKT violation of `(alphas, bias)` measured on margins `y f(x)`.
pub fn kkt_residual(kernel: &KernelMatrix, labels: &[i8], alphas: &[f64], bias: f64, c: f64) -> f64 {
    let m = labels.len();
    let eps = 1e-8 * c.min(1.0);
    let mut worst = 0.0f64;
    for i in 0..m {
        let f: f64 = (0..m).map(|j| alphas[j] * f64::from(labels[j]) * kernel.get(i, j)).sum::<f64>() + bias;
        let margin = f64::from(labels[i]) * f;
        let v = if alphas[i] <= eps {
            (1.0 - margin).max(0.0)
        } else if alphas[i] >= c - eps {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(v);
    }
    let balance: f64 = alphas.iter().zip(labels).map(|(a, &l)| a * f64::from(l)).sum();
    worst.max(balance.abs())
}

/// Smallest eigenvalue of a real symmetric matrix by cyclic Jacobi sweeps.
pub fn min_eigenvalue(m: &KernelMatrix) -> f64 {
    let n = m.rows();
    let mut a = m.to_rows();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}
