//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;

use pqk::kernel::Matrix;

pub fn to_dense(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn random_psd<R: Rng>(rng: &mut R, n: usize, rank: usize) -> Matrix {
    let a = DMatrix::from_fn(n, rank, |_, _| rng.random_range(-1.0..1.0));
    let k = &a * a.transpose();
    Matrix::from_fn(n, n, |i, j| k[(i, j)])
}

fn sym_sqrt(a: &DMatrix<f64>) -> DMatrix<f64> {
    let e = a.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|v| v.max(0.0).sqrt()));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

fn normalized(m: &Matrix) -> DMatrix<f64> {
    let d = to_dense(m);
    let n = d.nrows() as f64;
    &d * (n / d.trace())
}

/// Geometric difference by explicit inverse.
pub fn geometric_difference_dense(kc: &Matrix, kq: &Matrix, lambda: f64) -> f64 {
    let kc = normalized(kc);
    let kq = normalized(kq);
    let n = kc.nrows();
    let inv = (&kc + DMatrix::identity(n, n) * lambda).try_inverse().expect("invertible");
    let sc = sym_sqrt(&kc);
    let sq = sym_sqrt(&kq);
    let m = &sq * &sc * &inv * &inv * &sc * &sq;
    let m = (&m + m.transpose()) * 0.5;
    m.symmetric_eigen().eigenvalues.max().max(0.0).sqrt()
}

/// Model complexity by explicit inverse.
pub fn model_complexity_dense(k: &Matrix, y: &[f64], lambda: f64) -> f64 {
    let k = normalized(k);
    let n = k.nrows();
    let inv = (&k + DMatrix::identity(n, n) * lambda).try_inverse().expect("invertible");
    let y = nalgebra::DVector::from_column_slice(y);
    let a = &inv * &y;
    let reg = lambda * lambda * a.dot(&a) / n as f64;
    let fit = a.dot(&(&k * &a)) / n as f64;
    reg.max(0.0).sqrt() + fit.max(0.0).sqrt()
}

/// Euclidean projection onto `{0 ≤ α ≤ C, yᵀα = 0}` by bisection on the
/// multiplier of the equality constraint.
fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |mu: f64| -> Vec<f64> { v.iter().zip(y).map(|(vi, yi)| (vi - mu * yi).clamp(0.0, c)).collect() };
    let h = |mu: f64| -> f64 { at(mu).iter().zip(y).map(|(a, yi)| a * yi).sum() };
    let bound = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Accelerated projected gradient on the SVM dual; returns the minimum
/// objective `½αᵀQα − Σα` found.
pub fn qp_oracle(k: &Matrix, y: &[f64], c: f64, iters: usize) -> f64 {
    qp_oracle_from(k, y, c, iters, &vec![0.0; y.len()])
}

/// Accelerated projected gradient on the box-and-equality dual, started from
/// the projection of `start`; returns the lowest objective visited.
pub fn qp_oracle_from(k: &Matrix, y: &[f64], c: f64, iters: usize, start: &[f64]) -> f64 {
    let n = y.len();
    let q = DMatrix::from_fn(n, n, |i, j| y[i] * y[j] * k[(i, j)]);
    let lip = q.clone().symmetric_eigen().eigenvalues.iter().fold(1e-12f64, |m, v| m.max(v.abs()));
    let step = 1.0 / lip;
    let obj = |a: &[f64]| {
        let av = nalgebra::DVector::from_column_slice(a);
        0.5 * av.dot(&(&q * &av)) - a.iter().sum::<f64>()
    };
    let mut x = project(start, y, c);
    let mut z = x.clone();
    let mut t = 1.0f64;
    let mut best = obj(&x);
    for _ in 0..iters {
        let zv = nalgebra::DVector::from_column_slice(&z);
        let g = &q * &zv;
        let v: Vec<f64> = (0..n).map(|i| z[i] - step * (g[i] - 1.0)).collect();
        let xn = project(&v, y, c);
        let tn = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        z = (0..n).map(|i| xn[i] + (t - 1.0) / tn * (xn[i] - x[i])).collect();
        x = xn;
        t = tn;
        best = best.min(obj(&x));
    }
    best
}

/// Best of the zero start and `starts` random feasible starts.
pub fn qp_oracle_multistart<R: rand::Rng>(k: &Matrix, y: &[f64], c: f64, iters: usize, starts: usize, rng: &mut R) -> f64 {
    (0..starts).fold(qp_oracle(k, y, c, iters), |best, _| {
        let s: Vec<f64> = y.iter().map(|_| rng.random_range(0.0..=c)).collect();
        best.min(qp_oracle_from(k, y, c, iters, &s))
    })
}

fn binom(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Two-sided Fisher p by enumerating every table with the observed margins,
/// using exact integer binomials.
pub fn fisher_enumerate(t: [[u64; 2]; 2]) -> f64 {
    let r1 = t[0][0] + t[0][1];
    let r2 = t[1][0] + t[1][1];
    let c1 = t[0][0] + t[1][0];
    let n = r1 + r2;
    if n == 0 {
        return 1.0;
    }
    let weight = |a: u64| binom(r1, a) * binom(r2, c1 - a);
    let lo = c1.saturating_sub(r2);
    let hi = c1.min(r1);
    let obs = weight(t[0][0]);
    let total: u128 = (lo..=hi).map(weight).sum();
    let tail: u128 = (lo..=hi).map(weight).filter(|w| *w <= obs).sum();
    tail as f64 / total as f64
}
