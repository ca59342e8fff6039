//! Kernel-geometry screening metrics: geometric difference between a
//! classical and a projected kernel, and label-dependent model complexity.
//!
//! Both metrics evaluate trace-normalized kernels (`tr K = N`) so that kernels
//! of different scale are comparable.

use super::functions::KernelMatrix;
use super::linalg::{jacobi_eigen, psd_sqrt, Matrix};
use crate::error::{PqkError, Result};

pub fn trace_normalize(k: &KernelMatrix) -> Result<Matrix> {
    let n = k.n() as f64;
    let tr = k.matrix().trace();
    if !(tr > 0.0 && tr.is_finite()) {
        return Err(PqkError::Numerical(format!("kernel trace {tr} cannot be normalized")));
    }
    Ok(k.matrix().scale(n / tr))
}

fn singular_tol(values: &[f64]) -> f64 {
    1e-12 * values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

/// `g = sqrt(‖√Kq √Kc (Kc + λI)⁻² √Kc √Kq‖)` with the spectral norm.
pub fn geometric_difference(kc: &KernelMatrix, kq: &KernelMatrix, lambda: f64) -> Result<f64> {
    if kc.n() != kq.n() {
        return Err(PqkError::Dimension(format!("kernels are {}x{} and {}x{}", kc.n(), kc.n(), kq.n(), kq.n())));
    }
    if !(lambda >= 0.0) {
        return Err(PqkError::Config(format!("lambda {lambda} must be >= 0")));
    }
    let kc = trace_normalize(kc)?;
    let kq = trace_normalize(kq)?;

    let eig_c = jacobi_eigen(&kc)?;
    let clipped: Vec<f64> = eig_c.values.iter().map(|v| v.max(0.0)).collect();
    let tol = singular_tol(&clipped);
    if clipped.iter().any(|s| s + lambda <= tol) {
        return Err(PqkError::Singular(format!("Kc + {lambda}·I is singular")));
    }
    // √Kc (Kc + λI)⁻² √Kc shares Kc's eigenvectors
    let middle = eig_c.reconstruct(|s| {
        let s = s.max(0.0);
        s / ((s + lambda) * (s + lambda))
    });
    let sq = psd_sqrt(&kq)?;
    let m = (&(&sq * &middle) * &sq).symmetrized();
    let top = jacobi_eigen(&m)?.max_value();
    Ok(top.max(0.0).sqrt())
}

/// `s = sqrt(λ² yᵀ(K+λI)⁻²y / N) + sqrt(yᵀ(K+λI)⁻¹K(K+λI)⁻¹y / N)`.
pub fn model_complexity(k: &KernelMatrix, y: &[f64], lambda: f64) -> Result<f64> {
    let n = k.n();
    if y.len() != n {
        return Err(PqkError::Dimension(format!("{} labels for a {n}x{n} kernel", y.len())));
    }
    if !(lambda >= 0.0) {
        return Err(PqkError::Config(format!("lambda {lambda} must be >= 0")));
    }
    let k = trace_normalize(k)?;
    let eig = jacobi_eigen(&k)?;
    let tol = singular_tol(&eig.values);
    if eig.values.iter().any(|s| (s + lambda).abs() <= tol) {
        return Err(PqkError::Singular(format!("K + {lambda}·I is singular")));
    }
    // project y onto the eigenbasis: u = Vᵀy
    let u: Vec<f64> = (0..n)
        .map(|c| (0..n).map(|r| eig.vectors[(r, c)] * y[r]).sum())
        .collect();
    let (mut reg, mut fit) = (0.0, 0.0);
    for (s, ui) in eig.values.iter().zip(&u) {
        let d = (s + lambda) * (s + lambda);
        reg += ui * ui / d;
        fit += s * ui * ui / d;
    }
    let nf = n as f64;
    Ok((lambda * lambda * reg / nf).max(0.0).sqrt() + (fit / nf).max(0.0).sqrt())
}
