use log::warn;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{PqkError, Result};
use crate::kernel::{KernelSpec, Matrix, ResolvedKernel};

/// Curvature floor for non-positive-definite pairs.
const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoParams {
    /// Stop when the maximal KKT violation gap falls below `tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        SmoParams { tol: 1e-3, max_iter: 10_000_000 }
    }
}

/// Dual solution on a precomputed kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl DualSolution {
    /// `f(x_i) = Σ_j α_j y_j K_ij + b` for every training point.
    pub fn decision_values(&self, k: &Matrix, y: &[f64]) -> Vec<f64> {
        let coef: Vec<f64> = self.alpha.iter().zip(y).map(|(a, y)| a * y).collect();
        k.matvec(&coef).into_iter().map(|v| v + self.bias).collect()
    }
}

/// `½ αᵀQα − Σα` with `Q_ij = y_i y_j K_ij`.
pub fn dual_objective(k: &Matrix, y: &[f64], alpha: &[f64]) -> f64 {
    let coef: Vec<f64> = alpha.iter().zip(y).map(|(a, y)| a * y).collect();
    let kc = k.matvec(&coef);
    0.5 * coef.iter().zip(&kc).map(|(c, v)| c * v).sum::<f64>() - alpha.iter().sum::<f64>()
}

/// Largest KKT violation of a solution: `1 − y f` for `α = 0`, `y f − 1` for
/// `α = C`, `|y f − 1|` for free multipliers (all clipped at 0).
pub fn kkt_violation(k: &Matrix, y: &[f64], sol: &DualSolution, c: f64) -> f64 {
    let f = sol.decision_values(k, y);
    let mut worst = 0.0f64;
    for ((a, yi), fi) in sol.alpha.iter().zip(y).zip(f) {
        let m = yi * fi;
        let v = if *a <= 0.0 {
            1.0 - m
        } else if *a >= c {
            m - 1.0
        } else {
            (m - 1.0).abs()
        };
        worst = worst.max(v);
    }
    worst
}

/// Solves the C-SVC dual with second-order working-set selection.
pub fn solve_dual(k: &Matrix, y: &[f64], c: f64, params: &SmoParams) -> Result<DualSolution> {
    let n = y.len();
    if k.rows() != n || k.cols() != n {
        return Err(PqkError::Dimension(format!("{n} labels for a {}x{} kernel", k.rows(), k.cols())));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(PqkError::Config(format!("C must be positive, got {c}")));
    }
    if y.iter().any(|v| *v != 1.0 && *v != -1.0) {
        return Err(PqkError::Data("labels must be +1/-1".into()));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(PqkError::Data("training data contains a single label".into()));
    }
    if k.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(PqkError::Numerical("kernel contains non-finite values".into()));
    }

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let diag: Vec<f64> = (0..n).map(|i| k[(i, i)]).collect();
    let is_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let is_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iter {
        // i: maximal violating index in I_up
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            if is_up(alpha[t], y[t]) {
                let v = -y[t] * grad[t];
                if v >= gmax {
                    gmax = v;
                    i = t;
                }
            }
        }
        // j: second-order choice in I_low
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut best = f64::INFINITY;
        for t in 0..n {
            if !is_low(alpha[t], y[t]) {
                continue;
            }
            let v = y[t] * grad[t];
            gmax2 = gmax2.max(v);
            if i == usize::MAX {
                continue;
            }
            let diff = gmax + v;
            if diff > 0.0 {
                let quad = diag[i] + diag[t] - 2.0 * k[(i, t)];
                let quad = if quad > 0.0 { quad } else { TAU };
                let obj = -diff * diff / quad;
                if obj <= best {
                    best = obj;
                    j = t;
                }
            }
        }
        if gmax + gmax2 < params.tol || j == usize::MAX {
            converged = true;
            break;
        }
        iterations += 1;

        let (ai_old, aj_old) = (alpha[i], alpha[j]);
        let kij = k[(i, j)];
        if y[i] != y[j] {
            let quad = diag[i] + diag[j] + 2.0 * y[i] * y[j] * kij;
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = diag[i] + diag[j] - 2.0 * kij;
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (dai, daj) = (alpha[i] - ai_old, alpha[j] - aj_old);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k[(i, t)] * dai + y[j] * k[(j, t)] * daj);
        }
    }
    if !converged {
        warn!("SMO stopped after {iterations} iterations without reaching tol {}", params.tol);
    }

    // bias from free multipliers, else midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 { ub = ub.min(yg) } else { lb = lb.max(yg) }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 { ub = ub.min(yg) } else { lb = lb.max(yg) }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 { sum_free / n_free as f64 } else { (ub + lb) / 2.0 };

    Ok(DualSolution { alpha, bias: -rho, iterations, converged })
}

/// Trained classifier. Support vectors are stored with their training indices
/// so the model is usable without the training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub spec: KernelSpec,
    pub kernel: ResolvedKernel,
    pub c: f64,
    pub support_indices: Vec<usize>,
    pub support_vectors: Vec<Vec<f64>>,
    /// `α_i · y_i` per support vector.
    pub dual_coef: Vec<f64>,
    pub bias: f64,
    pub n_features: usize,
    pub training_hash: String,
    pub converged: bool,
}

impl SvmModel {
    pub fn decision_function(&self, x: &[Vec<f64>]) -> Result<Vec<f64>> {
        if let Some(r) = x.iter().find(|r| r.len() != self.n_features) {
            return Err(PqkError::Dimension(format!(
                "model expects {} features, got {}",
                self.n_features,
                r.len()
            )));
        }
        let kx = self.kernel.cross(x, &self.support_vectors)?;
        Ok(kx
            .iter()
            .map(|row| row.iter().zip(&self.dual_coef).map(|(k, a)| k * a).sum::<f64>() + self.bias)
            .collect())
    }
}

pub fn training_hash(x: &[Vec<f64>], y: &[f64]) -> String {
    let mut h = Sha256::new();
    for row in x {
        for v in row {
            h.update(v.to_le_bytes());
        }
        h.update([0xfe]);
    }
    for v in y {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn smo_train(x: &[Vec<f64>], y: &[f64], spec: &KernelSpec, c: f64, params: &SmoParams) -> Result<SvmModel> {
    if x.len() < 2 || x.len() != y.len() {
        return Err(PqkError::Data(format!("need >= 2 samples with labels, got {} rows / {} labels", x.len(), y.len())));
    }
    let kernel = spec.resolve(x)?;
    let gram = kernel.gram(x)?;
    let sol = solve_dual(gram.matrix(), y, c, params)?;

    let support_indices: Vec<usize> = (0..x.len()).filter(|&i| sol.alpha[i] > 0.0).collect();
    let eq: f64 = sol.alpha.iter().zip(y).map(|(a, y)| a * y).sum();
    debug_assert!(sol.alpha.iter().all(|a| (0.0..=c).contains(a)));
    debug_assert!(eq.abs() < 1e-6 * c.max(1.0), "Σ α_i y_i = {eq}");

    Ok(SvmModel {
        spec: *spec,
        kernel,
        c,
        support_vectors: support_indices.iter().map(|&i| x[i].clone()).collect(),
        dual_coef: support_indices.iter().map(|&i| sol.alpha[i] * y[i]).collect(),
        support_indices,
        bias: sol.bias,
        n_features: x[0].len(),
        training_hash: training_hash(x, y),
        converged: sol.converged,
    })
}

/// `sign(f(x))`, with exact zeros mapped to `+1`.
pub fn predict(m: &SvmModel, x: &[Vec<f64>]) -> Result<Vec<f64>> {
    Ok(m.decision_function(x)?
        .into_iter()
        .map(|f| if f >= 0.0 { 1.0 } else { -1.0 })
        .collect())
}
