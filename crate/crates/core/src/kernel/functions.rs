use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg::{check_symmetric, Matrix};
use crate::error::{PqkError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    Poly,
    Rbf,
    Sigmoid,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [KernelKind::Linear, KernelKind::Poly, KernelKind::Rbf, KernelKind::Sigmoid];

    pub fn uses_gamma(self) -> bool {
        self != KernelKind::Linear
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelKind::Linear => "linear",
            KernelKind::Poly => "poly",
            KernelKind::Rbf => "rbf",
            KernelKind::Sigmoid => "sigmoid",
        })
    }
}

impl FromStr for KernelKind {
    type Err = PqkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "linear" => Ok(KernelKind::Linear),
            "poly" => Ok(KernelKind::Poly),
            "rbf" => Ok(KernelKind::Rbf),
            "sigmoid" => Ok(KernelKind::Sigmoid),
            other => Err(PqkError::Config(format!("unknown kernel `{other}`"))),
        }
    }
}

/// Kernel width. `Scale` resolves to `1/(d·Var(X))`, `Auto` to `1/d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GammaRepr", into = "GammaRepr")]
pub enum Gamma {
    Auto,
    Scale,
    Value(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GammaRepr {
    Num(f64),
    Name(String),
}

impl From<Gamma> for GammaRepr {
    fn from(g: Gamma) -> Self {
        match g {
            Gamma::Value(v) => GammaRepr::Num(v),
            other => GammaRepr::Name(other.to_string()),
        }
    }
}

impl TryFrom<GammaRepr> for Gamma {
    type Error = PqkError;

    fn try_from(r: GammaRepr) -> Result<Self> {
        match r {
            GammaRepr::Num(v) => Gamma::value(v),
            GammaRepr::Name(s) => s.parse(),
        }
    }
}

impl Gamma {
    pub fn value(v: f64) -> Result<Self> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(PqkError::Config(format!("gamma must be positive, got {v}")));
        }
        Ok(Gamma::Value(v))
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Auto => f.write_str("auto"),
            Gamma::Scale => f.write_str("scale"),
            Gamma::Value(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Gamma {
    type Err = PqkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(Gamma::Auto),
            "scale" => Ok(Gamma::Scale),
            t => t
                .parse::<f64>()
                .map_err(|_| PqkError::Config(format!("bad gamma `{t}`")))
                .and_then(Gamma::value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub gamma: Gamma,
    pub degree: u32,
    pub coef0: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, gamma: Gamma) -> Self {
        KernelSpec { kind, gamma, degree: 3, coef0: 0.0 }
    }

    pub fn linear() -> Self {
        Self::new(KernelKind::Linear, Gamma::Scale)
    }

    pub fn rbf(gamma: Gamma) -> Self {
        Self::new(KernelKind::Rbf, gamma)
    }

    /// Fixes `gamma` against the data the kernel is fitted on.
    pub fn resolve(&self, x: &[Vec<f64>]) -> Result<ResolvedKernel> {
        if self.degree == 0 {
            return Err(PqkError::Config("polynomial degree must be >= 1".into()));
        }
        let d = x.first().map_or(0, Vec::len);
        let gamma = match self.gamma {
            Gamma::Value(v) => v,
            Gamma::Auto => 1.0 / d.max(1) as f64,
            Gamma::Scale => {
                let count = (x.len() * d) as f64;
                let mean = x.iter().flatten().sum::<f64>() / count;
                let var = x.iter().flatten().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count;
                if var > 0.0 && var.is_finite() {
                    1.0 / (d as f64 * var)
                } else {
                    1.0
                }
            }
        };
        Ok(ResolvedKernel { kind: self.kind, gamma, degree: self.degree, coef0: self.coef0 })
    }
}

/// A kernel with numeric `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedKernel {
    pub kind: KernelKind,
    pub gamma: f64,
    pub degree: u32,
    pub coef0: f64,
}

impl ResolvedKernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        let dot = || a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        match self.kind {
            KernelKind::Linear => dot(),
            KernelKind::Rbf => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-self.gamma * d2).exp()
            }
            KernelKind::Poly => (self.gamma * dot() + self.coef0).powi(self.degree as i32),
            KernelKind::Sigmoid => (self.gamma * dot() + self.coef0).tanh(),
        }
    }

    /// Gram matrix, rows assembled in parallel.
    pub fn gram(&self, x: &[Vec<f64>]) -> Result<KernelMatrix> {
        let n = x.len();
        let rows: Vec<Vec<f64>> = x
            .par_iter()
            .map(|xi| x.iter().map(|xj| self.eval(xi, xj)).collect())
            .collect();
        let m = Matrix::from_rows(&rows)?;
        if m.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(PqkError::Numerical(format!("{} kernel produced non-finite entries", self.kind)));
        }
        debug_assert_eq!(m.rows(), n);
        KernelMatrix::new(m)
    }

    /// Rectangular kernel `K[i][j] = k(a_i, b_j)`.
    pub fn cross(&self, a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let out: Vec<Vec<f64>> = a
            .par_iter()
            .map(|ai| b.iter().map(|bj| self.eval(ai, bj)).collect())
            .collect();
        if out.iter().flatten().any(|v| !v.is_finite()) {
            return Err(PqkError::Numerical(format!("{} kernel produced non-finite entries", self.kind)));
        }
        Ok(out)
    }
}

/// Symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix(Matrix);

impl KernelMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        check_symmetric(&m, "kernel matrix")?;
        Ok(KernelMatrix(m))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn select(&self, idx: &[usize]) -> KernelMatrix {
        KernelMatrix(self.0.select(idx))
    }
}

pub fn kernel_matrix(x: &[Vec<f64>], spec: &KernelSpec) -> Result<KernelMatrix> {
    if x.is_empty() {
        return Err(PqkError::Dimension("kernel matrix needs at least one row".into()));
    }
    spec.resolve(x)?.gram(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rbf_diagonal_is_one() {
        let x = vec![vec![0.3, -1.0, 2.0], vec![5.0, 0.0, 0.0]];
        let k = kernel_matrix(&x, &KernelSpec::rbf(Gamma::Value(0.7))).unwrap();
        assert_eq!(k.get(0, 0), 1.0);
        assert_eq!(k.get(1, 1), 1.0);
    }

    #[test]
    fn linear_orthogonal() {
        let x = vec![vec![1.0, 0.0], vec![0.0, 2.0]];
        let k = kernel_matrix(&x, &KernelSpec::linear()).unwrap();
        assert_eq!(k.get(0, 1), 0.0);
        assert_eq!(k.get(1, 1), 4.0);
    }

    #[test]
    fn rbf_matches_pairwise_scalar_evaluation() {
        let x = vec![vec![0.0, 1.0], vec![1.0, 1.0], vec![-0.5, 2.0]];
        let k = kernel_matrix(&x, &KernelSpec::rbf(Gamma::Value(1.0))).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d2 = (x[i][0] - x[j][0]).powi(2) + (x[i][1] - x[j][1]).powi(2);
                assert!((k.get(i, j) - (-d2).exp()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gamma_conventions() {
        let x = vec![vec![0.0, 1.0], vec![1.0, 1.0]];
        // entries {0,1,1,1}: mean 0.75, var 0.1875
        let r = KernelSpec::rbf(Gamma::Scale).resolve(&x).unwrap();
        assert!((r.gamma - 1.0 / (2.0 * 0.1875)).abs() < 1e-15);
        assert_eq!(KernelSpec::rbf(Gamma::Auto).resolve(&x).unwrap().gamma, 0.5);
        let constant = vec![vec![1.0, 1.0]; 3];
        assert_eq!(KernelSpec::rbf(Gamma::Scale).resolve(&constant).unwrap().gamma, 1.0);
    }

    #[test]
    fn poly_and_sigmoid() {
        let mut spec = KernelSpec::new(KernelKind::Poly, Gamma::Value(0.5));
        spec.coef0 = 1.0;
        spec.degree = 2;
        let r = spec.resolve(&[vec![1.0, 2.0]]).unwrap();
        assert_eq!(r.eval(&[1.0, 2.0], &[3.0, 1.0]), (0.5 * 5.0 + 1.0f64).powi(2));
        let s = KernelSpec::new(KernelKind::Sigmoid, Gamma::Value(0.1)).resolve(&[vec![1.0]]).unwrap();
        assert!((s.eval(&[2.0], &[3.0]) - 0.6f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn non_finite_is_an_error() {
        let x = vec![vec![1e200], vec![1e200]];
        assert!(kernel_matrix(&x, &KernelSpec::linear()).is_err());
        assert!(kernel_matrix(&[], &KernelSpec::linear()).is_err());
    }

    #[test]
    fn gamma_parse_and_serde() {
        assert_eq!("scale".parse::<Gamma>().unwrap(), Gamma::Scale);
        assert_eq!("0.25".parse::<Gamma>().unwrap(), Gamma::Value(0.25));
        assert!("-1".parse::<Gamma>().is_err());
        let j = serde_json::to_string(&[Gamma::Auto, Gamma::Value(2.5)]).unwrap();
        assert_eq!(j, r#"["auto",2.5]"#);
        let back: Vec<Gamma> = serde_json::from_str(&j).unwrap();
        assert_eq!(back, vec![Gamma::Auto, Gamma::Value(2.5)]);
    }
}
