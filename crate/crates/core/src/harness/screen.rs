use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PqkError, Result};
use crate::kernel::{geometric_difference, kernel_matrix, model_complexity, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `g_cq` well below `√N`: the projected kernel offers no geometric separation.
    NoSeparation,
    /// Separated geometry, but the projected kernel is not simpler on these labels.
    NoComplexityGain,
    /// Separated geometry and `s_q < s_c`.
    PotentialAdvantage,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoSeparation => "no separation: g_cq is well below sqrt(N), PQK is unlikely to help",
            Verdict::NoComplexityGain => "separation without complexity gain: g_cq ~ sqrt(N) but s_q >= s_c",
            Verdict::PotentialAdvantage => "potential for PQK to outperform: g_cq ~ sqrt(N) and s_q < s_c",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreeningPoint {
    pub lambda: f64,
    pub g_cq: f64,
    pub s_c: f64,
    pub s_q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningReport {
    pub n: usize,
    pub sqrt_n: f64,
    pub kernel: KernelSpec,
    pub lambda: f64,
    pub g_cq: f64,
    pub s_c: f64,
    pub s_q: f64,
    pub verdict: Verdict,
    pub sweep: Vec<ScreeningPoint>,
}

impl fmt::Display for ScreeningReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N = {}, sqrt(N) = {:.3}, lambda = {}", self.n, self.sqrt_n, self.lambda)?;
        writeln!(f, "g_cq = {:.3}", self.g_cq)?;
        writeln!(f, "s_c = {:.3}, s_q = {:.3}", self.s_c, self.s_q)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        if !self.sweep.is_empty() {
            writeln!(f, "{:>10} {:>10} {:>10} {:>10}", "lambda", "g_cq", "s_c", "s_q")?;
            for p in &self.sweep {
                writeln!(f, "{:>10} {:>10.4} {:>10.4} {:>10.4}", p.lambda, p.g_cq, p.s_c, p.s_q)?;
            }
        }
        Ok(())
    }
}

/// `g_cq ≥ √N / 2` counts as comparable to `√N`.
pub fn verdict(n: usize, g_cq: f64, s_c: f64, s_q: f64) -> Verdict {
    if g_cq < 0.5 * (n as f64).sqrt() {
        Verdict::NoSeparation
    } else if s_q < s_c {
        Verdict::PotentialAdvantage
    } else {
        Verdict::NoComplexityGain
    }
}

/// Screening metrics of the classical (`x_c`) and projected (`x_q`) feature
/// sets under the same kernel family.
pub fn screen_advantage(
    x_c: &[Vec<f64>],
    x_q: &[Vec<f64>],
    y: &[f64],
    kernel: &KernelSpec,
    lambda: f64,
    sweep: &[f64],
) -> Result<ScreeningReport> {
    if x_c.len() != x_q.len() || x_c.len() != y.len() {
        return Err(PqkError::Dimension(format!(
            "{} classical rows, {} projected rows, {} labels",
            x_c.len(),
            x_q.len(),
            y.len()
        )));
    }
    let kc = kernel_matrix(x_c, kernel)?;
    let kq = kernel_matrix(x_q, kernel)?;
    let point = |l: f64| -> Result<ScreeningPoint> {
        Ok(ScreeningPoint {
            lambda: l,
            g_cq: geometric_difference(&kc, &kq, l)?,
            s_c: model_complexity(&kc, y, l)?,
            s_q: model_complexity(&kq, y, l)?,
        })
    };
    let main = point(lambda)?;
    let sweep = sweep.iter().map(|&l| point(l)).collect::<Result<Vec<_>>>()?;
    let n = y.len();
    Ok(ScreeningReport {
        n,
        sqrt_n: (n as f64).sqrt(),
        kernel: *kernel,
        lambda,
        g_cq: main.g_cq,
        s_c: main.s_c,
        s_q: main.s_q,
        verdict: verdict(n, main.g_cq, main.s_c, main.s_q),
        sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Gamma;

    #[test]
    fn identical_features_show_no_separation() {
        let x: Vec<Vec<f64>> = (0..16).map(|i| vec![(i as f64).sin(), (i as f64 * 0.3).cos()]).collect();
        let y: Vec<f64> = (0..16).map(|i| if i % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let r = screen_advantage(&x, &x, &y, &KernelSpec::rbf(Gamma::Scale), 1.0, &[0.1, 1.0, 10.0]).unwrap();
        assert!(r.g_cq <= 1.0 + 1e-9);
        assert_eq!(r.verdict, Verdict::NoSeparation);
        assert!((r.s_c - r.s_q).abs() < 1e-12);
        for w in r.sweep.windows(2) {
            assert!(w[1].g_cq <= w[0].g_cq + 1e-12);
        }
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(verdict(172, 15.777, 6.090, 1.527), Verdict::PotentialAdvantage);
        assert_eq!(verdict(172, 15.777, 1.0, 2.0), Verdict::NoComplexityGain);
        assert_eq!(verdict(172, 1.0, 6.0, 1.0), Verdict::NoSeparation);
    }
}
