use std::io::Write;

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::f1::weighted_f1;
use super::smo::{solve_dual, SmoParams};
use crate::error::{PqkError, Result};
use crate::kernel::{Gamma, KernelKind, KernelSpec, Matrix, ResolvedKernel};

pub const FULL_C_COUNT: usize = 87;
pub const FULL_GAMMA_COUNT: usize = 77;

/// Hyperparameter grid, enumerated kernel-major, then C, then gamma.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub kernels: Vec<KernelKind>,
    pub c: Vec<f64>,
    pub gamma: Vec<Gamma>,
}

/// `0.25·k` for `k = 1..=59` and `k/100` for `k = 1..=10`, built from integers.
fn quarter_steps() -> impl Iterator<Item = f64> {
    (1..=59).map(|k| k as f64 * 0.25)
}

fn hundredths() -> impl Iterator<Item = f64> {
    (1..=10).map(|k| k as f64 / 100.0)
}

impl Grid {
    pub fn new(kernels: Vec<KernelKind>, c: Vec<f64>, gamma: Vec<Gamma>) -> Result<Self> {
        if kernels.is_empty() || c.is_empty() || gamma.is_empty() {
            return Err(PqkError::Config("empty hyperparameter grid".into()));
        }
        if let Some(bad) = c.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(PqkError::Config(format!("C must be positive, got {bad}")));
        }
        Ok(Grid { kernels, c, gamma })
    }

    pub fn full() -> Self {
        let c: Vec<f64> = [1, 5, 7, 10]
            .into_iter()
            .map(|m| m as f64 / 1000.0)
            .chain(hundredths())
            .chain(quarter_steps())
            .chain([20, 50, 100, 200, 500, 700, 1000, 1100, 1200, 1300, 1400, 1500, 1700, 2000].map(f64::from))
            .collect();
        let gamma: Vec<Gamma> = [Gamma::Auto, Gamma::Scale]
            .into_iter()
            .chain([1, 5, 7].into_iter().map(|m| Gamma::Value(m as f64 / 1000.0)))
            .chain(hundredths().map(Gamma::Value))
            .chain(quarter_steps().map(Gamma::Value))
            .chain([20.0, 50.0, 100.0].map(Gamma::Value))
            .collect();
        Grid { kernels: KernelKind::ALL.to_vec(), c, gamma }
    }

    pub fn len(&self) -> usize {
        self.kernels.len() * self.c.len() * self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All candidates in grid order.
    pub fn candidates(&self) -> Vec<(KernelSpec, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for &k in &self.kernels {
            for &c in &self.c {
                for &g in &self.gamma {
                    out.push((KernelSpec::new(k, g), c));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub spec: KernelSpec,
    pub c: f64,
    /// Weighted F1 per validation fold; NaN if the fit failed.
    pub fold_scores: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation over folds.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub candidates: Vec<CandidateScore>,
    pub best: usize,
    pub seed: u64,
    pub n_folds: usize,
    /// Fold id of every training sample.
    pub fold_ids: Vec<usize>,
}

impl GridResult {
    pub fn best(&self) -> &CandidateScore {
        &self.candidates[self.best]
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["kernel".to_string(), "C".into(), "gamma".into(), "mean_f1".into(), "std_f1".into()];
        header.extend((0..self.n_folds).map(|f| format!("fold{f}")));
        header.push("chosen".into());
        out.write_record(&header)?;
        for (i, cand) in self.candidates.iter().enumerate() {
            let mut rec = vec![
                cand.spec.kind.to_string(),
                cand.c.to_string(),
                cand.spec.gamma.to_string(),
                cand.mean.to_string(),
                cand.std.to_string(),
            ];
            rec.extend(cand.fold_scores.iter().map(f64::to_string));
            rec.push((i == self.best).to_string());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Seeded stratified fold assignment. Labels are shuffled per class and dealt
/// round-robin, continuing the deal across classes.
pub fn stratified_folds(y: &[f64], folds: usize, seed: u64) -> Result<(Vec<usize>, usize)> {
    if folds < 2 {
        return Err(PqkError::Config(format!("need at least 2 folds, got {folds}")));
    }
    let mut classes: Vec<f64> = y.to_vec();
    classes.sort_by(f64::total_cmp);
    classes.dedup();
    let min_count = classes
        .iter()
        .map(|c| y.iter().filter(|v| *v == c).count())
        .min()
        .unwrap_or(0);
    let k = folds.min(min_count);
    if k < 2 {
        return Err(PqkError::Data(format!(
            "stratified CV impossible: smallest label has {min_count} members"
        )));
    }
    if k < folds {
        warn!("reducing CV folds from {folds} to {k}: smallest label has {min_count} members");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids = vec![0; y.len()];
    let mut next = 0;
    for c in &classes {
        let mut members: Vec<usize> = (0..y.len()).filter(|&i| y[i] == *c).collect();
        members.shuffle(&mut rng);
        for i in members {
            ids[i] = next % k;
            next += 1;
        }
    }
    Ok((ids, k))
}

struct Pairwise {
    dot: Matrix,
    dist2: Matrix,
}

impl Pairwise {
    fn new(x: &[Vec<f64>]) -> Self {
        let n = x.len();
        let dot = Matrix::from_fn(n, n, |i, j| x[i].iter().zip(&x[j]).map(|(a, b)| a * b).sum());
        let dist2 = Matrix::from_fn(n, n, |i, j| x[i].iter().zip(&x[j]).map(|(a, b)| (a - b) * (a - b)).sum());
        Pairwise { dot, dist2 }
    }

    fn k(&self, rk: &ResolvedKernel, i: usize, j: usize) -> f64 {
        let dot = self.dot[(i, j)];
        match rk.kind {
            KernelKind::Linear => dot,
            KernelKind::Rbf => (-rk.gamma * self.dist2[(i, j)]).exp(),
            KernelKind::Poly => (rk.gamma * dot + rk.coef0).powi(rk.degree as i32),
            KernelKind::Sigmoid => (rk.gamma * dot + rk.coef0).tanh(),
        }
    }
}

fn fold_score(
    x: &[Vec<f64>],
    y: &[f64],
    pw: &Pairwise,
    train: &[usize],
    valid: &[usize],
    spec: &KernelSpec,
    c: f64,
    params: &SmoParams,
) -> Result<f64> {
    let xt: Vec<Vec<f64>> = train.iter().map(|&i| x[i].clone()).collect();
    let rk = spec.resolve(&xt)?;
    let kt = Matrix::from_fn(train.len(), train.len(), |a, b| pw.k(&rk, train[a], train[b]));
    let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
    let sol = solve_dual(&kt, &yt, c, params)?;
    let coef: Vec<(usize, f64)> = train
        .iter()
        .zip(&sol.alpha)
        .zip(&yt)
        .filter(|((_, a), _)| **a > 0.0)
        .map(|((&i, a), yi)| (i, a * yi))
        .collect();
    let mut pred = Vec::with_capacity(valid.len());
    for &v in valid {
        let f: f64 = coef.iter().map(|&(i, a)| a * pw.k(&rk, v, i)).sum::<f64>() + sol.bias;
        if !f.is_finite() {
            return Err(PqkError::Numerical("non-finite decision value".into()));
        }
        pred.push(if f >= 0.0 { 1.0 } else { -1.0 });
    }
    let truth: Vec<f64> = valid.iter().map(|&i| y[i]).collect();
    weighted_f1(&truth, &pred)
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Stratified k-fold grid search scored by mean weighted F1.
pub fn grid_search(x: &[Vec<f64>], y: &[f64], grid: &Grid, folds: usize, seed: u64) -> Result<GridResult> {
    let (fold_ids, k) = stratified_folds(y, folds, seed)?;
    grid_search_with_folds(x, y, grid, &fold_ids, k, seed, &SmoParams::default())
}

/// Grid search on a fixed fold assignment.
pub fn grid_search_with_folds(
    x: &[Vec<f64>],
    y: &[f64],
    grid: &Grid,
    fold_ids: &[usize],
    n_folds: usize,
    seed: u64,
    params: &SmoParams,
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(PqkError::Config("empty hyperparameter grid".into()));
    }
    if x.len() != y.len() || fold_ids.len() != y.len() {
        return Err(PqkError::Dimension(format!(
            "{} rows, {} labels, {} fold ids",
            x.len(),
            y.len(),
            fold_ids.len()
        )));
    }
    let pw = Pairwise::new(x);
    let splits: Vec<(Vec<usize>, Vec<usize>)> = (0..n_folds)
        .map(|f| (0..y.len()).partition(|&i| fold_ids[i] != f))
        .collect();

    let candidates = grid.candidates();
    // linear fits ignore gamma: evaluate the first gamma per C and reuse it
    let first_gamma = grid.gamma[0];
    let unique: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].0.kind != KernelKind::Linear || candidates[i].0.gamma == first_gamma)
        .collect();
    let scored: Vec<Vec<f64>> = unique
        .par_iter()
        .map(|&i| {
            let (spec, c) = &candidates[i];
            splits
                .iter()
                .map(|(tr, va)| fold_score(x, y, &pw, tr, va, spec, *c, params).unwrap_or(f64::NAN))
                .collect()
        })
        .collect();

    let mut out = Vec::with_capacity(candidates.len());
    let mut u = 0;
    let mut last_linear: Option<Vec<f64>> = None;
    for (i, (spec, c)) in candidates.iter().enumerate() {
        let scores = if u < unique.len() && unique[u] == i {
            u += 1;
            let s = scored[u - 1].clone();
            if spec.kind == KernelKind::Linear {
                last_linear = Some(s.clone());
            }
            s
        } else {
            last_linear.clone().expect("linear candidate evaluated")
        };
        let (mean, std) = mean_std(&scores);
        out.push(CandidateScore { spec: *spec, c: *c, fold_scores: scores, mean, std });
    }

    let mut best: Option<usize> = None;
    for (i, cand) in out.iter().enumerate() {
        if cand.mean.is_nan() {
            continue;
        }
        if best.is_none_or(|b| cand.mean > out[b].mean) {
            best = Some(i);
        }
    }
    let best = best.ok_or_else(|| PqkError::Numerical("every grid candidate failed".into()))?;
    Ok(GridResult { candidates: out, best, seed, n_folds, fold_ids: fold_ids.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_grid_cardinality() {
        let g = Grid::full();
        assert_eq!(g.c.len(), FULL_C_COUNT);
        assert_eq!(g.gamma.len(), FULL_GAMMA_COUNT);
        assert_eq!(g.kernels.len(), 4);
        assert_eq!(g.c[13], 0.1);
        assert_eq!(g.c[14], 0.25);
        assert_eq!(g.c[72], 14.75);
        assert_eq!(*g.c.last().unwrap(), 2000.0);
        assert_eq!(g.gamma[1], Gamma::Scale);
        assert_eq!(g.gamma[73], Gamma::Value(14.75));
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(Grid::new(vec![], vec![1.0], vec![Gamma::Auto]).is_err());
        let g = Grid { kernels: vec![KernelKind::Linear], c: vec![], gamma: vec![Gamma::Auto] };
        assert!(grid_search(&vec![vec![0.0]; 4], &[1.0, 1.0, -1.0, -1.0], &g, 2, 0).is_err());
    }

    #[test]
    fn folds_are_stratified_and_reduced() {
        let y: Vec<f64> = (0..23).map(|i| if i % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let (ids, k) = stratified_folds(&y, 5, 9).unwrap();
        assert_eq!(k, 5);
        for f in 0..k {
            let pos = (0..y.len()).filter(|&i| ids[i] == f && y[i] > 0.0).count();
            assert!((1..=2).contains(&pos));
        }
        assert_eq!(stratified_folds(&y, 5, 9).unwrap().0, ids);
        let (_, k) = stratified_folds(&y, 20, 9).unwrap();
        assert_eq!(k, 8);
        assert!(stratified_folds(&[1.0, -1.0, -1.0], 3, 0).is_err());
    }

    fn blobs() -> (Vec<Vec<f64>>, Vec<f64>) {
        let x: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let s = if i < 10 { -1.0 } else { 1.0 };
                vec![s * 2.0 + (i as f64 * 0.7).sin() * 0.3, (i as f64 * 1.3).cos()]
            })
            .collect();
        let y = (0..20).map(|i| if i < 10 { -1.0 } else { 1.0 }).collect();
        (x, y)
    }

    #[test]
    fn single_candidate_is_chosen() {
        let (x, y) = blobs();
        let g = Grid::new(vec![KernelKind::Rbf], vec![1.0], vec![Gamma::Value(0.5)]).unwrap();
        let r = grid_search(&x, &y, &g, 5, 3).unwrap();
        assert_eq!(r.best, 0);
        assert_eq!(r.best().mean, 1.0);
    }

    #[test]
    fn ties_go_to_earliest_candidate() {
        let (x, y) = blobs();
        let g = Grid::new(vec![KernelKind::Linear, KernelKind::Rbf], vec![1.0, 10.0], vec![Gamma::Auto, Gamma::Scale]).unwrap();
        let r = grid_search(&x, &y, &g, 4, 1).unwrap();
        assert_eq!(r.candidates.len(), 8);
        assert_eq!(r.best, 0);
        assert_eq!(r.candidates[0].fold_scores, r.candidates[1].fold_scores);
        assert_eq!(r, grid_search(&x, &y, &g, 4, 1).unwrap());
    }

    #[test]
    fn dominating_candidate_wins() {
        // labels follow a circle: linear cannot separate, rbf can
        let x: Vec<Vec<f64>> = (0..24)
            .map(|i| {
                let t = i as f64 * 0.9;
                let r = if i % 2 == 0 { 0.5 } else { 2.0 };
                vec![r * t.cos(), r * t.sin()]
            })
            .collect();
        let y: Vec<f64> = (0..24).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let g = Grid::new(vec![KernelKind::Linear, KernelKind::Rbf], vec![10.0], vec![Gamma::Value(1.0)]).unwrap();
        let r = grid_search(&x, &y, &g, 4, 0).unwrap();
        for (a, b) in r.candidates[1].fold_scores.iter().zip(&r.candidates[0].fold_scores) {
            assert!(a > b);
        }
        assert_eq!(r.best, 1);
    }

    #[test]
    fn csv_has_one_row_per_candidate() {
        let (x, y) = blobs();
        let g = Grid::new(vec![KernelKind::Poly], vec![0.5, 1.0], vec![Gamma::Auto]).unwrap();
        let r = grid_search(&x, &y, &g, 3, 0).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("kernel,C,gamma,mean_f1,std_f1,fold0,fold1,fold2,chosen"));
    }
}
