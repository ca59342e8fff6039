use std::collections::BTreeMap;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, OrderMode, Seeds};
use super::screen::{screen_advantage, ScreeningReport};
use super::splits::{make_splits, Split, SplitPlan};
use crate::error::{PqkError, Result};
use crate::kernel::KernelSpec;
use crate::motif::{
    apply_permutation, correlation_order, decode_one_hot, encode_dataset, load_constructs, motif, Annotation,
    AnnotationAxis, Category, EncodedDataset,
};
use crate::sim::{project_rows, Backend, EmbeddingConfig, FeatureCache, RdmFeatureMatrix, StatevectorSimulator};
use crate::svm::{grid_search_with_folds, predict, smo_train, stratified_folds, weighted_f1, Grid, SmoParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Original,
    Pqk,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Original => "original",
            Method::Pqk => "pqk",
        }
    }
}

/// Hyperparameters picked by cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chosen {
    pub spec: KernelSpec,
    pub c: f64,
    pub cv_mean: f64,
    pub cv_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmOutcome {
    pub f1: f64,
    pub chosen: Chosen,
    /// Best test F1 over every grid candidate, when requested.
    pub test_best_f1: Option<f64>,
    /// Correctness per test sample, aligned with the split's test indices.
    pub correct: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitOutcome {
    pub index: usize,
    pub cv_seed: u64,
    pub n_folds: usize,
    pub original: ArmOutcome,
    pub pqk: ArmOutcome,
}

impl SplitOutcome {
    pub fn arm(&self, m: Method) -> &ArmOutcome {
        match m {
            Method::Original => &self.original,
            Method::Pqk => &self.pqk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmSummary {
    pub median: f64,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
}

impl ArmSummary {
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
        ArmSummary { median, max: v[n - 1], min: v[0], mean: v.iter().sum::<f64>() / n as f64 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub correct: u64,
    pub incorrect: u64,
}

impl Tally {
    fn add(&mut self, ok: bool) {
        if ok {
            self.correct += 1;
        } else {
            self.incorrect += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.correct + self.incorrect
    }
}

/// Outcome counts for one (position, annotation value) cell across all splits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountCell {
    /// 1-based slot position.
    pub position: usize,
    pub axis: AnnotationAxis,
    pub value: String,
    pub original: Tally,
    pub pqk: Tally,
}

impl CountCell {
    pub fn tally(&self, m: Method) -> Tally {
        match m {
            Method::Original => self.original,
            Method::Pqk => self.pqk,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: String,
    pub seeds: Seeds,
    pub n_samples: usize,
    pub n_qubits: usize,
    pub embedding: String,
    pub backend: String,
    pub order: OrderMode,
    pub grid_size: usize,
    pub feature_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub provenance: Provenance,
    pub plan: SplitPlan,
    pub splits: Vec<SplitOutcome>,
    pub original: ArmSummary,
    pub pqk: ArmSummary,
    pub counts: Vec<CountCell>,
}

impl EvalReport {
    pub fn summary(&self, m: Method) -> ArmSummary {
        match m {
            Method::Original => self.original,
            Method::Pqk => self.pqk,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn category_annotation(cat: Category, axis: AnnotationAxis) -> Annotation {
    match cat {
        Category::Empty => Annotation("Empty".into()),
        Category::Motif(id) => motif(id).annotation(axis),
    }
}

/// Column permutation applied before embedding.
pub fn feature_order(data: &EncodedDataset, mode: OrderMode) -> Vec<usize> {
    match mode {
        OrderMode::Natural => (0..data.width()).collect(),
        OrderMode::Correlation => correlation_order(&data.bit_rows()),
    }
}

/// Projected features of every sample, with columns reordered by `order`.
pub fn embed_dataset(
    data: &EncodedDataset,
    embedding: &EmbeddingConfig,
    backend: Backend,
    order: &[usize],
    sim: &StatevectorSimulator,
    cache: Option<&FeatureCache>,
) -> Result<RdmFeatureMatrix> {
    let rows = apply_permutation(&data.feature_matrix(), order);
    project_rows(&rows, embedding, backend, sim, cache)
}

fn select(x: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| x[i].clone()).collect()
}

#[allow(clippy::too_many_arguments)]
fn run_arm(
    x: &[Vec<f64>],
    y: &[f64],
    split: &Split,
    grid: &Grid,
    fold_ids: &[usize],
    n_folds: usize,
    cv_seed: u64,
    test_best: bool,
) -> Result<ArmOutcome> {
    let params = SmoParams::default();
    let (xt, yt) = (select(x, &split.train), split.train.iter().map(|&i| y[i]).collect::<Vec<_>>());
    let (xs, ys) = (select(x, &split.test), split.test.iter().map(|&i| y[i]).collect::<Vec<_>>());
    let gr = grid_search_with_folds(&xt, &yt, grid, fold_ids, n_folds, cv_seed, &params)?;
    let best = gr.best();
    let model = smo_train(&xt, &yt, &best.spec, best.c, &params)?;
    let pred = predict(&model, &xs)?;
    let f1 = weighted_f1(&ys, &pred)?;
    let test_best_f1 = if test_best {
        let scores: Vec<f64> = grid
            .candidates()
            .par_iter()
            .map(|(spec, c)| {
                smo_train(&xt, &yt, spec, *c, &params)
                    .and_then(|m| predict(&m, &xs))
                    .and_then(|p| weighted_f1(&ys, &p))
                    .unwrap_or(f64::NAN)
            })
            .collect();
        scores.into_iter().filter(|s| !s.is_nan()).reduce(f64::max)
    } else {
        None
    };
    Ok(ArmOutcome {
        f1,
        chosen: Chosen { spec: best.spec, c: best.c, cv_mean: best.mean, cv_std: best.std },
        test_best_f1,
        correct: pred.iter().zip(&ys).map(|(p, t)| p == t).collect(),
    })
}

fn tally_counts(data: &EncodedDataset, plan: &SplitPlan, outcomes: &[SplitOutcome]) -> Result<Vec<CountCell>> {
    let tags: Vec<Vec<Category>> = data.samples.iter().map(|s| decode_one_hot(&s.bits)).collect::<Result<_>>()?;
    let mut cells: BTreeMap<(usize, AnnotationAxis, Annotation), (Tally, Tally)> = BTreeMap::new();
    for (split, out) in plan.splits.iter().zip(outcomes) {
        for (k, &i) in split.test.iter().enumerate() {
            for (p, &cat) in tags[i].iter().enumerate() {
                for axis in AnnotationAxis::ALL {
                    let cell = cells.entry((p + 1, axis, category_annotation(cat, axis))).or_default();
                    cell.0.add(out.original.correct[k]);
                    cell.1.add(out.pqk.correct[k]);
                }
            }
        }
    }
    Ok(cells
        .into_iter()
        .map(|((position, axis, value), (original, pqk))| CountCell { position, axis, value: value.0, original, pqk })
        .collect())
}

/// Loads the dataset named in `cfg` and runs both arms on every split.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EvalReport> {
    cfg.validate()?;
    cfg.backend()?.check(cfg.n_qubits(), &cfg.simulator())?;
    let constructs = load_constructs(&cfg.data.path)?;
    let data = encode_dataset(&constructs, cfg.data.n_positions)?;
    run_on_dataset(&data, cfg)
}

/// Runs the original-feature arm and the projected-feature arm on identical
/// splits and identical CV folds.
pub fn run_on_dataset(data: &EncodedDataset, cfg: &ExperimentConfig) -> Result<EvalReport> {
    cfg.validate()?;
    if data.n_positions != cfg.data.n_positions || data.width() != cfg.encoding_width() {
        return Err(PqkError::Config(format!(
            "dataset has width {} but the config expects {}",
            data.width(),
            cfg.encoding_width()
        )));
    }
    let backend = cfg.backend()?;
    let embedding = cfg.embedding_config();
    let sim = cfg.simulator();
    let n_qubits = embedding.n_qubits(data.width());
    backend.check(n_qubits, &sim)?;
    let grid = cfg.grid.build()?;
    let plan = make_splits(data.len(), cfg.run.n_splits, cfg.run.train_frac, cfg.seeds.split)?;

    let order = feature_order(data, cfg.run.order);
    let cache = cfg.run.cache_dir.as_ref().map(FeatureCache::new).transpose()?;
    info!("projecting {} samples on {n_qubits} qubits with {backend}", data.len());
    let pqk = embed_dataset(data, &embedding, backend, &order, &sim, cache.as_ref())?;
    let original = data.feature_matrix();
    let y = data.labels();

    let outcomes: Vec<SplitOutcome> = plan
        .splits
        .par_iter()
        .enumerate()
        .map(|(index, split)| {
            let yt: Vec<f64> = split.train.iter().map(|&i| y[i]).collect();
            let cv_seed = cfg.seeds.cv.wrapping_add(index as u64);
            let (fold_ids, n_folds) = stratified_folds(&yt, cfg.run.folds, cv_seed)?;
            info!("split {index}: grid of {} candidates x {n_folds} folds", grid.len());
            let run = |x: &[Vec<f64>]| run_arm(x, &y, split, &grid, &fold_ids, n_folds, cv_seed, cfg.run.test_best);
            Ok(SplitOutcome { index, cv_seed, n_folds, original: run(&original)?, pqk: run(&pqk.rows)? })
        })
        .collect::<Result<_>>()?;

    let f1 = |m: Method| outcomes.iter().map(|o| o.arm(m).f1).collect::<Vec<_>>();
    let counts = tally_counts(data, &plan, &outcomes)?;
    Ok(EvalReport {
        provenance: Provenance {
            config_hash: cfg.hash(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seeds: cfg.seeds,
            n_samples: data.len(),
            n_qubits,
            embedding: embedding.descriptor(),
            backend: backend.to_string(),
            order: cfg.run.order,
            grid_size: grid.len(),
            feature_order: order,
        },
        original: ArmSummary::of(&f1(Method::Original)),
        pqk: ArmSummary::of(&f1(Method::Pqk)),
        plan,
        splits: outcomes,
        counts,
    })
}

/// Screening metrics on the training portion of the first split.
pub fn screen_experiment(cfg: &ExperimentConfig) -> Result<ScreeningReport> {
    cfg.validate()?;
    cfg.backend()?.check(cfg.n_qubits(), &cfg.simulator())?;
    let constructs = load_constructs(&cfg.data.path)?;
    let data = encode_dataset(&constructs, cfg.data.n_positions)?;
    screen_dataset(&data, cfg)
}

pub fn screen_dataset(data: &EncodedDataset, cfg: &ExperimentConfig) -> Result<ScreeningReport> {
    let plan = make_splits(data.len(), cfg.run.n_splits, cfg.run.train_frac, cfg.seeds.split)?;
    let train = data.subset(&plan.splits[0].train);
    let order = feature_order(data, cfg.run.order);
    let cache = cfg.run.cache_dir.as_ref().map(FeatureCache::new).transpose()?;
    let pqk = embed_dataset(&train, &cfg.embedding_config(), cfg.backend()?, &order, &cfg.simulator(), cache.as_ref())?;
    let s = &cfg.screening;
    screen_advantage(&train.feature_matrix(), &pqk.rows, &train.labels(), &s.kernel_spec(), s.lambda, &s.sweep)
}
