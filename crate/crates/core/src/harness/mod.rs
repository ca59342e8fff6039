//! Experiment orchestration: split protocol, paired original/projected runs,
//! screening metrics and per-annotation significance analysis.

mod analysis;
mod config;
mod experiment;
mod fisher;
mod screen;
mod splits;
mod synthetic;
mod table;

pub use analysis::{per_motif_analysis, write_count_csv, write_significance_csv, write_split_f1_csv, SignificanceRow};
pub use config::{
    DataConfig, EmbeddingSpec, ExperimentConfig, GridConfig, OrderMode, RunConfig, Scale, ScreeningConfig, Seeds,
};
pub use experiment::{
    category_annotation, embed_dataset, feature_order, run_experiment, run_on_dataset, screen_dataset, screen_experiment, ArmOutcome, ArmSummary,
    Chosen, CountCell, EvalReport, Method, Provenance, SplitOutcome, Tally,
};
pub use fisher::fisher_exact;
pub use screen::{screen_advantage, verdict, ScreeningPoint, ScreeningReport, Verdict};
pub use splits::{make_splits, train_size, Split, SplitPlan};
pub use synthetic::{synthetic_constructs, synthetic_is_high};
pub use table::{read_labeled_csv, LabeledTable};
