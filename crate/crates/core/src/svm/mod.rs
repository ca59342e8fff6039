//! Binary kernel SVM trained by sequential minimal optimization, weighted F1
//! scoring and cross-validated grid search.

mod f1;
mod grid;
mod smo;

pub use f1::weighted_f1;
pub use grid::{
    grid_search, grid_search_with_folds, stratified_folds, CandidateScore, Grid, GridResult, FULL_C_COUNT,
    FULL_GAMMA_COUNT,
};
pub use smo::{
    dual_objective, kkt_violation, predict, smo_train, solve_dual, training_hash, DualSolution, SmoParams,
    SvmModel,
};
