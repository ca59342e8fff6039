//! Gate-level circuit IR and the embedding builders.
//!
//! Rotation gates follow `R_P(θ) = exp(-iθP/2)`. Gates are stored in execution
//! order.

mod builders;
mod ir;
mod text;

pub use builders::{
    build_heisenberg_embedding, build_zz_feature_map, build_zz_feature_map_with, Entanglement, PairMap,
    HALF_PI_SCALE, PI_SCALE,
};
pub use ir::{circuit_stats, Circuit, CircuitMeta, CircuitStats, Gate};
