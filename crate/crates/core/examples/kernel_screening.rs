//! Geometric difference and model complexity of classical vs projected kernels.

use pqk::circuit::{Entanglement, PairMap, HALF_PI_SCALE};
use pqk::harness::{screen_advantage, synthetic_constructs};
use pqk::kernel::{Gamma, KernelSpec};
use pqk::motif::encode_dataset;
use pqk::sim::{project_features, Backend, EmbeddingConfig};

fn main() -> pqk::Result<()> {
    let data = encode_dataset(&synthetic_constructs(60, 3)?, 1)?;
    let emb = EmbeddingConfig::ZzFeatureMap {
        reps: 8,
        scale: HALF_PI_SCALE,
        entanglement: Entanglement::Linear,
        pair_map: PairMap::Shifted,
    };
    let pqk = project_features(&data, &emb, Backend::Exact, None)?;
    let report = screen_advantage(
        &data.feature_matrix(),
        &pqk.rows,
        &data.labels(),
        &KernelSpec::rbf(Gamma::Scale),
        1.0,
        &[0.001, 0.01, 0.1, 1.0, 10.0],
    )?;
    print!("{report}");
    Ok(())
}
