//! Projection of encoded constructs to Bloch-vector features on each backend.

use pqk::circuit::{Entanglement, PairMap, HALF_PI_SCALE};
use pqk::harness::synthetic_constructs;
use pqk::motif::encode_dataset;
use pqk::sim::{project_features, Backend, EmbeddingConfig, RdmFeatureMatrix};

fn distinct_rows(m: &RdmFeatureMatrix) -> usize {
    let mut rows: Vec<Vec<i64>> = m.rows.iter().map(|r| r.iter().map(|v| (v * 1e9).round() as i64).collect()).collect();
    rows.sort();
    rows.dedup();
    rows.len()
}

fn main() -> pqk::Result<()> {
    let data = encode_dataset(&synthetic_constructs(12, 9)?, 1)?;
    let e1 = |reps, pair_map| EmbeddingConfig::ZzFeatureMap { reps, scale: HALF_PI_SCALE, entanglement: Entanglement::Linear, pair_map };
    let e2 = EmbeddingConfig::Heisenberg { steps: 4, scale: HALF_PI_SCALE, seed: 7 };
    let embeddings = [
        ("E1 reps=8 product", e1(8, PairMap::Product)),
        ("E1 reps=6 product", e1(6, PairMap::Product)),
        ("E1 reps=8 shifted", e1(8, PairMap::Shifted)),
        ("E2 steps=4", e2),
    ];
    for (name, emb) in &embeddings {
        for backend in [Backend::Exact, Backend::Shots { shots: 10_000, seed: 1 }, Backend::Obp { threshold: 0.05 }] {
            let m = project_features(&data, emb, backend, None)?;
            println!(
                "{name:<18} {backend:<14} qubits={} width={} distinct rows={:>2} max|r|^2={:.4}",
                m.n_qubits,
                m.width(),
                distinct_rows(&m),
                m.max_bloch_norm_sqr(),
            );
        }
    }
    Ok(())
}
