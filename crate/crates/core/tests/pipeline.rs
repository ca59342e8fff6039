use pqk::harness::{
    per_motif_analysis, run_on_dataset, synthetic_constructs, EmbeddingSpec, ExperimentConfig, Method,
};
use pqk::motif::encode_dataset;

fn config(embedding: &str, test_mode: bool) -> ExperimentConfig {
    let text = format!(
        r#"
[data]
path = "unused.csv"
n_positions = 1

[embedding]
{embedding}

[seeds]
split = 11
cv = 12
embedding = 13

[run]
folds = 3
test_mode = {test_mode}

[grid]
kernels = ["linear", "rbf"]
c = [1.0, 100.0]
gamma = ["scale", 1.0]
"#
    );
    ExperimentConfig::from_toml(&text).unwrap()
}

#[test]
fn synthetic_pipeline_is_perfect_and_deterministic() {
    let data = encode_dataset(&synthetic_constructs(40, 3).unwrap(), 1).unwrap();
    let cfg = config("kind = \"e1\"\nreps = 2\nscale = \"pi2\"", false);
    let report = run_on_dataset(&data, &cfg).unwrap();
    assert_eq!(report.summary(Method::Original).median, 1.0);
    assert_eq!(report.summary(Method::Pqk).median, 1.0);
    let again = run_on_dataset(&data, &cfg).unwrap();
    assert_eq!(report.to_json().unwrap(), again.to_json().unwrap());

    // every position/axis sums to all test occurrences
    let total: usize = report.plan.splits.iter().map(|s| s.test.len()).sum();
    for axis in pqk::motif::AnnotationAxis::ALL {
        let sum: u64 = report.counts.iter().filter(|c| c.axis == axis).map(|c| c.original.total()).sum();
        assert_eq!(sum as usize, total);
    }
    let sig = per_motif_analysis(&report, 0.01).unwrap();
    assert!(sig.iter().all(|r| !r.significant));
}

#[test]
fn identity_embedding_degenerates_to_one_label() {
    let data = encode_dataset(&synthetic_constructs(30, 5).unwrap(), 1).unwrap();
    let cfg = config("kind = \"identity\"", true);
    assert_eq!(cfg.embedding, EmbeddingSpec::Identity);
    let report = run_on_dataset(&data, &cfg).unwrap();
    let y = data.labels();
    for (split, out) in report.plan.splits.iter().zip(&report.splits) {
        let constant = |label: f64| split.test.iter().zip(&out.pqk.correct).all(|(&i, &ok)| ok == (y[i] == label));
        assert!(constant(1.0) || constant(-1.0), "split {}", out.index);
    }

    let features = pqk::harness::embed_dataset(
        &data,
        &cfg.embedding_config(),
        pqk::sim::Backend::Exact,
        &(0..15).collect::<Vec<_>>(),
        &cfg.simulator(),
        None,
    )
    .unwrap();
    for row in &features.rows {
        for t in row.chunks(3) {
            assert_eq!(t, [0.0, 0.0, 1.0]);
        }
    }
}
