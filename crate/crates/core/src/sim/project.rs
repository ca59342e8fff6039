use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::cache::FeatureCache;
use super::pauli::{backpropagate_observable, obp_expectation, ObservableSum, MAX_PAULI_QUBITS};
use super::statevector::{pauli_expectation, sample_from_exact, StatevectorSimulator};
use super::Basis;
use crate::circuit::{build_heisenberg_embedding, build_zz_feature_map_with, Circuit, Entanglement, PairMap};
use crate::error::{PqkError, Result};
use crate::motif::EncodedDataset;

/// Embedding circuit family and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbeddingConfig {
    /// Empty circuit; every qubit stays in `|0⟩`. Test use only.
    Identity,
    ZzFeatureMap {
        reps: usize,
        scale: f64,
        #[serde(default)]
        entanglement: Entanglement,
        #[serde(default)]
        pair_map: PairMap,
    },
    Heisenberg {
        steps: usize,
        scale: f64,
        seed: u64,
    },
}

impl EmbeddingConfig {
    pub fn n_qubits(&self, width: usize) -> usize {
        match self {
            EmbeddingConfig::Heisenberg { .. } => width + 1,
            _ => width,
        }
    }

    pub fn build(&self, x: &[f64]) -> Result<Circuit> {
        match *self {
            EmbeddingConfig::Identity => Ok(Circuit::new(x.len())),
            EmbeddingConfig::ZzFeatureMap { reps, scale, entanglement, pair_map } => {
                build_zz_feature_map_with(x, reps, scale, entanglement, pair_map)
            }
            EmbeddingConfig::Heisenberg { steps, scale, seed } => {
                build_heisenberg_embedding(x, steps, scale, seed)
            }
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            EmbeddingConfig::Identity => "identity".into(),
            EmbeddingConfig::ZzFeatureMap { reps, scale, entanglement, pair_map } => match pair_map {
                PairMap::Product => format!("e1:reps={reps}:scale={scale:?}:ent={entanglement:?}"),
                PairMap::Shifted => format!("e1:reps={reps}:scale={scale:?}:ent={entanglement:?}:map=shifted"),
            },
            EmbeddingConfig::Heisenberg { steps, scale, seed } => {
                format!("e2:steps={steps}:scale={scale:?}:seed={seed}")
            }
        }
    }
}

/// Expectation-value backend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    Exact,
    Shots { shots: u64, seed: u64 },
    Obp { threshold: f64 },
}

impl Backend {
    pub fn check(&self, n_qubits: usize, sim: &StatevectorSimulator) -> Result<()> {
        match self {
            Backend::Exact | Backend::Shots { .. } => sim.check(n_qubits),
            Backend::Obp { threshold } => {
                if !(*threshold >= 0.0) {
                    return Err(PqkError::Config(format!("obp threshold {threshold} must be >= 0")));
                }
                if n_qubits > MAX_PAULI_QUBITS {
                    return Err(PqkError::BackendInfeasible(format!(
                        "{n_qubits} qubits exceeds the obp limit of {MAX_PAULI_QUBITS}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Whether results obey the Bloch-ball bound exactly (up to rounding).
    pub fn is_physical(&self) -> bool {
        !matches!(self, Backend::Shots { .. })
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => write!(f, "exact"),
            Backend::Shots { shots, seed } => write!(f, "shots:{shots}:{seed}"),
            Backend::Obp { threshold } => write!(f, "obp:{threshold:?}"),
        }
    }
}

impl FromStr for Backend {
    type Err = PqkError;

    /// `exact`, `shots:<n>[:<seed>]` or `obp:<threshold>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || PqkError::Config(format!("unrecognized backend `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["exact"] => Ok(Backend::Exact),
            ["shots", n] | ["shots", n, _] => {
                let shots: u64 = n.parse().map_err(|_| bad())?;
                if shots == 0 {
                    return Err(PqkError::Config("shots must be >= 1".into()));
                }
                let seed = match parts.get(2) {
                    Some(v) => v.parse().map_err(|_| bad())?,
                    None => 0,
                };
                Ok(Backend::Shots { shots, seed })
            }
            ["obp", t] => {
                let threshold: f64 = t.parse().map_err(|_| bad())?;
                if !(threshold >= 0.0) {
                    return Err(bad());
                }
                Ok(Backend::Obp { threshold })
            }
            _ => Err(bad()),
        }
    }
}

/// Per-sample single-qubit Pauli expectations, columns `(X0, Y0, Z0, X1, …)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RdmFeatureMatrix {
    pub n_qubits: usize,
    pub rows: Vec<Vec<f64>>,
}

impl RdmFeatureMatrix {
    pub fn width(&self) -> usize {
        3 * self.n_qubits
    }

    pub fn column_names(&self) -> Vec<String> {
        (0..self.n_qubits)
            .flat_map(|q| Basis::ALL.into_iter().map(move |b| format!("q{q}_{}", b.name())))
            .collect()
    }

    /// Largest `X² + Y² + Z²` over all qubits of all rows.
    pub fn max_bloch_norm_sqr(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.chunks(3).map(|t| t.iter().map(|v| v * v).sum::<f64>()))
            .fold(0.0, f64::max)
    }
}

fn features_for_circuit(c: &Circuit, backend: Backend, sim: &StatevectorSimulator, row_seed: u64) -> Result<Vec<f64>> {
    let n = c.n_qubits();
    match backend {
        Backend::Exact | Backend::Shots { .. } => {
            let sv = sim.run(c)?;
            let mut out = Vec::with_capacity(3 * n);
            for q in 0..n {
                for (bi, b) in Basis::ALL.into_iter().enumerate() {
                    let exact = pauli_expectation(&sv, q, b);
                    out.push(match backend {
                        Backend::Shots { shots, .. } => {
                            sample_from_exact(exact, shots, mix_seed(row_seed, (3 * q + bi) as u64))
                        }
                        _ => exact,
                    });
                }
            }
            Ok(out)
        }
        Backend::Obp { threshold } => (0..3 * n)
            .into_par_iter()
            .map(|k| {
                let obs = ObservableSum::single(n, k / 3, Basis::ALL[k % 3]);
                let back = backpropagate_observable(c, &obs, threshold)?;
                Ok(obp_expectation(&back))
            })
            .collect::<Result<Vec<f64>>>()
            .map(|mut out| {
                out.chunks_mut(3).for_each(clamp_to_bloch_ball);
                out
            }),
    }
}

/// Radially rescales a Pauli triple that leaves the unit ball; truncated
/// backpropagation does not preserve the bound on its own.
pub fn clamp_to_bloch_ball(triple: &mut [f64]) {
    let r = triple.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r > 1.0 {
        triple.iter_mut().for_each(|v| *v /= r);
    }
}

/// Pauli features of a single circuit, `[X0, Y0, Z0, X1, ...]`.
pub fn circuit_features(c: &Circuit, backend: Backend, sim: &StatevectorSimulator) -> Result<Vec<f64>> {
    features_for_circuit(c, backend, sim, 0)
}

fn mix_seed(a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over the combined words
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn row_seed(backend: Backend, row: &[f64]) -> u64 {
    match backend {
        Backend::Shots { seed, .. } => {
            let mut h = Sha256::new();
            for v in row {
                h.update(v.to_le_bytes());
            }
            let d = h.finalize();
            let word = u64::from_le_bytes(d[..8].try_into().expect("8 bytes"));
            mix_seed(seed, word)
        }
        _ => 0,
    }
}

/// Projects raw feature rows through `embedding` and `backend`. Distinct rows
/// are simulated once, in parallel; `cache` persists results across runs.
pub fn project_rows(
    rows: &[Vec<f64>],
    embedding: &EmbeddingConfig,
    backend: Backend,
    sim: &StatevectorSimulator,
    cache: Option<&FeatureCache>,
) -> Result<RdmFeatureMatrix> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(PqkError::Dimension("feature rows differ in width".into()));
    }
    let n_qubits = embedding.n_qubits(width);
    backend.check(n_qubits, sim)?;

    let mut distinct: Vec<&Vec<f64>> = Vec::new();
    let mut slot: HashMap<Vec<u64>, usize> = HashMap::new();
    let index: Vec<usize> = rows
        .iter()
        .map(|r| {
            let key: Vec<u64> = r.iter().map(|v| v.to_bits()).collect();
            *slot.entry(key).or_insert_with(|| {
                distinct.push(r);
                distinct.len() - 1
            })
        })
        .collect();
    debug!("projecting {} rows ({} distinct) on {n_qubits} qubits", rows.len(), distinct.len());

    let (emb_desc, be_desc) = (embedding.descriptor(), backend.to_string());
    let computed: Vec<Vec<f64>> = distinct
        .par_iter()
        .map(|row| {
            let key = cache.map(|_| FeatureCache::key(row, &emb_desc, &be_desc));
            if let (Some(cache), Some(key)) = (cache, key.as_deref()) {
                if let Some(hit) = cache.get(key).filter(|v| v.len() == 3 * n_qubits) {
                    return Ok(hit);
                }
            }
            let circuit = embedding.build(row)?;
            let feats = features_for_circuit(&circuit, backend, sim, row_seed(backend, row))?;
            if let (Some(cache), Some(key)) = (cache, key.as_deref()) {
                cache.put(key, &feats)?;
            }
            Ok(feats)
        })
        .collect::<Result<_>>()?;

    Ok(RdmFeatureMatrix {
        n_qubits,
        rows: index.into_iter().map(|i| computed[i].clone()).collect(),
    })
}

pub fn project_features(
    dataset: &EncodedDataset,
    embedding: &EmbeddingConfig,
    backend: Backend,
    cache: Option<&FeatureCache>,
) -> Result<RdmFeatureMatrix> {
    project_rows(&dataset.feature_matrix(), embedding, backend, &StatevectorSimulator::default(), cache)
}

/// Writes features with header `q{j}_{X|Y|Z}`; a trailing `label` column is
/// added when labels are given.
pub fn write_feature_csv<W: Write>(writer: W, m: &RdmFeatureMatrix, labels: Option<&[f64]>) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != m.rows.len() {
            return Err(PqkError::Dimension(format!("{} labels for {} rows", l.len(), m.rows.len())));
        }
    }
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = m.column_names();
    if labels.is_some() {
        header.push("label".into());
    }
    wtr.write_record(&header)?;
    for (i, r) in m.rows.iter().enumerate() {
        let mut rec: Vec<String> = r.iter().map(|v| format!("{v:?}")).collect();
        if let Some(l) = labels {
            rec.push(format!("{}", l[i] as i64));
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a feature CSV, returning the matrix and labels when present.
pub fn read_feature_csv<R: Read>(reader: R) -> Result<(RdmFeatureMatrix, Option<Vec<f64>>)> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers()?.clone();
    let has_label = header.iter().next_back() == Some("label");
    let width = header.len() - usize::from(has_label);
    if width % 3 != 0 {
        return Err(PqkError::Data(format!("feature CSV has {width} columns, not a multiple of 3")));
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| PqkError::Data(format!("feature row {}: bad value `{t}`", i + 1)))
        };
        rows.push(rec.iter().take(width).map(parse).collect::<Result<Vec<f64>>>()?);
        if has_label {
            labels.push(parse(&rec[width])?);
        }
    }
    Ok((RdmFeatureMatrix { n_qubits: width / 3, rows }, has_label.then_some(labels)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::HALF_PI_SCALE;

    #[test]
    fn clamp_only_touches_long_triples() {
        let mut t = [0.6, 0.0, 0.8];
        clamp_to_bloch_ball(&mut t);
        assert_eq!(t, [0.6, 0.0, 0.8]);
        let mut t = [1.2, 0.0, 1.6];
        clamp_to_bloch_ball(&mut t);
        assert!((t[0] - 0.6).abs() < 1e-15 && (t[2] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn backend_parsing() {
        assert_eq!("exact".parse::<Backend>().unwrap(), Backend::Exact);
        assert_eq!("shots:100".parse::<Backend>().unwrap(), Backend::Shots { shots: 100, seed: 0 });
        assert_eq!("shots:100:9".parse::<Backend>().unwrap(), Backend::Shots { shots: 100, seed: 9 });
        assert_eq!("obp:0.05".parse::<Backend>().unwrap(), Backend::Obp { threshold: 0.05 });
        for bad in ["", "obp", "obp:-1", "shots:0", "gpu"] {
            assert!(bad.parse::<Backend>().is_err(), "{bad}");
        }
        let b = Backend::Obp { threshold: 0.1 };
        assert_eq!(b.to_string().parse::<Backend>().unwrap(), b);
    }

    #[test]
    fn identity_embedding_gives_zero_bloch_vectors() {
        let rows = vec![vec![1.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]];
        for backend in [Backend::Exact, Backend::Obp { threshold: 0.0 }] {
            let m = project_rows(&rows, &EmbeddingConfig::Identity, backend, &Default::default(), None).unwrap();
            for r in &m.rows {
                assert_eq!(r, &vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
            }
        }
    }

    #[test]
    fn widths() {
        let e1 = EmbeddingConfig::ZzFeatureMap { reps: 1, scale: HALF_PI_SCALE, entanglement: Entanglement::Linear, pair_map: PairMap::Product };
        let e2 = EmbeddingConfig::Heisenberg { steps: 1, scale: HALF_PI_SCALE, seed: 1 };
        assert_eq!(3 * e1.n_qubits(60), 180);
        assert_eq!(3 * e2.n_qubits(60), 183);
    }

    #[test]
    fn infeasible_backend_is_reported() {
        let rows = vec![vec![0.0; 30]];
        let e1 = EmbeddingConfig::ZzFeatureMap { reps: 1, scale: HALF_PI_SCALE, entanglement: Entanglement::Linear, pair_map: PairMap::Product };
        let err = project_rows(&rows, &e1, Backend::Exact, &Default::default(), None).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        let wide = vec![vec![0.0; 130]];
        let err = project_rows(&wide, &e1, Backend::Obp { threshold: 0.1 }, &Default::default(), None).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn duplicates_and_cache() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FeatureCache::new(dir.path()).unwrap();
        let rows = vec![vec![1.0, 0.0, 1.0, 1.0], vec![0.0, 1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0, 1.0]];
        let e2 = EmbeddingConfig::Heisenberg { steps: 2, scale: HALF_PI_SCALE, seed: 4 };
        let sim = StatevectorSimulator::default();
        let a = project_rows(&rows, &e2, Backend::Exact, &sim, Some(&cache)).unwrap();
        assert_eq!(a.rows[0], a.rows[2]);
        assert_eq!(a.width(), 15);
        let b = project_rows(&rows, &e2, Backend::Exact, &sim, Some(&cache)).unwrap();
        assert_eq!(a, b);
        let entries = walk(dir.path());
        assert_eq!(entries, 2);
    }

    fn walk(p: &std::path::Path) -> usize {
        std::fs::read_dir(p)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                if e.file_type().unwrap().is_dir() {
                    walk(&e.path())
                } else {
                    usize::from(e.path().extension().is_some_and(|x| x == "json"))
                }
            })
            .sum()
    }

    #[test]
    fn shots_are_deterministic() {
        let rows = vec![vec![1.0, 0.0, 1.0]];
        let e1 = EmbeddingConfig::ZzFeatureMap { reps: 2, scale: 1.0, entanglement: Entanglement::Linear, pair_map: PairMap::Product };
        let be = Backend::Shots { shots: 500, seed: 3 };
        let sim = StatevectorSimulator::default();
        let a = project_rows(&rows, &e1, be, &sim, None).unwrap();
        let b = project_rows(&rows, &e1, be, &sim, None).unwrap();
        assert_eq!(a, b);
        let exact = project_rows(&rows, &e1, Backend::Exact, &sim, None).unwrap();
        for (s, e) in a.rows[0].iter().zip(&exact.rows[0]) {
            assert!((s - e).abs() < 0.25);
        }
    }

    #[test]
    fn feature_csv_roundtrip() {
        let m = RdmFeatureMatrix { n_qubits: 2, rows: vec![vec![0.1, -0.2, 0.3, 0.0, 1.0, -1.0]] };
        let mut buf = Vec::new();
        write_feature_csv(&mut buf, &m, Some(&[-1.0])).unwrap();
        assert!(std::str::from_utf8(&buf).unwrap().starts_with("q0_X,q0_Y,q0_Z,q1_X,q1_Y,q1_Z,label"));
        let (back, labels) = read_feature_csv(buf.as_slice()).unwrap();
        assert_eq!(back, m);
        assert_eq!(labels, Some(vec![-1.0]));
    }
}
