use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit::{Entanglement, PairMap, HALF_PI_SCALE, PI_SCALE};
use crate::error::{PqkError, Result};
use crate::kernel::{Gamma, KernelKind, KernelSpec};
use crate::motif::{N_CATEGORIES, N_POSITIONS};
use crate::sim::{Backend, EmbeddingConfig, StatevectorSimulator, DEFAULT_MAX_QUBITS};
use crate::svm::Grid;

/// Angle scale written as `pi`, `pi2` (π/2) or a number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Scale(pub f64);

impl FromStr for Scale {
    type Err = PqkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pi" => Ok(Scale(PI_SCALE)),
            "pi2" | "pi/2" => Ok(Scale(HALF_PI_SCALE)),
            t => t
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Scale)
                .ok_or_else(|| PqkError::Config(format!("bad scale `{t}` (expected pi, pi2 or a number)"))),
        }
    }
}

impl TryFrom<String> for Scale {
    type Error = PqkError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Scale> for String {
    fn from(s: Scale) -> String {
        s.to_string()
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == PI_SCALE {
            f.write_str("pi")
        } else if self.0 == HALF_PI_SCALE {
            f.write_str("pi2")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EmbeddingSpec {
    E1 {
        reps: usize,
        scale: Scale,
        #[serde(default)]
        entanglement: Entanglement,
        #[serde(default)]
        pair_map: PairMap,
    },
    E2 {
        steps: usize,
        scale: Scale,
    },
    /// Leaves every qubit in `|0⟩`; only accepted with `run.test_mode`.
    Identity,
}

impl EmbeddingSpec {
    pub fn to_config(&self, seed: u64) -> EmbeddingConfig {
        match *self {
            EmbeddingSpec::E1 { reps, scale, entanglement, pair_map } => {
                EmbeddingConfig::ZzFeatureMap { reps, scale: scale.0, entanglement, pair_map }
            }
            EmbeddingSpec::E2 { steps, scale } => EmbeddingConfig::Heisenberg { steps, scale: scale.0, seed },
            EmbeddingSpec::Identity => EmbeddingConfig::Identity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    #[default]
    Natural,
    Correlation,
}

impl FromStr for OrderMode {
    type Err = PqkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "natural" => Ok(OrderMode::Natural),
            "correlation" => Ok(OrderMode::Correlation),
            t => Err(PqkError::Config(format!("unknown feature order `{t}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub path: PathBuf,
    #[serde(default = "default_positions")]
    pub n_positions: usize,
}

fn default_positions() -> usize {
    N_POSITIONS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    pub split: u64,
    pub cv: u64,
    pub embedding: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub backend: String,
    pub order: OrderMode,
    pub n_splits: usize,
    pub train_frac: f64,
    pub folds: usize,
    pub max_qubits: usize,
    pub cache_dir: Option<PathBuf>,
    /// Also score every grid candidate on the test split and report the best.
    pub test_best: bool,
    pub test_mode: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            backend: "exact".into(),
            order: OrderMode::Natural,
            n_splits: 10,
            train_frac: 0.7,
            folds: 10,
            max_qubits: DEFAULT_MAX_QUBITS,
            cache_dir: None,
            test_best: false,
            test_mode: false,
        }
    }
}

/// Hyperparameter lists; any list left out takes the full table value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub kernels: Option<Vec<KernelKind>>,
    pub c: Option<Vec<f64>>,
    pub gamma: Option<Vec<Gamma>>,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        let full = Grid::full();
        Grid::new(
            self.kernels.clone().unwrap_or(full.kernels),
            self.c.clone().unwrap_or(full.c),
            self.gamma.clone().unwrap_or(full.gamma),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScreeningConfig {
    pub lambda: f64,
    pub sweep: Vec<f64>,
    pub kernel: KernelKind,
    pub gamma: Gamma,
}

impl Default for ScreeningConfig {
    fn default() -> Self {
        ScreeningConfig {
            lambda: 1.0,
            sweep: vec![0.001, 0.01, 0.1, 1.0, 10.0],
            kernel: KernelKind::Rbf,
            gamma: Gamma::Scale,
        }
    }
}

impl ScreeningConfig {
    pub fn kernel_spec(&self) -> KernelSpec {
        KernelSpec::new(self.kernel, self.gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: DataConfig,
    pub embedding: EmbeddingSpec,
    pub seeds: Seeds,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub screening: ScreeningConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| PqkError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative dataset path is taken relative to the file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| PqkError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if cfg.data.path.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.data.path = dir.join(&cfg.data.path);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| PqkError::Config(e.to_string()))
    }

    pub fn backend(&self) -> Result<Backend> {
        self.run.backend.parse()
    }

    pub fn embedding_config(&self) -> EmbeddingConfig {
        self.embedding.to_config(self.seeds.embedding)
    }

    pub fn simulator(&self) -> StatevectorSimulator {
        StatevectorSimulator { max_qubits: self.run.max_qubits }
    }

    pub fn encoding_width(&self) -> usize {
        self.data.n_positions * N_CATEGORIES
    }

    pub fn n_qubits(&self) -> usize {
        self.embedding_config().n_qubits(self.encoding_width())
    }

    pub fn validate(&self) -> Result<()> {
        if self.data.n_positions == 0 || self.data.n_positions > N_POSITIONS {
            return Err(PqkError::Config(format!("n_positions must be in 1..={N_POSITIONS}")));
        }
        match self.embedding {
            EmbeddingSpec::E1 { reps: 0, .. } => return Err(PqkError::Config("e1 needs reps >= 1".into())),
            EmbeddingSpec::E2 { steps: 0, .. } => return Err(PqkError::Config("e2 needs steps >= 1".into())),
            EmbeddingSpec::Identity if !self.run.test_mode => {
                return Err(PqkError::Config("identity embedding requires run.test_mode".into()))
            }
            _ => {}
        }
        self.backend()?;
        self.grid.build()?;
        if self.run.folds < 2 {
            return Err(PqkError::Config("run.folds must be >= 2".into()));
        }
        if !(self.screening.lambda >= 0.0) || self.screening.sweep.iter().any(|l| !(*l >= 0.0)) {
            return Err(PqkError::Config("screening lambdas must be >= 0".into()));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[data]
path = "constructs.csv"

[embedding]
kind = "e1"
reps = 8
scale = "pi2"

[seeds]
split = 1
cv = 2
embedding = 3
"#;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.data.n_positions, 4);
        assert_eq!(cfg.n_qubits(), 60);
        assert_eq!(cfg.run.n_splits, 10);
        assert_eq!(cfg.backend().unwrap(), Backend::Exact);
        assert_eq!(cfg.grid.build().unwrap(), Grid::full());
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn seeds_are_mandatory() {
        let text = MINIMAL.replace("embedding = 3\n", "");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(PqkError::Config(_))));
    }

    #[test]
    fn rejects_bad_values() {
        for (from, to) in [
            ("reps = 8", "reps = 0"),
            ("scale = \"pi2\"", "scale = \"tau\""),
            ("kind = \"e1\"\nreps = 8\nscale = \"pi2\"", "kind = \"identity\""),
        ] {
            assert!(ExperimentConfig::from_toml(&MINIMAL.replace(from, to)).is_err(), "{to}");
        }
        let bad_backend = format!("{MINIMAL}\n[run]\nbackend = \"gpu\"\n");
        assert!(ExperimentConfig::from_toml(&bad_backend).is_err());
        let identity = MINIMAL.replace("kind = \"e1\"\nreps = 8\nscale = \"pi2\"", "kind = \"identity\"");
        assert!(ExperimentConfig::from_toml(&format!("{identity}\n[run]\ntest_mode = true\n")).is_ok());
    }

    #[test]
    fn partial_grid() {
        let text = format!("{MINIMAL}\n[grid]\nkernels = [\"rbf\"]\nc = [1.0, 10.0]\ngamma = [\"scale\", 0.5]\n");
        let g = ExperimentConfig::from_toml(&text).unwrap().grid.build().unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.gamma, vec![Gamma::Scale, Gamma::Value(0.5)]);
    }
}
