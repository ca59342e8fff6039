//! Writes a seeded synthetic constructs CSV and a matching experiment config.
//!
//! cargo run --example synthetic_dataset -- /tmp/pqk-demo

use std::fs::{self, File};
use std::path::PathBuf;

use pqk::harness::synthetic_constructs;
use pqk::motif::write_constructs;

fn main() -> pqk::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "pqk-demo".into()));
    fs::create_dir_all(&dir)?;
    let constructs = synthetic_constructs(60, 42)?;
    write_constructs(File::create(dir.join("constructs.csv"))?, &constructs)?;

    let config = r#"[data]
path = "constructs.csv"
n_positions = 1

[embedding]
kind = "e1"
reps = 2
scale = "pi2"

[seeds]
split = 1
cv = 2
embedding = 3

[run]
backend = "exact"
folds = 5

[grid]
kernels = ["linear", "rbf"]
c = [0.1, 1.0, 10.0, 100.0]
gamma = ["scale", 0.1, 1.0]

[screening]
lambda = 1.0
sweep = [0.01, 0.1, 1.0, 10.0]
"#;
    fs::write(dir.join("experiment.toml"), config)?;
    println!("wrote {} constructs and experiment.toml to {}", constructs.len(), dir.display());
    Ok(())
}
