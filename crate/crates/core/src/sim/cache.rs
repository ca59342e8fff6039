use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

/// On-disk cache of projected feature rows, one JSON file per key:
/// `<dir>/<first two hex chars>/<sha256 hex>.json`.
#[derive(Debug, Clone)]
pub struct FeatureCache {
    dir: PathBuf,
}

impl FeatureCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(FeatureCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Content hash of `(row, embedding descriptor, backend descriptor)`.
    pub fn key(row: &[f64], embedding: &str, backend: &str) -> String {
        let mut h = Sha256::new();
        for v in row {
            h.update(v.to_le_bytes());
        }
        h.update([0xff]);
        h.update(embedding.as_bytes());
        h.update([0xff]);
        h.update(backend.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Vec<f64>> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes via a temporary file and rename so concurrent readers never see
    /// partial entries.
    pub fn put(&self, key: &str, values: &[f64]) -> Result<()> {
        let path = self.path(key);
        let parent = path.parent().expect("cache entries live in a subdirectory");
        fs::create_dir_all(parent)?;
        let mut tmp = tempfile_in(parent, key)?;
        tmp.1.write_all(serde_json::to_string(values)?.as_bytes())?;
        tmp.1.sync_all()?;
        drop(tmp.1);
        fs::rename(&tmp.0, &path)?;
        Ok(())
    }
}

fn tempfile_in(dir: &Path, key: &str) -> Result<(PathBuf, fs::File)> {
    let tid = format!("{:?}", std::thread::current().id());
    let tid: String = tid.chars().filter(char::is_ascii_digit).collect();
    let path = dir.join(format!(".{key}.{}.{tid}.tmp", std::process::id()));
    let file = fs::File::create(&path)?;
    Ok((path, file))
}
