use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use subspar::QueryCounts;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Full argument vector, program name first.
    pub args: Vec<String>,
    pub cwd: PathBuf,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// sha256 of every input file, keyed by path as given.
    pub inputs: BTreeMap<String, String>,
    /// sha256 of every primary output, keyed by file name inside the output directory.
    pub outputs: BTreeMap<String, String>,
    pub wall_clock_seconds: f64,
    pub queries: Option<QueryCounts>,
    pub exit_code: i32,
}

pub fn sha256_file(path: &Path) -> std::io::Result<String> {
    let bytes = fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn store(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(&path, text + "\n")?;
        Ok(path)
    }
}
