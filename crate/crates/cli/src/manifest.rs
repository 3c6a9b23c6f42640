//! The run manifest: config snapshot, derived seeds, timings and a checksummed
//! census of every artifact the run emitted.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactRecord {
    /// Path relative to the run directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum CellStatus {
    Ok,
    Error { message: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellRecord {
    pub dataset: String,
    pub attribution_method: String,
    pub baseline_method: String,
    #[serde(flatten)]
    pub status: CellStatus,
    /// Artifacts this cell produced (relative paths).
    pub artifacts: Vec<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureDropRecord {
    pub name: String,
    pub missing: usize,
    pub total: usize,
    pub dropped: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub name: String,
    pub rows: usize,
    pub features: usize,
    pub classes: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub eval_rows: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped_features: Vec<FeatureDropRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub master_seed: u64,
    /// Snapshot of the whole experiment configuration.
    pub config: serde_json::Value,
    /// Seed of every derived stage stream, keyed by stage label.
    pub stage_seeds: BTreeMap<String, u64>,
    /// Wall-clock seconds per stage, keyed by stage label.
    pub stage_seconds: BTreeMap<String, f64>,
    pub datasets: Vec<DatasetRecord>,
    pub cells: Vec<CellRecord>,
    /// Every file the run wrote (except this manifest), with checksums.
    pub artifacts: Vec<ArtifactRecord>,
    pub warnings: Vec<String>,
}

pub fn sha256_file(path: &Path) -> anyhow::Result<(String, u64)> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("cannot read artifact '{}'", path.display()))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok((hex_string(&hasher.finalize()), bytes.len() as u64))
}

fn hex_string(digest: &[u8]) -> String {
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn write(&self, run_dir: &Path) -> anyhow::Result<()> {
        let path = run_dir.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, json)
            .with_context(|| format!("cannot write '{}'", path.display()))?;
        Ok(())
    }

    pub fn load(run_dir: &Path) -> anyhow::Result<RunManifest> {
        let path = run_dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("no run manifest at '{}'", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}
