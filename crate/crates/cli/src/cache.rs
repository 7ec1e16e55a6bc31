//! Exact extremal values persisted as a JSON table keyed by pattern hash and size.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExfRecord {
    pub pattern: String,
    pub n: usize,
    pub m: usize,
    pub value: usize,
    pub exact: bool,
    pub method: String,
    /// Witness in m01 format.
    pub witness: String,
}

pub fn key(pattern_id: &str, n: usize, m: usize) -> String {
    let digest = Sha256::digest(pattern_id.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("{hex}:{n}:{m}")
}

pub fn load(path: &Path) -> Result<BTreeMap<String, ExfRecord>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading cache {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cache {} is not a result table", path.display()))
}

pub fn store(path: &Path, table: &BTreeMap<String, ExfRecord>) -> Result<()> {
    let text = serde_json::to_string_pretty(table)?;
    fs::write(path, text + "\n").with_context(|| format!("writing cache {}", path.display()))
}
