use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigsynth::ScenarioSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

/// One line of `manifest.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub class_id: u8,
    pub jsr_db: f64,
    pub scenario_spec: ScenarioSpec,
    /// Paths relative to the corpus directory.
    pub image_path: String,
    pub sidecar_path: String,
    pub split: Split,
}

/// Serializes records as JSON lines, one per record, each ending in `\n`.
pub fn to_jsonl(records: &[ManifestRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn from_jsonl(text: &str) -> Result<Vec<ManifestRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Format(format!("manifest line {}: {e}", i + 1))))
        .collect()
}

pub fn count_split(records: &[ManifestRecord], split: Split) -> usize {
    records.iter().filter(|r| r.split == split).count()
}
