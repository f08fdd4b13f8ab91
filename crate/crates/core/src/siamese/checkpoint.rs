//! Model checkpoints: `HJCK`, a little-endian u32 format version, a u32
//! header length, the JSON header, then every parameter as a little-endian f64.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::arch::Architecture;
use super::params::Model;
use crate::error::{Error, Result};
use crate::io::{atomic_write, read_file, FORMAT_VERSION};

const MAGIC: &[u8; 4] = b"HJCK";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub arch: Architecture,
    pub n_params: usize,
    pub iterations: usize,
    /// Free-form provenance: training config, seeds, corpus id.
    #[serde(default)]
    pub meta: serde_json::Value,
}

pub fn encode_checkpoint(model: &Model, iterations: usize, meta: serde_json::Value) -> Result<Vec<u8>> {
    let header = CheckpointHeader { arch: model.arch.clone(), n_params: model.values.len(), iterations, meta };
    let json = serde_json::to_vec(&header)?;
    let mut out = Vec::with_capacity(12 + json.len() + 8 * model.values.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    for v in &model.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<(Model, CheckpointHeader)> {
    let bad = |m: &str| Error::Format(format!("checkpoint: {m}"));
    if bytes.len() < 12 || &bytes[..4] != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let hlen = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let body = bytes.get(12..12 + hlen).ok_or_else(|| bad("truncated header"))?;
    let header: CheckpointHeader = serde_json::from_slice(body).map_err(|e| bad(&e.to_string()))?;
    let blob = &bytes[12 + hlen..];
    if blob.len() != 8 * header.n_params {
        return Err(bad(&format!("{} parameter bytes, header promises {}", blob.len(), 8 * header.n_params)));
    }
    let mut model = Model::zeros(header.arch.clone())?;
    if model.values.len() != header.n_params {
        return Err(bad(&format!("architecture has {} parameters, header says {}", model.values.len(), header.n_params)));
    }
    for (v, c) in model.values.iter_mut().zip(blob.chunks_exact(8)) {
        *v = f64::from_le_bytes(c.try_into().unwrap());
    }
    model.check_finite(&model.values, "checkpoint")?;
    Ok((model, header))
}

pub fn save_checkpoint(path: &Path, model: &Model, iterations: usize, meta: serde_json::Value) -> Result<()> {
    atomic_write(path, &encode_checkpoint(model, iterations, meta)?)
}

pub fn load_checkpoint(path: &Path) -> Result<(Model, CheckpointHeader)> {
    decode_checkpoint(&read_file(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siamese::InitConfig;

    #[test]
    fn round_trip_is_exact() {
        let m = Model::init(Architecture::toy(), &InitConfig::default(), 3).unwrap();
        let bytes = encode_checkpoint(&m, 17, serde_json::json!({"seed": 3})).unwrap();
        let (back, h) = decode_checkpoint(&bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(h.iterations, 17);
    }

    #[test]
    fn truncation_is_a_format_error() {
        let m = Model::init(Architecture::toy(), &InitConfig::default(), 3).unwrap();
        let bytes = encode_checkpoint(&m, 0, serde_json::Value::Null).unwrap();
        assert!(matches!(decode_checkpoint(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
        assert!(matches!(decode_checkpoint(b"nope"), Err(Error::Format(_))));
    }
}
