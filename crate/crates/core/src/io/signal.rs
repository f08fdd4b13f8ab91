use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{atomic_write, f32_le, parse_f32_le, read_file, read_json, sidecar_path, write_json, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::sigsynth::{ComplexSignal, SamplingGrid, ScenarioSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSidecar {
    pub sample_rate_hz: f64,
    pub n_samples: usize,
    pub scenario_spec: Option<ScenarioSpec>,
    pub seed: Option<u64>,
    pub format_version: u32,
}

/// Writes interleaved little-endian f32 `(re, im)` pairs to `path` and the
/// sidecar to `path.json`.
pub fn write_signal(path: &Path, signal: &ComplexSignal, scenario: Option<&ScenarioSpec>, seed: Option<u64>) -> Result<()> {
    let bytes = f32_le(signal.samples().iter().flat_map(|c| [c.re, c.im]));
    let side = SignalSidecar {
        sample_rate_hz: signal.grid().sample_rate_hz(),
        n_samples: signal.len(),
        scenario_spec: scenario.cloned(),
        seed,
        format_version: FORMAT_VERSION,
    };
    atomic_write(path, &bytes)?;
    write_json(&sidecar_path(path), &side)
}

pub fn read_signal(path: &Path) -> Result<(ComplexSignal, SignalSidecar)> {
    let side: SignalSidecar = read_json(&sidecar_path(path))?;
    if side.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported signal format version {}", side.format_version)));
    }
    let raw = parse_f32_le(&read_file(path)?)?;
    if raw.len() != 2 * side.n_samples {
        return Err(Error::Format(format!(
            "{} holds {} values, sidecar promises {} samples",
            path.display(),
            raw.len(),
            side.n_samples
        )));
    }
    let grid = SamplingGrid::with_samples(side.sample_rate_hz, side.n_samples)?;
    let samples = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    Ok((ComplexSignal::new(grid, samples)?, side))
}
