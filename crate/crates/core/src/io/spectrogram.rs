use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{atomic_write, f32_le, parse_f32_le, read_file, read_json, sidecar_path, write_json, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::tfa::{Spectrogram, TfGridSpec, TransformKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrogramAxes {
    pub time_s: Vec<f64>,
    pub freq_hz: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrogramSidecar {
    /// `[n_time, n_freq]`; the matrix is stored time-major.
    pub dims: [usize; 2],
    pub axes: SpectrogramAxes,
    pub transform_kind: TransformKind,
    pub params: TfGridSpec,
    pub format_version: u32,
}

pub fn write_spectrogram(path: &Path, s: &Spectrogram, params: &TfGridSpec) -> Result<()> {
    let side = SpectrogramSidecar {
        dims: [s.n_time, s.n_freq],
        axes: SpectrogramAxes { time_s: s.time_axis_s.clone(), freq_hz: s.freq_axis_hz.clone() },
        transform_kind: s.kind,
        params: params.clone(),
        format_version: FORMAT_VERSION,
    };
    atomic_write(path, &f32_le(s.values.iter().copied()))?;
    write_json(&sidecar_path(path), &side)
}

pub fn read_spectrogram(path: &Path) -> Result<(Spectrogram, SpectrogramSidecar)> {
    let side: SpectrogramSidecar = read_json(&sidecar_path(path))?;
    if side.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported spectrogram format version {}", side.format_version)));
    }
    let values = parse_f32_le(&read_file(path)?)?;
    let s = Spectrogram::new(side.transform_kind, values, side.axes.time_s.clone(), side.axes.freq_hz.clone())
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    Ok((s, side))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = Spectrogram::new(TransformKind::Bjd, vec![0.5, -1.0, 2.0, 4.0], vec![0.0, 1e-3], vec![1e3, 2e3]).unwrap();
        let p = dir.path().join("b.f32");
        write_spectrogram(&p, &s, &TfGridSpec::default()).unwrap();
        let (back, side) = read_spectrogram(&p).unwrap();
        assert_eq!(back, s);
        assert_eq!(side.dims, [2, 2]);
    }
}
