//! Time-frequency analysis: Morlet scalogram, Margenau-Hill and Born-Jordan
//! distributions on a shared, calibrated time/frequency grid.
//!
//! All three transforms are evaluated at `n_time_bins` evenly spaced sample
//! instants and `n_freq_bins` linearly spaced frequencies in
//! `freq_range_hz`. The wavelet scales are tied to the frequency axis by
//! `f = omega0 / (2 pi a)`, so the three channels line up pixel for pixel.

mod bilinear;
mod cwt;
mod czt;
mod decimate;
mod gray;

pub use bilinear::{bjd, mhd};
pub use cwt::{cwt, cwt_complex, CwtCoefficients};
pub use czt::ZoomDft;
pub use decimate::decimate_analytic;
pub use gray::to_gray;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigsynth::ComplexSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Wavelet,
    Mhd,
    Bjd,
}

impl TransformKind {
    pub const ALL: [TransformKind; 3] = [TransformKind::Wavelet, TransformKind::Mhd, TransformKind::Bjd];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Wavelet => "wavelet",
            TransformKind::Mhd => "mhd",
            TransformKind::Bjd => "bjd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowShape {
    Hamming,
    Rectangular,
}

impl WindowShape {
    /// Symmetric taps `h(-M..=M)` with `h(0) = 1`.
    pub fn taps(self, length: usize) -> Vec<f64> {
        let half = length / 2;
        match self {
            WindowShape::Rectangular => vec![1.0; length],
            WindowShape::Hamming if half == 0 => vec![1.0],
            WindowShape::Hamming => (0..length)
                .map(|i| {
                    let m = i as f64 - half as f64;
                    0.54 + 0.46 * (std::f64::consts::PI * m / half as f64).cos()
                })
                .collect(),
        }
    }
}

/// Discretization of the three transforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfGridSpec {
    pub n_time_bins: usize,
    pub n_freq_bins: usize,
    pub freq_range_hz: [f64; 2],
    /// Odd number of lag taps for the bilinear distributions, clipped to the
    /// longest odd length the record allows; `None` uses every available lag
    /// with no window.
    pub window_length: Option<usize>,
    pub window: WindowShape,
    /// Morlet centre frequency in rad per unit scale.
    pub omega0: f64,
    /// Born-Jordan averaging constant.
    pub bjd_a: f64,
    /// Morlet taps beyond this many scale units from the centre are dropped.
    pub cwt_cutoff: f64,
}

impl Default for TfGridSpec {
    fn default() -> Self {
        TfGridSpec {
            n_time_bins: 256,
            n_freq_bins: 256,
            freq_range_hz: [1e3, 300e3],
            window_length: Some(257),
            window: WindowShape::Hamming,
            omega0: 6.0,
            bjd_a: 0.5,
            cwt_cutoff: 7.0,
        }
    }
}

impl TfGridSpec {
    pub fn validate_for(&self, signal: &ComplexSignal) -> Result<()> {
        let [lo, hi] = self.freq_range_hz;
        let nyq = signal.grid().nyquist_hz();
        if !(lo > 0.0 && hi < nyq && lo <= hi) {
            return Err(Error::config(format!(
                "frequency range [{lo}, {hi}] Hz must lie inside (0, {nyq}) Hz"
            )));
        }
        if self.n_freq_bins == 0 || self.n_time_bins == 0 {
            return Err(Error::config("grid needs at least one time and one frequency bin"));
        }
        if self.n_freq_bins > 1 && lo == hi {
            return Err(Error::config("several frequency bins over a zero-width range"));
        }
        if signal.is_empty() {
            return Err(Error::dimension("empty signal"));
        }
        if self.n_time_bins > signal.len() {
            return Err(Error::dimension(format!(
                "{} time bins requested from {} samples",
                self.n_time_bins,
                signal.len()
            )));
        }
        if !(self.omega0 > 0.0) || !(self.bjd_a > 0.0) || !(self.cwt_cutoff > 0.0) {
            return Err(Error::config("omega0, bjd_a and cwt_cutoff must be positive"));
        }
        Ok(())
    }

    pub(crate) fn lag_taps(&self, signal_len: usize) -> Result<Option<Vec<f64>>> {
        match self.window_length {
            None => Ok(None),
            Some(l) if l % 2 == 0 => Err(Error::config(format!("window length {l} must be odd"))),
            // Clipped to the record, keeping the length odd.
            Some(l) => Ok(Some(self.window.taps(l.min(signal_len - (1 - signal_len % 2))))),
        }
    }

    /// Linearly spaced analysis frequencies, increasing.
    pub fn freq_axis_hz(&self) -> Vec<f64> {
        let [lo, hi] = self.freq_range_hz;
        let n = self.n_freq_bins;
        if n == 1 {
            return vec![lo];
        }
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    pub fn freq_step_hz(&self) -> f64 {
        if self.n_freq_bins < 2 {
            return 0.0;
        }
        (self.freq_range_hz[1] - self.freq_range_hz[0]) / (self.n_freq_bins - 1) as f64
    }

    /// Wavelet scales (seconds), strictly increasing; `scale_set()[i]` belongs
    /// to `freq_axis_hz()[n - 1 - i]`.
    pub fn scale_set(&self) -> Vec<f64> {
        self.freq_axis_hz()
            .iter()
            .rev()
            .map(|f| self.omega0 / (2.0 * std::f64::consts::PI * f))
            .collect()
    }

    /// Sample indices at which the time bins sit: bin centres of an even split.
    pub fn time_indices(&self, n_samples: usize) -> Vec<usize> {
        let nt = self.n_time_bins;
        (0..nt).map(|i| ((2 * i + 1) * n_samples) / (2 * nt)).collect()
    }
}

/// Real-valued time x frequency matrix with axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub kind: TransformKind,
    pub n_time: usize,
    pub n_freq: usize,
    /// Row-major, `values[t * n_freq + f]`.
    pub values: Vec<f64>,
    pub time_axis_s: Vec<f64>,
    pub freq_axis_hz: Vec<f64>,
    /// Time bins whose wavelet support reaches past the record ends (scalogram only).
    pub edge_affected: Vec<bool>,
}

impl Spectrogram {
    pub fn new(
        kind: TransformKind,
        values: Vec<f64>,
        time_axis_s: Vec<f64>,
        freq_axis_hz: Vec<f64>,
    ) -> Result<Self> {
        let (n_time, n_freq) = (time_axis_s.len(), freq_axis_hz.len());
        if values.len() != n_time * n_freq {
            return Err(Error::dimension(format!(
                "{} values for a {n_time} x {n_freq} grid",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical { path: format!("{} spectrogram", kind.name()), message: "non-finite value".into() });
        }
        let increasing = |a: &[f64]| a.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&time_axis_s) || !increasing(&freq_axis_hz) {
            return Err(Error::dimension("spectrogram axes must be strictly increasing"));
        }
        Ok(Spectrogram { kind, n_time, n_freq, values, time_axis_s, freq_axis_hz, edge_affected: vec![false; n_time] })
    }

    pub fn get(&self, t: usize, f: usize) -> f64 {
        self.values[t * self.n_freq + f]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Mean over time of each frequency bin.
    pub fn time_average(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.n_freq];
        for row in self.values.chunks_exact(self.n_freq) {
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v;
            }
        }
        acc.iter().map(|a| a / self.n_time as f64).collect()
    }

    pub fn scaled(&self, factor: f64) -> Spectrogram {
        Spectrogram { values: self.values.iter().map(|v| v * factor).collect(), ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_peaks_at_centre() {
        let h = WindowShape::Hamming.taps(257);
        assert_eq!(h.len(), 257);
        assert!((h[128] - 1.0).abs() < 1e-15);
        assert!((h[0] - 0.08).abs() < 1e-12);
        assert!((h[0] - h[256]).abs() < 1e-15);
    }

    #[test]
    fn scale_set_increases() {
        let g = TfGridSpec::default();
        let s = g.scale_set();
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        let f = g.freq_axis_hz();
        let a_top = 6.0 / (2.0 * std::f64::consts::PI * f[255]);
        assert!((s[0] - a_top).abs() < 1e-18);
    }

    #[test]
    fn time_indices_cover_every_sample_when_dense() {
        let g = TfGridSpec { n_time_bins: 10, ..TfGridSpec::default() };
        assert_eq!(g.time_indices(10), (0..10).collect::<Vec<_>>());
        assert_eq!(g.time_indices(100)[0], 5);
    }
}
