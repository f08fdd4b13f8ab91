use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Spectrogram, TfGridSpec, TransformKind};
use crate::error::{Error, Result};
use crate::sigsynth::ComplexSignal;

/// Half-width, in scale units, where the Morlet envelope drops to 1e-3.
pub(crate) fn effective_half_support() -> f64 {
    (2.0 * 1000f64.ln()).sqrt()
}

/// Fewest samples the effective wavelet support may cover.
pub const MIN_SUPPORT_SAMPLES: usize = 8;

/// Complex wavelet coefficients on the analysis grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CwtCoefficients {
    pub n_time: usize,
    pub n_freq: usize,
    /// Row-major, `values[t * n_freq + f]`, frequency increasing.
    pub values: Vec<Complex64>,
    pub time_axis_s: Vec<f64>,
    pub freq_axis_hz: Vec<f64>,
    pub edge_affected: Vec<bool>,
}

impl CwtCoefficients {
    pub fn get(&self, t: usize, f: usize) -> Complex64 {
        self.values[t * self.n_freq + f]
    }
}

fn morlet_taps(scale_s: f64, fs: f64, omega0: f64, cutoff: f64) -> (usize, Vec<Complex64>) {
    let width = fs * scale_s;
    let half = (cutoff * width).floor() as usize;
    let norm = PI.powf(-0.25) / scale_s.sqrt() / fs;
    let taps = (0..=2 * half)
        .map(|i| {
            let u = (i as f64 - half as f64) / width;
            Complex64::from_polar(norm * (-0.5 * u * u).exp(), -omega0 * u)
        })
        .collect();
    (half, taps)
}

/// Morlet wavelet transform evaluated at the grid's time bins and at the
/// scales matching its frequency axis.
pub fn cwt_complex(signal: &ComplexSignal, grid: &TfGridSpec) -> Result<CwtCoefficients> {
    grid.validate_for(signal)?;
    let fs = signal.grid().sample_rate_hz();
    let n = signal.len();
    let x = signal.samples();
    let freqs = grid.freq_axis_hz();
    let times = grid.time_indices(n);
    let nf = freqs.len();
    let eff = effective_half_support();

    let mut banks = Vec::with_capacity(nf);
    for &f in &freqs {
        let a = grid.omega0 / (2.0 * PI * f);
        let covered = 2 * (eff * fs * a).floor() as usize + 1;
        if covered < MIN_SUPPORT_SAMPLES {
            return Err(Error::Resolution(format!(
                "wavelet at {f} Hz spans {covered} samples at {fs} Hz, need {MIN_SUPPORT_SAMPLES}"
            )));
        }
        // Passband edge: centre plus three spectral standard deviations.
        let edge_hz = (grid.omega0 + 3.0) / (2.0 * PI * a);
        if edge_hz >= fs / 2.0 {
            return Err(Error::Resolution(format!(
                "wavelet at {f} Hz reaches {edge_hz:.0} Hz, beyond the {} Hz Nyquist limit",
                fs / 2.0
            )));
        }
        banks.push(morlet_taps(a, fs, grid.omega0, grid.cwt_cutoff));
    }

    let mut values = vec![Complex64::new(0.0, 0.0); times.len() * nf];
    for (ti, &centre) in times.iter().enumerate() {
        let row = &mut values[ti * nf..(ti + 1) * nf];
        for (slot, (half, taps)) in row.iter_mut().zip(&banks) {
            let lo = centre.saturating_sub(*half);
            let hi = (centre + half).min(n - 1);
            let first_tap = lo + half - centre;
            *slot = x[lo..=hi].iter().zip(&taps[first_tap..]).map(|(s, w)| s * w).sum();
        }
    }

    let a_max = grid.omega0 / (2.0 * PI * freqs[0]);
    let reach = (eff * fs * a_max).floor() as usize;
    let edge_affected = times.iter().map(|&c| c < reach || c + reach >= n).collect();
    let dt = signal.grid().dt();
    Ok(CwtCoefficients {
        n_time: times.len(),
        n_freq: nf,
        values,
        time_axis_s: times.iter().map(|&c| c as f64 * dt).collect(),
        freq_axis_hz: freqs,
        edge_affected,
    })
}

/// Scalogram magnitude `|CWT|`.
pub fn cwt(signal: &ComplexSignal, grid: &TfGridSpec) -> Result<Spectrogram> {
    let c = cwt_complex(signal, grid)?;
    let mut s = Spectrogram::new(
        TransformKind::Wavelet,
        c.values.iter().map(|v| v.norm()).collect(),
        c.time_axis_s,
        c.freq_axis_hz,
    )?;
    s.edge_affected = c.edge_affected;
    Ok(s)
}
