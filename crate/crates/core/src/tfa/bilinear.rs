//! Margenau-Hill and Born-Jordan distributions.
//!
//! Both are evaluated by building, for each time bin, a lag sequence and
//! taking its zoom DFT onto the analysis frequencies. The Margenau-Hill lag
//! variable is the full product lag `tau` (frequency period `fs`); the
//! Born-Jordan lag is the half-lag `m` of `x(u + m) x*(u - m)` (period `fs/2`).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::czt::ZoomDft;
use super::{Spectrogram, TfGridSpec, TransformKind};
use crate::error::Result;
use crate::sigsynth::ComplexSignal;

fn axes(signal: &ComplexSignal, grid: &TfGridSpec) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let times = grid.time_indices(signal.len());
    let dt = signal.grid().dt();
    let t_axis = times.iter().map(|&n| n as f64 * dt).collect();
    (times, t_axis, grid.freq_axis_hz())
}

/// Margenau-Hill distribution.
///
/// Windowed: `dt Re{ x*(n) sum_{|tau| <= M} h(tau) x(n + tau) e^{-j 2 pi f tau / fs} }`.
/// Unwindowed: `dt Re{ x(n) X*(f) e^{-j 2 pi f n / fs} }` with `X` the DFT of
/// the whole record at frequency `f`.
pub fn mhd(signal: &ComplexSignal, grid: &TfGridSpec) -> Result<Spectrogram> {
    grid.validate_for(signal)?;
    let fs = signal.grid().sample_rate_hz();
    let dt = 1.0 / fs;
    let x = signal.samples();
    let n = x.len();
    let taps = grid.lag_taps(n)?;
    let (times, t_axis, freqs) = axes(signal, grid);
    let nf = freqs.len();
    let (f0, df) = (freqs[0], grid.freq_step_hz());
    let mut values = vec![0.0; times.len() * nf];

    match taps {
        None => {
            let z = ZoomDft::new(n, nf, f0, df, 1.0 / fs);
            let spectrum = z.transform(x);
            for (ti, &c) in times.iter().enumerate() {
                for (k, &f) in freqs.iter().enumerate() {
                    let rot = Complex64::from_polar(1.0, -2.0 * PI * ((f * c as f64 / fs).rem_euclid(1.0)));
                    values[ti * nf + k] = dt * (x[c] * spectrum[k].conj() * rot).re;
                }
            }
        }
        Some(h) => {
            let half = h.len() / 2;
            let z = ZoomDft::new(h.len(), nf, f0, df, 1.0 / fs);
            // Lag index i stands for tau = i - half; undo that offset afterwards.
            let shift: Vec<Complex64> = freqs
                .iter()
                .map(|&f| Complex64::from_polar(1.0, 2.0 * PI * ((f * half as f64 / fs).rem_euclid(1.0))))
                .collect();
            let mut seq = vec![Complex64::new(0.0, 0.0); h.len()];
            let mut out = vec![Complex64::new(0.0, 0.0); nf];
            let mut scratch = Vec::new();
            for (ti, &c) in times.iter().enumerate() {
                let xc = x[c].conj();
                for (i, s) in seq.iter_mut().enumerate() {
                    let idx = c as isize + i as isize - half as isize;
                    *s = if idx >= 0 && (idx as usize) < n { xc * x[idx as usize] * h[i] } else { Complex64::new(0.0, 0.0) };
                }
                z.process(&seq, &mut out, &mut scratch);
                for k in 0..nf {
                    values[ti * nf + k] = dt * (out[k] * shift[k]).re;
                }
            }
        }
    }
    Spectrogram::new(TransformKind::Mhd, values, t_axis, freqs)
}

/// Averaging half-width (in samples) of the Born-Jordan kernel at half-lag `m`.
pub(crate) fn bjd_half_width(a: f64, m: usize) -> usize {
    (2.0 * a * m as f64).round() as usize
}

/// Born-Jordan distribution.
///
/// With `K(n, m) = 1/(2w+1) sum_{u=n-w}^{n+w} x(u+m) x*(u-m)`, `w = round(2 a |m|)`,
/// the value is `2 dt Re{ sum_m h(m) K(n, m) e^{-j 4 pi f m / fs} }`. A lag
/// contributes only when its whole averaging window lies inside the record.
pub fn bjd(signal: &ComplexSignal, grid: &TfGridSpec) -> Result<Spectrogram> {
    grid.validate_for(signal)?;
    let fs = signal.grid().sample_rate_hz();
    let dt = 1.0 / fs;
    let x = signal.samples();
    let n = x.len();
    let taps = grid.lag_taps(n)?;
    let max_lag = match &taps {
        Some(h) => h.len() / 2,
        None => n / 2,
    };
    let weight = |m: usize| taps.as_ref().map_or(1.0, |h| h[h.len() / 2 + m]);
    let (times, t_axis, freqs) = axes(signal, grid);
    let nf = freqs.len();
    let z = ZoomDft::new(max_lag + 1, nf, freqs[0], grid.freq_step_hz(), 2.0 / fs);
    let mut values = vec![0.0; times.len() * nf];
    let mut seq = vec![Complex64::new(0.0, 0.0); max_lag + 1];
    let mut out = vec![Complex64::new(0.0, 0.0); nf];
    let mut scratch = Vec::new();

    for (ti, &c) in times.iter().enumerate() {
        seq.iter_mut().for_each(|s| *s = Complex64::new(0.0, 0.0));
        for m in 0..=max_lag {
            let w = bjd_half_width(grid.bjd_a, m);
            if c < w + m || c + w + m > n - 1 {
                continue;
            }
            let sum: Complex64 = (c - w..=c + w).map(|u| x[u + m] * x[u - m].conj()).sum();
            let k = sum / (2 * w + 1) as f64;
            // Negative lags are the conjugates of positive ones and fold into Re{}.
            seq[m] = if m == 0 { k * 0.5 * weight(0) } else { k * weight(m) };
        }
        z.process(&seq, &mut out, &mut scratch);
        for k in 0..nf {
            values[ti * nf + k] = 4.0 * dt * out[k].re;
        }
    }
    Spectrogram::new(TransformKind::Bjd, values, t_axis, freqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigsynth::SamplingGrid;

    fn tone(fs: f64, n: usize, f: f64) -> ComplexSignal {
        let grid = SamplingGrid::with_samples(fs, n).unwrap();
        let x = (0..n).map(|i| Complex64::from_polar(1.0, 2.0 * PI * f * i as f64 / fs)).collect();
        ComplexSignal::new(grid, x).unwrap()
    }

    fn peak_freq(s: &Spectrogram) -> f64 {
        let avg = s.time_average();
        let k = (0..avg.len()).max_by(|&a, &b| avg[a].total_cmp(&avg[b])).unwrap();
        s.freq_axis_hz[k]
    }

    #[test]
    fn tone_ridges() {
        let sig = tone(1e6, 2048, 120e3);
        let grid = TfGridSpec { n_time_bins: 16, n_freq_bins: 121, freq_range_hz: [60e3, 180e3], window_length: Some(129), ..Default::default() };
        assert_eq!(peak_freq(&mhd(&sig, &grid).unwrap()), 120e3);
        assert_eq!(peak_freq(&bjd(&sig, &grid).unwrap()), 120e3);
    }

    #[test]
    fn window_longer_than_signal_is_clipped() {
        let sig = tone(1e6, 100, 120e3);
        let long = TfGridSpec { n_time_bins: 4, n_freq_bins: 4, freq_range_hz: [60e3, 180e3], window_length: Some(257), ..Default::default() };
        let fit = TfGridSpec { window_length: Some(99), ..long.clone() };
        assert_eq!(mhd(&sig, &long).unwrap(), mhd(&sig, &fit).unwrap());
        assert_eq!(bjd(&sig, &long).unwrap(), bjd(&sig, &fit).unwrap());
    }

    #[test]
    fn even_window_is_rejected() {
        let sig = tone(1e6, 100, 120e3);
        let grid = TfGridSpec { n_time_bins: 4, n_freq_bins: 4, freq_range_hz: [60e3, 180e3], window_length: Some(10), ..Default::default() };
        assert!(matches!(mhd(&sig, &grid), Err(crate::Error::Config(_))));
    }
}
