use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ComplexSignal, SamplingGrid};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulation {
    Bpsk,
}

/// Frequency-hopping transmitter parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FhParams {
    pub n_hop_freqs: usize,
    pub freq_set_hz: Vec<f64>,
    /// Declared hop band `[low, high]`; every member of `freq_set_hz` lies inside.
    pub band_hz: [f64; 2],
    pub hop_rate_hops_per_s: f64,
    pub modulation: Modulation,
    pub symbol_rate_hz: f64,
    pub hop_sequence_seed: u64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for FhParams {
    /// 16 channels evenly spaced over 100-220 kHz, 100 hops/s, 10 BPSK symbols per hop.
    fn default() -> Self {
        FhParams::evenly_spaced(16, [100e3, 220e3], 100.0, 0)
    }
}

impl FhParams {
    pub fn evenly_spaced(n: usize, band_hz: [f64; 2], hop_rate: f64, hop_sequence_seed: u64) -> Self {
        let freq_set_hz = if n == 1 {
            vec![band_hz[0]]
        } else {
            (0..n)
                .map(|i| band_hz[0] + (band_hz[1] - band_hz[0]) * i as f64 / (n - 1) as f64)
                .collect()
        };
        FhParams {
            n_hop_freqs: n,
            freq_set_hz,
            band_hz,
            hop_rate_hops_per_s: hop_rate,
            modulation: Modulation::Bpsk,
            symbol_rate_hz: 10.0 * hop_rate,
            hop_sequence_seed,
            amplitude: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.freq_set_hz.is_empty() {
            return Err(Error::config("frequency set is empty"));
        }
        if self.n_hop_freqs != self.freq_set_hz.len() {
            return Err(Error::config(format!(
                "n_hop_freqs = {} but the frequency set has {} entries",
                self.n_hop_freqs,
                self.freq_set_hz.len()
            )));
        }
        let [lo, hi] = self.band_hz;
        if let Some(f) = self.freq_set_hz.iter().find(|f| !(**f >= lo && **f <= hi)) {
            return Err(Error::config(format!("hop frequency {f} Hz outside band [{lo}, {hi}]")));
        }
        if !(self.hop_rate_hops_per_s > 0.0) || !(self.symbol_rate_hz > 0.0) {
            return Err(Error::config("hop and symbol rates must be positive"));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::config("FH amplitude must be positive"));
        }
        Ok(())
    }

    pub fn max_freq_hz(&self) -> f64 {
        self.freq_set_hz.iter().fold(0.0, |m, f| m.max(f.abs()))
    }
}

/// One dwell of the hopping carrier, `[start, end)` in samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopSegment {
    pub start: usize,
    pub end: usize,
    pub freq_hz: f64,
    pub channel: usize,
}

/// Seeded uniform channel choice, never repeating the previous channel.
pub fn hop_schedule(fh: &FhParams, grid: &SamplingGrid) -> Result<Vec<HopSegment>> {
    fh.validate()?;
    let n = grid.n_samples();
    let hop_of = |i: usize| ((i as f64) * fh.hop_rate_hops_per_s / grid.sample_rate_hz()).floor() as usize;
    let n_hops = hop_of(n - 1) + 1;
    let mut rng = rng_from_seed(fh.hop_sequence_seed);
    let n_ch = fh.freq_set_hz.len();
    let mut segments = Vec::with_capacity(n_hops);
    let mut prev: Option<usize> = None;
    let mut start = 0;
    for h in 0..n_hops {
        let channel = match prev {
            Some(p) if n_ch > 1 => {
                let r = rng.random_range(0..n_ch - 1);
                if r >= p { r + 1 } else { r }
            }
            _ => rng.random_range(0..n_ch),
        };
        prev = Some(channel);
        // First sample belonging to hop h + 1.
        let mut end = ((h + 1) as f64 * grid.sample_rate_hz() / fh.hop_rate_hops_per_s).ceil() as usize;
        while end > start && hop_of(end - 1) > h {
            end -= 1;
        }
        while end < n && hop_of(end) == h {
            end += 1;
        }
        let end = end.min(n);
        segments.push(HopSegment { start, end, freq_hz: fh.freq_set_hz[channel], channel });
        start = end;
    }
    Ok(segments)
}

/// Constant-envelope BPSK on a hopping carrier.
///
/// Within a hop the phase is `2 pi f (t - t_hop) + phi_hop + pi b_k`, with a
/// random starting phase per hop and a random data bit per symbol.
pub fn gen_fh_signal(fh: &FhParams, grid: &SamplingGrid, seed: u64) -> Result<ComplexSignal> {
    fh.validate()?;
    grid.check_nyquist(fh.max_freq_hz(), "FH carrier")?;
    let schedule = hop_schedule(fh, grid)?;
    let fs = grid.sample_rate_hz();
    let mut rng = rng_from_seed(seed);
    let n_symbols = ((grid.n_samples() as f64) * fh.symbol_rate_hz / fs).ceil() as usize + 1;
    let bits: Vec<bool> = (0..n_symbols).map(|_| rng.random::<bool>()).collect();
    let hop_phase: Vec<f64> = schedule.iter().map(|_| rng.random_range(0.0..2.0 * PI)).collect();

    let mut samples = Vec::with_capacity(grid.n_samples());
    for (seg, phi0) in schedule.iter().zip(&hop_phase) {
        let t0 = grid.time(seg.start);
        for i in seg.start..seg.end {
            let t = grid.time(i);
            let sym = ((i as f64) * fh.symbol_rate_hz / fs).floor() as usize;
            let flip = if bits[sym] { PI } else { 0.0 };
            let phase = 2.0 * PI * seg.freq_hz * (t - t0) + phi0 + flip;
            samples.push(Complex64::from_polar(fh.amplitude, phase));
        }
    }
    ComplexSignal::new(*grid, samples)
}
