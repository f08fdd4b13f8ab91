//! Random interference parameters for corpus generation.

use std::f64::consts::PI;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed, StageRng, Stream};
use crate::sigsynth::{
    AmplitudeMeasure, CombSpectrumParams, CombTooth, FhParams, FixedToneParams, GridSpec, InterferenceKind,
    InterferenceSpec, LinearSweepParams, PeriodicPulseParams, ScenarioSpec, Tone,
};

use super::classes::class_by_id;

/// Parameter distributions for the four interference families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub grid: GridSpec,
    /// FH template; its hop-sequence seed is replaced per scenario.
    pub fh: FhParams,
    pub amplitude_range: [f64; 2],
    pub tone_freqs_hz: Vec<f64>,
    pub max_tones: usize,
    pub sweep_start_hz: [f64; 2],
    pub sweep_bandwidth_hz: [f64; 2],
    pub sweep_period_s: [f64; 2],
    pub pulse_period_s: [f64; 2],
    pub pulse_duty: [f64; 2],
    pub comb_teeth: [usize; 2],
    pub comb_band_hz: [f64; 2],
    pub noise_snr_db: Option<f64>,
    pub amplitude_measure: AmplitudeMeasure,
}

/// Sweep period range as printed in the interference parameter table; far
/// shorter than the default and only reachable through configuration.
pub const TABLE_LITERAL_SWEEP_PERIOD_S: [f64; 2] = [1e-6, 5e-6];

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            grid: GridSpec::default(),
            fh: FhParams::default(),
            amplitude_range: [0.5, 1.5],
            tone_freqs_hz: vec![80e3, 160e3, 200e3],
            max_tones: 3,
            sweep_start_hz: [0.0, 100e3],
            sweep_bandwidth_hz: [50e3, 100e3],
            sweep_period_s: [1e-3, 5e-3],
            pulse_period_s: [3e-5, 8e-5],
            pulse_duty: [0.2, 0.5],
            comb_teeth: [4, 8],
            comb_band_hz: [90e3, 210e3],
            noise_snr_db: Some(10.0),
            amplitude_measure: AmplitudeMeasure::MeanAbs,
        }
    }
}

impl SamplerConfig {
    pub fn with_table_literal_sweep_period(mut self) -> Self {
        self.sweep_period_s = TABLE_LITERAL_SWEEP_PERIOD_S;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ranges = [
            ("amplitude", self.amplitude_range),
            ("sweep start", self.sweep_start_hz),
            ("sweep bandwidth", self.sweep_bandwidth_hz),
            ("sweep period", self.sweep_period_s),
            ("pulse period", self.pulse_period_s),
            ("pulse duty", self.pulse_duty),
            ("comb band", self.comb_band_hz),
        ];
        for (name, [lo, hi]) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::config(format!("{name} range [{lo}, {hi}] is malformed")));
            }
        }
        if !(self.pulse_duty[0] > 0.0 && self.pulse_duty[1] < 1.0) {
            return Err(Error::config("pulse duty must lie strictly between 0 and 1"));
        }
        if self.pulse_period_s[0] <= 0.0 || self.sweep_period_s[0] <= 0.0 {
            return Err(Error::config("periods must be positive"));
        }
        if self.tone_freqs_hz.is_empty() || self.max_tones == 0 {
            return Err(Error::config("fixed tones need at least one frequency"));
        }
        if self.comb_teeth[0] < 2 || self.comb_teeth[0] > self.comb_teeth[1] {
            return Err(Error::config("comb needs at least two teeth"));
        }
        self.fh.validate()
    }

    fn uniform(rng: &mut StageRng, [lo, hi]: [f64; 2]) -> f64 {
        if lo == hi {
            lo
        } else {
            rng.random_range(lo..hi)
        }
    }

    fn amplitude(&self, rng: &mut StageRng) -> f64 {
        Self::uniform(rng, self.amplitude_range)
    }

    fn phase(rng: &mut StageRng) -> f64 {
        rng.random_range(0.0..2.0 * PI)
    }

    pub fn sample_interference(&self, kind: InterferenceKind, rng: &mut StageRng) -> InterferenceSpec {
        match kind {
            InterferenceKind::FixedTone => {
                let n = rng.random_range(1..=self.max_tones.min(self.tone_freqs_hz.len()));
                let mut picks = sample_indices(rng, self.tone_freqs_hz.len(), n).into_vec();
                picks.sort_unstable();
                let tones = picks
                    .into_iter()
                    .map(|i| Tone { amplitude: self.amplitude(rng), freq_hz: self.tone_freqs_hz[i], phase_rad: Self::phase(rng) })
                    .collect();
                InterferenceSpec::FixedTone(FixedToneParams { tones })
            }
            InterferenceKind::LinearSweep => {
                let amplitude = self.amplitude(rng);
                let start = Self::uniform(rng, self.sweep_start_hz);
                let bw = Self::uniform(rng, self.sweep_bandwidth_hz);
                let period = Self::uniform(rng, self.sweep_period_s);
                InterferenceSpec::LinearSweep(LinearSweepParams {
                    amplitude,
                    start_freq_hz: start,
                    sweep_rate_hz_per_s: bw / period,
                    phase_rad: Self::phase(rng),
                    sweep_period_s: period,
                })
            }
            InterferenceKind::PeriodicPulse => {
                let amplitude = self.amplitude(rng);
                let period = Self::uniform(rng, self.pulse_period_s);
                let duty = Self::uniform(rng, self.pulse_duty);
                InterferenceSpec::PeriodicPulse(PeriodicPulseParams { amplitude, period_s: period, width_s: duty * period, carrier_hz: None })
            }
            InterferenceKind::CombSpectrum => {
                let n = rng.random_range(self.comb_teeth[0]..=self.comb_teeth[1]);
                let [lo, hi] = self.comb_band_hz;
                let teeth = (0..n)
                    .map(|i| {
                        let f = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                        CombTooth::constant(self.amplitude(rng), f, Self::phase(rng))
                    })
                    .collect();
                InterferenceSpec::CombSpectrum(CombSpectrumParams { teeth })
            }
        }
    }

    /// Draws a scenario of class `class_id` at `jsr_db`, fully determined by `seed`.
    pub fn sample_scenario(&self, class_id: u8, jsr_db: f64, seed: u64) -> Result<ScenarioSpec> {
        let class = class_by_id(class_id)?;
        let mut rng = rng_from_seed(seed);
        let interferences = class.members.iter().map(|&k| self.sample_interference(k, &mut rng)).collect();
        let mut fh = self.fh.clone();
        fh.hop_sequence_seed = derive_seed(seed, Stream::Hops, 0);
        Ok(ScenarioSpec {
            grid: self.grid,
            fh,
            interferences,
            jsr_db,
            noise_snr_db: self.noise_snr_db,
            rng_seed: seed,
            amplitude_measure: self.amplitude_measure,
        })
    }
}
