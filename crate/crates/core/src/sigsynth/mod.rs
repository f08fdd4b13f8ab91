//! Frequency-hopping signal and interference synthesis.
//!
//! Everything here produces analytic (complex baseband) records on a shared
//! [`SamplingGrid`]. The real part of each record is the physical waveform;
//! the imaginary part is its Hilbert transform, so bilinear distributions
//! computed downstream see positive frequencies only.

mod fh;
mod interference;
mod mix;
mod scenario;

pub use fh::{gen_fh_signal, hop_schedule, FhParams, HopSegment, Modulation};
pub use interference::{
    analytic_from_real, gen_comb_spectrum, gen_fixed_tone, gen_linear_sweep,
    gen_periodic_pulse, generate_interference, CombSpectrumParams, CombTooth,
    FixedToneParams, InterferenceKind, InterferenceSpec, LinearSweepParams,
    PeriodicPulseParams, Tone,
};
pub use mix::{
    average_amplitude, awgn, measure_jsr_db, mix, scale_to_jsr, AmplitudeMeasure, NoiseSpec,
};
pub use scenario::{synthesize, GridSpec, ScenarioSpec, Synthesized};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 16e6;

/// Uniform time grid shared by every component of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    sample_rate_hz: f64,
    duration_s: f64,
    n_samples: usize,
}

impl SamplingGrid {
    pub fn new(sample_rate_hz: f64, duration_s: f64) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::config(format!("sample rate must be positive, got {sample_rate_hz}")));
        }
        if !(duration_s.is_finite() && duration_s > 0.0) {
            return Err(Error::config(format!("duration must be positive, got {duration_s}")));
        }
        let n_samples = (sample_rate_hz * duration_s).round() as usize;
        if n_samples == 0 {
            return Err(Error::config("grid holds no samples"));
        }
        Ok(SamplingGrid { sample_rate_hz, duration_s, n_samples })
    }

    /// Grid with an explicit sample count; duration follows from it.
    pub fn with_samples(sample_rate_hz: f64, n_samples: usize) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::config("grid holds no samples"));
        }
        Self::new(sample_rate_hz, n_samples as f64 / sample_rate_hz)
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn duration_s(&self) -> f64 {
        self.duration_s
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn nyquist_hz(&self) -> f64 {
        self.sample_rate_hz / 2.0
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 / self.sample_rate_hz
    }

    pub fn check_nyquist(&self, max_freq_hz: f64, what: &str) -> Result<()> {
        if max_freq_hz.abs() >= self.nyquist_hz() {
            return Err(Error::config(format!(
                "{what}: frequency {max_freq_hz} Hz violates Nyquist for fs = {} Hz",
                self.sample_rate_hz
            )));
        }
        Ok(())
    }
}

/// Analytic record on a sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    grid: SamplingGrid,
    samples: Vec<Complex64>,
}

impl ComplexSignal {
    pub fn new(grid: SamplingGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n_samples() {
            return Err(Error::dimension(format!(
                "{} samples on a grid of {}",
                samples.len(),
                grid.n_samples()
            )));
        }
        if let Some(i) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Numerical {
                path: format!("signal sample {i}"),
                message: "non-finite value".into(),
            });
        }
        Ok(ComplexSignal { grid, samples })
    }

    pub fn zeros(grid: SamplingGrid) -> Self {
        ComplexSignal { grid, samples: vec![Complex64::new(0.0, 0.0); grid.n_samples()] }
    }

    pub fn grid(&self) -> &SamplingGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn mean_power(&self) -> f64 {
        self.energy() / self.samples.len() as f64
    }

    pub fn scaled(&self, factor: f64) -> ComplexSignal {
        ComplexSignal {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z * factor).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rounds_sample_count() {
        let g = SamplingGrid::new(16e6, 0.05).unwrap();
        assert_eq!(g.n_samples(), 800_000);
        let g = SamplingGrid::new(1000.0, 0.0105).unwrap();
        assert_eq!(g.n_samples(), 11);
    }

    #[test]
    fn grid_rejects_bad_values() {
        assert!(SamplingGrid::new(0.0, 1.0).is_err());
        assert!(SamplingGrid::new(1e6, -1.0).is_err());
        assert!(SamplingGrid::new(1.0, 0.1).is_err());
    }

    #[test]
    fn signal_rejects_nan_and_wrong_length() {
        let g = SamplingGrid::with_samples(10.0, 3).unwrap();
        let bad = vec![Complex64::new(0.0, 0.0), Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(ComplexSignal::new(g, bad), Err(Error::Numerical { .. })));
        assert!(matches!(ComplexSignal::new(g, vec![]), Err(Error::Dimension(_))));
    }
}
