//! The four interference families and their analytic waveforms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{ComplexSignal, SamplingGrid};
use crate::error::{Error, Result};

/// Interference families, in their canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferenceKind {
    FixedTone,
    LinearSweep,
    PeriodicPulse,
    CombSpectrum,
}

impl InterferenceKind {
    pub const ALL: [InterferenceKind; 4] = [
        InterferenceKind::FixedTone,
        InterferenceKind::LinearSweep,
        InterferenceKind::PeriodicPulse,
        InterferenceKind::CombSpectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InterferenceKind::FixedTone => "fixed_tone",
            InterferenceKind::LinearSweep => "linear_sweep",
            InterferenceKind::PeriodicPulse => "periodic_pulse",
            InterferenceKind::CombSpectrum => "comb_spectrum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub amplitude: f64,
    pub freq_hz: f64,
    #[serde(default)]
    pub phase_rad: f64,
}

/// `J(t) = sum_i A_i cos(2 pi f_i t + phi_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedToneParams {
    pub tones: Vec<Tone>,
}

/// `J(t) = A cos(2 pi f0 t' + pi mu0 t'^2 + phi0)` with `t' = t mod period`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSweepParams {
    pub amplitude: f64,
    pub start_freq_hz: f64,
    /// Sweep slope in Hz/s.
    pub sweep_rate_hz_per_s: f64,
    #[serde(default)]
    pub phase_rad: f64,
    pub sweep_period_s: f64,
}

/// `J(t) = sum_i A g_tau(t - iT)`.
///
/// With `carrier_hz = None` the pulses are baseband rectangles; otherwise each
/// pulse gates a complex carrier at that frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPulseParams {
    pub amplitude: f64,
    pub period_s: f64,
    pub width_s: f64,
    #[serde(default)]
    pub carrier_hz: Option<f64>,
}

impl PeriodicPulseParams {
    pub fn duty_factor(&self) -> f64 {
        self.width_s / self.period_s
    }
}

/// One tooth of a comb: `A (1 + m cos(2 pi r_a t)) cos(2 pi f t + phi + d sin(2 pi r_p t))`.
///
/// The modulation terms default to zero, giving constant envelope and phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombTooth {
    pub amplitude: f64,
    pub freq_hz: f64,
    #[serde(default)]
    pub phase_rad: f64,
    #[serde(default)]
    pub am_depth: f64,
    #[serde(default)]
    pub am_rate_hz: f64,
    #[serde(default)]
    pub pm_deviation_rad: f64,
    #[serde(default)]
    pub pm_rate_hz: f64,
}

impl CombTooth {
    pub fn constant(amplitude: f64, freq_hz: f64, phase_rad: f64) -> Self {
        CombTooth {
            amplitude,
            freq_hz,
            phase_rad,
            am_depth: 0.0,
            am_rate_hz: 0.0,
            pm_deviation_rad: 0.0,
            pm_rate_hz: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombSpectrumParams {
    pub teeth: Vec<CombTooth>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterferenceSpec {
    FixedTone(FixedToneParams),
    LinearSweep(LinearSweepParams),
    PeriodicPulse(PeriodicPulseParams),
    CombSpectrum(CombSpectrumParams),
}

impl InterferenceSpec {
    pub fn kind(&self) -> InterferenceKind {
        match self {
            InterferenceSpec::FixedTone(_) => InterferenceKind::FixedTone,
            InterferenceSpec::LinearSweep(_) => InterferenceKind::LinearSweep,
            InterferenceSpec::PeriodicPulse(_) => InterferenceKind::PeriodicPulse,
            InterferenceSpec::CombSpectrum(_) => InterferenceKind::CombSpectrum,
        }
    }

    /// Frequency extent `[low, high]` occupied by the interference, when it has one.
    pub fn frequency_extent_hz(&self) -> Option<[f64; 2]> {
        let span = |it: &mut dyn Iterator<Item = f64>| {
            it.fold(None, |acc: Option<[f64; 2]>, f| match acc {
                None => Some([f, f]),
                Some([lo, hi]) => Some([lo.min(f), hi.max(f)]),
            })
        };
        match self {
            InterferenceSpec::FixedTone(p) => span(&mut p.tones.iter().map(|t| t.freq_hz)),
            InterferenceSpec::LinearSweep(p) => Some([
                p.start_freq_hz,
                p.start_freq_hz + p.sweep_rate_hz_per_s * p.sweep_period_s,
            ]),
            InterferenceSpec::PeriodicPulse(p) => p.carrier_hz.map(|c| [c, c]),
            InterferenceSpec::CombSpectrum(p) => span(&mut p.teeth.iter().map(|t| t.freq_hz)),
        }
    }
}

pub fn generate_interference(spec: &InterferenceSpec, grid: &SamplingGrid) -> Result<ComplexSignal> {
    match spec {
        InterferenceSpec::FixedTone(p) => gen_fixed_tone(p, grid),
        InterferenceSpec::LinearSweep(p) => gen_linear_sweep(p, grid),
        InterferenceSpec::PeriodicPulse(p) => gen_periodic_pulse(p, grid),
        InterferenceSpec::CombSpectrum(p) => gen_comb_spectrum(p, grid),
    }
}

pub fn gen_fixed_tone(params: &FixedToneParams, grid: &SamplingGrid) -> Result<ComplexSignal> {
    if params.tones.is_empty() {
        return Err(Error::config("fixed-tone interference needs at least one tone"));
    }
    for tone in &params.tones {
        grid.check_nyquist(tone.freq_hz, "fixed tone")?;
    }
    let mut samples = vec![Complex64::new(0.0, 0.0); grid.n_samples()];
    for tone in &params.tones {
        add_tone(&mut samples, grid, tone.amplitude, tone.freq_hz, tone.phase_rad);
    }
    ComplexSignal::new(*grid, samples)
}

fn add_tone(out: &mut [Complex64], grid: &SamplingGrid, amplitude: f64, freq_hz: f64, phase: f64) {
    let w = 2.0 * PI * freq_hz;
    for (n, z) in out.iter_mut().enumerate() {
        *z += Complex64::from_polar(amplitude, w * grid.time(n) + phase);
    }
}

pub fn gen_linear_sweep(params: &LinearSweepParams, grid: &SamplingGrid) -> Result<ComplexSignal> {
    let p = params;
    if !(p.start_freq_hz >= 0.0) {
        return Err(Error::config("sweep start frequency must be non-negative"));
    }
    if !(p.sweep_period_s > 0.0) {
        return Err(Error::config("sweep period must be positive"));
    }
    let stop = p.start_freq_hz + p.sweep_rate_hz_per_s * p.sweep_period_s;
    grid.check_nyquist(p.start_freq_hz.max(stop), "linear sweep")?;
    let samples = (0..grid.n_samples())
        .map(|n| {
            let t = grid.time(n).rem_euclid(p.sweep_period_s);
            let phase = 2.0 * PI * p.start_freq_hz * t + PI * p.sweep_rate_hz_per_s * t * t + p.phase_rad;
            Complex64::from_polar(p.amplitude, phase)
        })
        .collect();
    ComplexSignal::new(*grid, samples)
}

pub fn gen_periodic_pulse(params: &PeriodicPulseParams, grid: &SamplingGrid) -> Result<ComplexSignal> {
    let p = params;
    if !(p.period_s > 0.0 && p.width_s > 0.0 && p.width_s < p.period_s) {
        return Err(Error::config(format!(
            "pulse width {} s must lie strictly inside (0, period {} s)",
            p.width_s, p.period_s
        )));
    }
    let gate = |n: usize| grid.time(n).rem_euclid(p.period_s) < p.width_s;
    match p.carrier_hz {
        Some(fc) => {
            grid.check_nyquist(fc, "pulse carrier")?;
            let w = 2.0 * PI * fc;
            let samples = (0..grid.n_samples())
                .map(|n| {
                    if gate(n) {
                        Complex64::from_polar(p.amplitude, w * grid.time(n))
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            ComplexSignal::new(*grid, samples)
        }
        None => {
            let real: Vec<f64> = (0..grid.n_samples())
                .map(|n| if gate(n) { p.amplitude } else { 0.0 })
                .collect();
            analytic_from_real(&real, grid)
        }
    }
}

pub fn gen_comb_spectrum(params: &CombSpectrumParams, grid: &SamplingGrid) -> Result<ComplexSignal> {
    let teeth = &params.teeth;
    if teeth.len() < 2 {
        return Err(Error::config(
            "comb interference needs at least two teeth; a single tone is fixed-tone interference",
        ));
    }
    if teeth.windows(2).any(|w| !(w[1].freq_hz > w[0].freq_hz)) {
        return Err(Error::config("comb frequencies must be strictly increasing and distinct"));
    }
    for tooth in teeth {
        grid.check_nyquist(tooth.freq_hz, "comb tooth")?;
    }
    let mut samples = vec![Complex64::new(0.0, 0.0); grid.n_samples()];
    for tooth in teeth {
        if tooth.am_depth == 0.0 && tooth.pm_deviation_rad == 0.0 {
            add_tone(&mut samples, grid, tooth.amplitude, tooth.freq_hz, tooth.phase_rad);
            continue;
        }
        for (n, z) in samples.iter_mut().enumerate() {
            let t = grid.time(n);
            let env = tooth.amplitude * (1.0 + tooth.am_depth * (2.0 * PI * tooth.am_rate_hz * t).cos());
            let phase = 2.0 * PI * tooth.freq_hz * t
                + tooth.phase_rad
                + tooth.pm_deviation_rad * (2.0 * PI * tooth.pm_rate_hz * t).sin();
            *z += Complex64::from_polar(env, phase);
        }
    }
    ComplexSignal::new(*grid, samples)
}

/// `x + j H{x}` via the one-sided spectrum. The real part is copied from the
/// input unchanged, so only the imaginary part carries FFT rounding.
pub fn analytic_from_real(real: &[f64], grid: &SamplingGrid) -> Result<ComplexSignal> {
    let n = real.len();
    if n != grid.n_samples() {
        return Err(Error::dimension("real record length differs from grid"));
    }
    let mut buf: Vec<Complex64> = real.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, z) in buf.iter_mut().enumerate() {
        let gain = if k == 0 || (n % 2 == 0 && k == n / 2) {
            1.0
        } else if k < n.div_ceil(2) {
            2.0
        } else {
            0.0
        };
        *z *= gain;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let samples = buf
        .iter()
        .zip(real)
        .map(|(z, &x)| Complex64::new(x, z.im * scale))
        .collect();
    ComplexSignal::new(*grid, samples)
}
