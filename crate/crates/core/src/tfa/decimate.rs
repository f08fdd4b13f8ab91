use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::sigsynth::{ComplexSignal, SamplingGrid};

/// Reduces the sample rate by `factor`, keeping only the band
/// `[0, fs / (2 factor))` of the input spectrum.
///
/// The whole record is transformed once, every bin outside the kept band
/// (including all negative frequencies) is dropped, and the remainder is
/// inverse-transformed at the shorter length. Samples beyond the largest
/// multiple of `factor` are discarded.
pub fn decimate_analytic(signal: &ComplexSignal, factor: usize) -> Result<ComplexSignal> {
    if factor == 0 {
        return Err(Error::config("decimation factor must be at least 1"));
    }
    if factor == 1 {
        return Ok(signal.clone());
    }
    let m = signal.len() / factor;
    if m < 2 {
        return Err(Error::dimension(format!(
            "{} samples cannot be decimated by {factor}",
            signal.len()
        )));
    }
    let n = m * factor;
    let mut planner = FftPlanner::<f64>::new();
    let mut spec: Vec<Complex64> = signal.samples()[..n].to_vec();
    planner.plan_fft_forward(n).process(&mut spec);

    let keep = m.div_ceil(2);
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    out[..keep].copy_from_slice(&spec[..keep]);
    planner.plan_fft_inverse(m).process(&mut out);
    let scale = 1.0 / n as f64;
    for v in &mut out {
        *v *= scale;
    }
    let grid = SamplingGrid::with_samples(signal.grid().sample_rate_hz() / factor as f64, m)?;
    ComplexSignal::new(grid, out)
}
