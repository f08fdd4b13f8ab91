use num_complex::Complex64;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{ComplexSignal, SamplingGrid};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// How the "average amplitude" of a record is measured for JSR purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeMeasure {
    /// Mean of `|x[n]|`.
    #[default]
    MeanAbs,
    /// `sqrt(mean |x[n]|^2)`.
    Rms,
}

pub fn average_amplitude(sig: &ComplexSignal, measure: AmplitudeMeasure) -> f64 {
    let n = sig.len() as f64;
    match measure {
        AmplitudeMeasure::MeanAbs => sig.samples().iter().map(|z| z.norm()).sum::<f64>() / n,
        AmplitudeMeasure::Rms => (sig.energy() / n).sqrt(),
    }
}

/// `JSR = 20 log10(V_jam / V_sig)` in dB.
pub fn measure_jsr_db(jam: &ComplexSignal, sig: &ComplexSignal, measure: AmplitudeMeasure) -> Result<f64> {
    let vs = average_amplitude(sig, measure);
    if !(vs > 0.0) {
        return Err(Error::Degenerate("desired signal has zero average amplitude".into()));
    }
    let vj = average_amplitude(jam, measure);
    if !(vj > 0.0) {
        return Err(Error::Degenerate("interference has zero average amplitude".into()));
    }
    Ok(20.0 * (vj / vs).log10())
}

/// Rescales `jam` so that its measured JSR against `sig` equals `jsr_db`.
pub fn scale_to_jsr(
    jam: &ComplexSignal,
    sig: &ComplexSignal,
    jsr_db: f64,
    measure: AmplitudeMeasure,
) -> Result<ComplexSignal> {
    if jam.grid() != sig.grid() {
        return Err(Error::dimension("interference and signal grids differ"));
    }
    let vs = average_amplitude(sig, measure);
    if !(vs > 0.0) {
        return Err(Error::Degenerate("desired signal has zero average amplitude".into()));
    }
    let vj = average_amplitude(jam, measure);
    if !(vj > 0.0) {
        return Err(Error::Degenerate("interference has zero average amplitude".into()));
    }
    let target = vs * 10f64.powf(jsr_db / 20.0);
    Ok(jam.scaled(target / vj))
}

/// Additive white Gaussian noise specification; SNR is relative to the desired signal's power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub snr_db: f64,
    pub seed: u64,
}

/// Circular complex white Gaussian noise of total power `power`.
pub fn awgn(grid: &SamplingGrid, power: f64, seed: u64) -> Result<ComplexSignal> {
    let sigma = (power / 2.0).sqrt();
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::config(format!("noise power {power}: {e}")))?;
    let mut rng = rng_from_seed(seed);
    let samples = (0..grid.n_samples())
        .map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
        .collect();
    ComplexSignal::new(*grid, samples)
}

/// `r = s + sum_j J_j + n`.
///
/// The interference terms are summed first and then added to `s`; with two
/// terms that makes the result independent of their order bit for bit.
pub fn mix(sig: &ComplexSignal, jams: &[ComplexSignal], noise: Option<NoiseSpec>) -> Result<ComplexSignal> {
    if let Some(j) = jams.iter().find(|j| j.grid() != sig.grid()) {
        return Err(Error::dimension(format!(
            "interference grid ({} samples @ {} Hz) differs from signal grid ({} samples @ {} Hz)",
            j.grid().n_samples(),
            j.grid().sample_rate_hz(),
            sig.grid().n_samples(),
            sig.grid().sample_rate_hz()
        )));
    }
    let mut out: Vec<Complex64> = sig.samples().to_vec();
    if let Some((first, rest)) = jams.split_first() {
        let mut total: Vec<Complex64> = first.samples().to_vec();
        for j in rest {
            for (t, x) in total.iter_mut().zip(j.samples()) {
                *t += x;
            }
        }
        for (o, t) in out.iter_mut().zip(&total) {
            *o += t;
        }
    }
    if let Some(ns) = noise {
        let p_sig = sig.mean_power();
        if !(p_sig > 0.0) {
            return Err(Error::Degenerate("cannot set SNR against a zero signal".into()));
        }
        let n = awgn(sig.grid(), p_sig / 10f64.powf(ns.snr_db / 10.0), ns.seed)?;
        for (o, x) in out.iter_mut().zip(n.samples()) {
            *o += x;
        }
    }
    ComplexSignal::new(*sig.grid(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigsynth::{gen_fixed_tone, FixedToneParams, Tone};

    fn tone(f: f64, a: f64) -> ComplexSignal {
        let g = SamplingGrid::new(1e6, 0.01).unwrap();
        gen_fixed_tone(&FixedToneParams { tones: vec![Tone { amplitude: a, freq_hz: f, phase_rad: 0.3 }] }, &g)
            .unwrap()
    }

    #[test]
    fn zero_db_equalizes_amplitudes() {
        let s = tone(100e3, 1.0);
        let j = scale_to_jsr(&tone(50e3, 0.7), &s, 0.0, AmplitudeMeasure::MeanAbs).unwrap();
        let r = average_amplitude(&j, AmplitudeMeasure::MeanAbs) / average_amplitude(&s, AmplitudeMeasure::MeanAbs);
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn twenty_db_is_factor_ten() {
        let s = tone(100e3, 1.0);
        for m in [AmplitudeMeasure::MeanAbs, AmplitudeMeasure::Rms] {
            let j = scale_to_jsr(&tone(50e3, 1.3), &s, 20.0, m).unwrap();
            let r = average_amplitude(&j, m) / average_amplitude(&s, m);
            assert!((r - 10.0).abs() < 1e-12, "{m:?}: {r}");
        }
    }

    #[test]
    fn zero_signal_is_degenerate() {
        let s = ComplexSignal::zeros(*tone(1.0, 1.0).grid());
        assert!(matches!(
            scale_to_jsr(&tone(50e3, 1.0), &s, 0.0, AmplitudeMeasure::MeanAbs),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn identity_mix() {
        let s = tone(100e3, 1.0);
        assert_eq!(mix(&s, &[], None).unwrap(), s);
    }

    #[test]
    fn grid_mismatch_rejected() {
        let s = tone(100e3, 1.0);
        let other = SamplingGrid::new(2e6, 0.01).unwrap();
        let j = ComplexSignal::zeros(other);
        assert!(matches!(mix(&s, &[j], None), Err(Error::Dimension(_))));
    }

    #[test]
    fn two_jams_commute_bit_exact() {
        let s = tone(100e3, 1.0);
        let a = tone(31e3, 0.77);
        let b = tone(47e3, 1.31);
        let noise = Some(NoiseSpec { snr_db: 5.0, seed: 9 });
        assert_eq!(mix(&s, &[a.clone(), b.clone()], noise).unwrap(), mix(&s, &[b, a], noise).unwrap());
    }
}
