use std::f64::consts::PI;

use hopjam::sigsynth::*;
use num_complex::Complex64;
use rustfft::FftPlanner;

fn grid(fs: f64, n: usize) -> SamplingGrid {
    SamplingGrid::with_samples(fs, n).unwrap()
}

/// Per-sample frequency from the phase step between neighbours.
fn inst_freq(x: &[Complex64], fs: f64) -> Vec<f64> {
    x.windows(2).map(|w| (w[1] * w[0].conj()).arg() * fs / (2.0 * PI)).collect()
}

fn power_spectrum(x: &[Complex64]) -> Vec<f64> {
    let mut buf = x.to_vec();
    FftPlanner::<f64>::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf.iter().map(|z| z.norm_sqr()).collect()
}

#[test]
fn fh_instantaneous_frequency_stays_in_the_set() {
    let g = SamplingGrid::new(16e6, 0.05).unwrap();
    let fh = FhParams::default();
    let x = gen_fh_signal(&fh, &g, 11).unwrap();
    let fs = g.sample_rate_hz();
    let schedule = hop_schedule(&fh, &g).unwrap();
    // One bin of a DFT spanning a whole hop.
    let bin = fh.hop_rate_hops_per_s;
    let f = inst_freq(x.samples(), fs);
    let (mut inside, mut total) = (0usize, 0usize);
    for seg in &schedule {
        for i in seg.start + 1..seg.end.saturating_sub(2) {
            total += 1;
            if fh.freq_set_hz.iter().any(|&c| (f[i] - c).abs() <= bin) {
                inside += 1;
            }
        }
    }
    assert!(inside as f64 >= 0.95 * total as f64, "{inside} of {total}");
}

#[test]
fn tone_rms_over_whole_periods() {
    let (fs, f) = (16e6, 80e3);
    let periods = 20;
    let n = (periods as f64 * fs / f) as usize;
    let x = gen_fixed_tone(&FixedToneParams { tones: vec![Tone { amplitude: 1.0, freq_hz: f, phase_rad: 0.0 }] }, &grid(fs, n)).unwrap();
    let rms = (x.samples().iter().map(|z| z.re * z.re).sum::<f64>() / n as f64).sqrt();
    assert!((rms - 0.5f64.sqrt()).abs() <= 1e-9, "{rms}");
}

#[test]
fn sweep_starts_at_f0_with_slope_mu0() {
    let fs = 16e6;
    let p = LinearSweepParams { amplitude: 1.0, start_freq_hz: 40e3, sweep_rate_hz_per_s: 1.5e8, phase_rad: 0.2, sweep_period_s: 1e-3 };
    let n = (2.5e-3 * fs) as usize;
    let x = gen_linear_sweep(&p, &grid(fs, n)).unwrap();
    let f = inst_freq(x.samples(), fs);
    let bin = 1.0 / p.sweep_period_s;
    assert!((f[0] - p.start_freq_hz).abs() <= bin, "f(0+) = {}", f[0]);
    // Least-squares slope over the first period, skipping the wrap sample.
    let m = (p.sweep_period_s * fs) as usize - 1;
    let ts: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) / fs).collect();
    let (mt, mf) = (ts.iter().sum::<f64>() / m as f64, f[..m].iter().sum::<f64>() / m as f64);
    let cov: f64 = ts.iter().zip(&f[..m]).map(|(t, v)| (t - mt) * (v - mf)).sum();
    let var: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    let slope = cov / var;
    assert!((slope / p.sweep_rate_hz_per_s - 1.0).abs() <= 0.02, "slope {slope}");
    // The sawtooth restarts at the period boundary.
    let k = (p.sweep_period_s * fs) as usize;
    assert!((f[k] - p.start_freq_hz).abs() <= bin, "restart at {}", f[k]);
}

#[test]
fn pulse_spectrum_lines_are_one_over_t_apart() {
    let fs = 16e6;
    let p = PeriodicPulseParams { amplitude: 1.0, period_s: 50e-6, width_s: 15e-6, carrier_hz: None };
    let n = 16_000; // 20 whole periods; 1 kHz bins
    let x = gen_periodic_pulse(&p, &grid(fs, n)).unwrap();
    let spec = power_spectrum(x.samples());
    let peak = spec.iter().cloned().fold(0.0, f64::max);
    // Pulse edges fall between samples, so width jitters by one sample and
    // leaks a little power off the line grid; count only clear lines.
    let lines: Vec<usize> = (1..n / 2).filter(|&k| spec[k] > 1e-3 * peak && spec[k] >= spec[k - 1] && spec[k] >= spec[k + 1]).collect();
    let spacing = (1.0 / p.period_s * n as f64 / fs).round() as usize;
    assert!(lines.len() > 10);
    assert!(lines.iter().all(|k| k % spacing == 0), "off-grid lines {:?}", lines.iter().filter(|k| *k % spacing != 0).collect::<Vec<_>>());
    let gaps: Vec<usize> = lines.windows(2).map(|w| w[1] - w[0]).collect();
    assert_eq!(gaps.iter().min(), Some(&spacing));
}

#[test]
fn comb_has_exactly_n_dominant_peaks() {
    let fs = 16e6;
    let n = 16_000;
    let freqs = [90e3, 120e3, 150e3, 180e3, 210e3];
    let p = CombSpectrumParams { teeth: freqs.iter().enumerate().map(|(i, &f)| CombTooth::constant(1.0 + 0.1 * i as f64, f, 0.3 * i as f64)).collect() };
    let x = gen_comb_spectrum(&p, &grid(fs, n)).unwrap();
    let spec = power_spectrum(x.samples());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| spec[b].total_cmp(&spec[a]));
    let bin = fs / n as f64;
    for &k in &order[..freqs.len()] {
        assert!(freqs.iter().any(|&f| (k as f64 * bin - f).abs() <= bin), "peak at {}", k as f64 * bin);
    }
    assert!(spec[order[freqs.len()]] < 0.01 * spec[order[freqs.len() - 1]]);
}

#[test]
fn noise_statistics_match_snr() {
    let g = grid(1e6, 200_000);
    let s = gen_fixed_tone(&FixedToneParams { tones: vec![Tone { amplitude: 1.3, freq_hz: 100e3, phase_rad: 0.0 }] }, &g).unwrap();
    let snr_db = 7.0;
    let r = mix(&s, &[], Some(NoiseSpec { snr_db, seed: 5 })).unwrap();
    let noise: Vec<Complex64> = r.samples().iter().zip(s.samples()).map(|(a, b)| a - b).collect();
    let n = noise.len() as f64;
    let mean = noise.iter().sum::<Complex64>() / n;
    let var = noise.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / n;
    let want = s.mean_power() / 10f64.powf(snr_db / 10.0);
    assert!(mean.norm() < 5.0 * (want / n).sqrt(), "mean {mean}");
    assert!((var / want - 1.0).abs() <= 0.05, "variance {var} vs {want}");
}

#[test]
fn mixing_is_linear_to_rounding() {
    let g = grid(1e6, 4096);
    let s = gen_fh_signal(&FhParams::evenly_spaced(4, [100e3, 220e3], 1000.0, 1), &g, 2).unwrap();
    let j1 = gen_fixed_tone(&FixedToneParams { tones: vec![Tone { amplitude: 0.7, freq_hz: 60e3, phase_rad: 0.1 }] }, &g).unwrap();
    let j2 = gen_linear_sweep(&LinearSweepParams { amplitude: 1.1, start_freq_hz: 0.0, sweep_rate_hz_per_s: 1e8, phase_rad: 0.0, sweep_period_s: 1e-3 }, &g).unwrap();
    let once = mix(&s, &[j1.clone(), j2.clone()], None).unwrap();
    let twice = mix(&mix(&s, &[j1], None).unwrap(), &[j2], None).unwrap();
    for (a, b) in once.samples().iter().zip(twice.samples()) {
        assert!((a - b).norm() <= 4.0 * f64::EPSILON * (1.0 + a.norm()));
    }
}

#[test]
fn generators_are_deterministic() {
    let g = grid(16e6, 20_000);
    let specs = [
        InterferenceSpec::FixedTone(FixedToneParams { tones: vec![Tone { amplitude: 1.0, freq_hz: 80e3, phase_rad: 0.0 }] }),
        InterferenceSpec::LinearSweep(LinearSweepParams { amplitude: 1.0, start_freq_hz: 1e3, sweep_rate_hz_per_s: 1e8, phase_rad: 0.0, sweep_period_s: 1e-3 }),
        InterferenceSpec::PeriodicPulse(PeriodicPulseParams { amplitude: 1.0, period_s: 5e-5, width_s: 1e-5, carrier_hz: None }),
        InterferenceSpec::CombSpectrum(CombSpectrumParams { teeth: vec![CombTooth::constant(1.0, 90e3, 0.0), CombTooth::constant(1.0, 150e3, 0.0)] }),
    ];
    for s in &specs {
        assert_eq!(generate_interference(s, &g).unwrap(), generate_interference(s, &g).unwrap());
    }
    let fh = FhParams::default();
    assert_eq!(gen_fh_signal(&fh, &g, 3).unwrap(), gen_fh_signal(&fh, &g, 3).unwrap());
}
