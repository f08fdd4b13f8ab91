//! Direct evaluations of the transform definitions, written without any of
//! the library's FFT machinery. Quadratic or worse in the signal length, so
//! only for short records.

#![allow(dead_code)]

use std::f64::consts::PI;

use hopjam::sigsynth::{ComplexSignal, SamplingGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn time_bins(n: usize, nt: usize) -> Vec<usize> {
    (0..nt).map(|i| ((2 * i + 1) * n) / (2 * nt)).collect()
}

pub fn freq_bins(lo: f64, hi: f64, nf: usize) -> Vec<f64> {
    if nf == 1 {
        return vec![lo];
    }
    (0..nf).map(|k| lo + (hi - lo) * k as f64 / (nf - 1) as f64).collect()
}

pub fn hamming(m: i64, half: i64) -> f64 {
    if half == 0 {
        1.0
    } else {
        0.54 + 0.46 * (PI * m as f64 / half as f64).cos()
    }
}

fn cis(phase: f64) -> Complex64 {
    Complex64::new(phase.cos(), phase.sin())
}

/// Riemann sum of `a^{-1/2} int x(t) psi*((t - b)/a) dt` over the whole
/// record, `psi(u) = pi^{-1/4} e^{j w0 u} e^{-u^2/2}`, `a = w0 / (2 pi f)`.
pub fn cwt(x: &[Complex64], fs: f64, times: &[usize], freqs: &[f64], w0: f64) -> Vec<Complex64> {
    let dt = 1.0 / fs;
    let mut out = Vec::with_capacity(times.len() * freqs.len());
    for &b in times {
        for &f in freqs {
            let a = w0 / (2.0 * PI * f);
            let mut acc = Complex64::new(0.0, 0.0);
            for (n, &xn) in x.iter().enumerate() {
                let u = (n as f64 - b as f64) * dt / a;
                let psi = PI.powf(-0.25) * (-0.5 * u * u).exp() * cis(w0 * u);
                acc += xn * psi.conj();
            }
            out.push(acc * dt / a.sqrt());
        }
    }
    out
}

/// Windowed Margenau-Hill:
/// `dt Re{ x*(n) sum_{tau=-M}^{M} h(tau) x(n + tau) e^{-j 2 pi f tau / fs} }`.
pub fn mhd_windowed(x: &[Complex64], fs: f64, times: &[usize], freqs: &[f64], half: usize) -> Vec<f64> {
    let n = x.len() as i64;
    let mut out = Vec::new();
    for &c in times {
        for &f in freqs {
            let mut acc = Complex64::new(0.0, 0.0);
            for tau in -(half as i64)..=half as i64 {
                let i = c as i64 + tau;
                if i < 0 || i >= n {
                    continue;
                }
                acc += hamming(tau, half as i64) * x[i as usize] * cis(-2.0 * PI * f * tau as f64 / fs);
            }
            out.push((x[c].conj() * acc).re / fs);
        }
    }
    out
}

/// Unwindowed Margenau-Hill: `dt Re{ x(n) X*(f) e^{-j 2 pi f n / fs} }`,
/// `X(f) = sum_k x(k) e^{-j 2 pi f k / fs}`.
pub fn mhd_full(x: &[Complex64], fs: f64, times: &[usize], freqs: &[f64]) -> Vec<f64> {
    let spectrum: Vec<Complex64> = freqs
        .iter()
        .map(|&f| x.iter().enumerate().map(|(k, &v)| v * cis(-2.0 * PI * f * k as f64 / fs)).sum())
        .collect();
    let mut out = Vec::new();
    for &c in times {
        for (k, &f) in freqs.iter().enumerate() {
            out.push((x[c] * spectrum[k].conj() * cis(-2.0 * PI * f * c as f64 / fs)).re / fs);
        }
    }
    out
}

/// Born-Jordan with local autocorrelation averaged over `|u - n| <= round(2 a |m|)`:
/// `2 dt Re{ sum_{m=-L}^{L} h(m) K(n, m) e^{-j 4 pi f m / fs} }`, lags whose
/// averaging window leaves the record skipped. `half = None` is unwindowed
/// with `L = N / 2`.
pub fn bjd(x: &[Complex64], fs: f64, times: &[usize], freqs: &[f64], a: f64, half: Option<usize>) -> Vec<f64> {
    let n = x.len() as i64;
    let lmax = half.unwrap_or(x.len() / 2) as i64;
    let mut out = Vec::new();
    for &c in times {
        let c = c as i64;
        let mut kern = Vec::new();
        for m in -lmax..=lmax {
            let w = (2.0 * a * m.abs() as f64).round() as i64;
            if c - w - m.abs() < 0 || c + w + m.abs() > n - 1 {
                continue;
            }
            let mut k = Complex64::new(0.0, 0.0);
            for u in c - w..=c + w {
                k += x[(u + m) as usize] * x[(u - m) as usize].conj();
            }
            let h = half.map_or(1.0, |hl| hamming(m, hl as i64));
            kern.push((m, h * k / (2 * w + 1) as f64));
        }
        for &f in freqs {
            let s: Complex64 = kern.iter().map(|&(m, k)| k * cis(-4.0 * PI * f * m as f64 / fs)).sum();
            out.push(2.0 * s.re / fs);
        }
    }
    out
}

/// `max |got - want| / max |want|`.
pub fn rel_err<T: Copy + Into<Complex64>>(got: &[T], want: &[T]) -> f64 {
    assert_eq!(got.len(), want.len());
    let scale = want.iter().map(|&w| w.into().norm()).fold(0.0, f64::max);
    let worst = got.iter().zip(want).map(|(&g, &w)| (g.into() - w.into()).norm()).fold(0.0, f64::max);
    worst / scale
}

/// Noise plus a chirp and a tone: broadband, but with structure.
pub fn test_signal(n: usize, fs: f64, seed: u64) -> ComplexSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let noise = Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            noise + cis(2.0 * PI * (50e3 * t + 0.5 * 4e8 * t * t)) + 0.7 * cis(2.0 * PI * 180e3 * t + 0.4)
        })
        .collect();
    ComplexSignal::new(SamplingGrid::with_samples(fs, n).unwrap(), x).unwrap()
}

/// Equal-amplitude complex tones.
pub fn tones(n: usize, fs: f64, freqs: &[f64]) -> ComplexSignal {
    let x = (0..n).map(|i| freqs.iter().map(|&f| cis(2.0 * PI * f * i as f64 / fs)).sum()).collect();
    ComplexSignal::new(SamplingGrid::with_samples(fs, n).unwrap(), x).unwrap()
}
