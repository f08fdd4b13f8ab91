//! Zoom DFT on an arbitrary linear frequency grid (Bluestein chirp-z).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Evaluates `X[k] = sum_m x[m] exp(-j 2 pi (f0 + k df) m c)` for
/// `k in 0..n_out`, `m in 0..n_in`, where `c` converts frequency times index
/// into cycles (`1/fs` for a plain DFT, `2/fs` for half-lag kernels).
pub struct ZoomDft {
    n_in: usize,
    n_out: usize,
    size: usize,
    pre: Vec<Complex64>,
    kernel: Vec<Complex64>,
    post: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

/// `exp(-j pi t)` with `t` reduced modulo 2 first so large chirp arguments keep
/// their fractional precision.
fn cis_pi(t: f64) -> Complex64 {
    let r = t.rem_euclid(2.0);
    Complex64::from_polar(1.0, -PI * r)
}

impl ZoomDft {
    pub fn new(n_in: usize, n_out: usize, f0: f64, df: f64, c: f64) -> Self {
        let size = (n_in + n_out).saturating_sub(1).max(1).next_power_of_two();
        let a0 = f0 * c;
        let d = df * c;
        // Index products are formed exactly in u128 then scaled once.
        let pre = (0..n_in)
            .map(|m| {
                let m2 = (m as u128 * m as u128) as f64;
                cis_pi(2.0 * (a0 * m as f64).rem_euclid(1.0) + (d * m2).rem_euclid(2.0))
            })
            .collect();
        let post = (0..n_out)
            .map(|k| cis_pi((d * (k as u128 * k as u128) as f64).rem_euclid(2.0)))
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); size];
        for n in 0..n_out.max(n_in) {
            let v = cis_pi(-(d * (n as u128 * n as u128) as f64).rem_euclid(2.0));
            if n < n_out {
                kernel[n] = v;
            }
            if n > 0 && n < n_in {
                kernel[size - n] = v;
            }
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(size);
        let inv = planner.plan_fft_inverse(size);
        fwd.process(&mut kernel);
        ZoomDft { n_in, n_out, size, pre, kernel, post, fwd, inv }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    /// Transforms `input` (length `n_in`) into `out` (length `n_out`).
    /// `scratch` is resized as needed so repeated calls do not allocate.
    pub fn process(&self, input: &[Complex64], out: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        assert_eq!(input.len(), self.n_in, "zoom DFT input length");
        assert_eq!(out.len(), self.n_out, "zoom DFT output length");
        scratch.clear();
        scratch.resize(self.size, Complex64::new(0.0, 0.0));
        for ((s, x), p) in scratch.iter_mut().zip(input).zip(&self.pre) {
            *s = x * p;
        }
        self.fwd.process(scratch);
        for (s, k) in scratch.iter_mut().zip(&self.kernel) {
            *s *= k;
        }
        self.inv.process(scratch);
        let norm = 1.0 / self.size as f64;
        for ((o, s), p) in out.iter_mut().zip(scratch.iter()).zip(&self.post) {
            *o = s * p * norm;
        }
    }

    pub fn transform(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n_out];
        let mut scratch = Vec::new();
        self.process(input, &mut out, &mut scratch);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(x: &[Complex64], n_out: usize, f0: f64, df: f64, c: f64) -> Vec<Complex64> {
        (0..n_out)
            .map(|k| {
                let f = f0 + k as f64 * df;
                x.iter()
                    .enumerate()
                    .map(|(m, v)| v * Complex64::from_polar(1.0, -2.0 * PI * f * m as f64 * c))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let x: Vec<Complex64> =
            (0..37).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos())).collect();
        for &(n_out, f0, df, c) in &[(20, 1e3, 3e3, 1e-6), (64, 0.0, 1.0 / 64.0, 1.0), (5, 7e3, 11e3, 2e-6)] {
            let z = ZoomDft::new(x.len(), n_out, f0, df, c);
            let got = z.transform(&x);
            let want = direct(&x, n_out, f0, df, c);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-10, "{g} vs {w}");
            }
        }
    }

    #[test]
    fn single_sample_input() {
        let z = ZoomDft::new(1, 3, 5.0, 1.0, 0.1);
        let got = z.transform(&[Complex64::new(2.0, -1.0)]);
        for g in got {
            assert!((g - Complex64::new(2.0, -1.0)).norm() < 1e-12);
        }
    }
}
