use super::Spectrogram;
use crate::imgprep::{GrayImage, Image};

/// Maps `|value|` onto 0..=255 with the image maximum at 255. Rows are
/// frequency bins (lowest first), columns are time bins. An all-zero
/// spectrogram gives an all-zero image.
pub fn to_gray(s: &Spectrogram) -> GrayImage {
    let peak = s.max_abs();
    let scale = if peak > 0.0 { 255.0 / peak } else { 0.0 };
    let mut pixels = vec![0.0; s.n_time * s.n_freq];
    for t in 0..s.n_time {
        for f in 0..s.n_freq {
            pixels[f * s.n_time + t] = (s.get(t, f).abs() * scale).min(255.0);
        }
    }
    Image::from_parts(s.n_time, s.n_freq, pixels, s.freq_axis_hz.clone())
}
