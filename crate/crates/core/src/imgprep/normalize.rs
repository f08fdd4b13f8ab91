use super::{GrayImage, Image};
use crate::error::{Error, Result};

pub const DEFAULT_A_MIN: f64 = 0.0;
pub const DEFAULT_A_MAX: f64 = 137.0;

/// Clamped affine map sending `a_min` to 0 and `a_max` to 1.
pub fn normalize(img: &GrayImage, a_min: f64, a_max: f64) -> Result<GrayImage> {
    if !(a_min.is_finite() && a_max.is_finite() && a_min < a_max) {
        return Err(Error::config(format!("need a_min < a_max, got {a_min} and {a_max}")));
    }
    let span = a_max - a_min;
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| {
            if p <= a_min {
                0.0
            } else if p >= a_max {
                1.0
            } else {
                (p - a_min) / span
            }
        })
        .collect();
    Ok(Image::from_parts(img.width(), img.height(), pixels, img.freq_axis_hz().to_vec()))
}
