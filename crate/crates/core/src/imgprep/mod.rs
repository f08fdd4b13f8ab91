//! Gray spectrogram images and the steps that turn them into the network
//! input: normalization, global-threshold binarization, frequency cropping,
//! nearest-neighbour resizing and RGB compositing.
//!
//! Images are stored row-major with row 0 at the lowest frequency and one
//! column per time bin.

mod binarize;
mod compose;
mod geometry;
mod normalize;

pub use binarize::{binarize, binarize_with_stats, BinarizeStats, CONVERGENCE_TOL, MAX_ITERATIONS};
pub use compose::CompositeImage;
pub use geometry::{crop_band, resize_nn, resize_index, DEFAULT_MARGIN_FRAC};
pub use normalize::{normalize, DEFAULT_A_MAX, DEFAULT_A_MIN};

use std::fmt::Debug;

use crate::error::{Error, Result};

/// Value type admitted in an [`Image`].
pub trait Pixel: Copy + PartialEq + Debug {
    fn is_valid(self) -> bool;
}

impl Pixel for f64 {
    fn is_valid(self) -> bool {
        self.is_finite() && (0.0..=255.0).contains(&self)
    }
}

impl Pixel for u8 {
    fn is_valid(self) -> bool {
        self <= 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    width: usize,
    height: usize,
    pixels: Vec<T>,
    freq_axis_hz: Vec<f64>,
}

/// Real-valued image on the 0..=255 scale (or 0..=1 once normalized).
pub type GrayImage = Image<f64>;
/// Two-valued image with entries 0 or 1.
pub type BinaryImage = Image<u8>;

impl<T: Pixel> Image<T> {
    pub fn new(width: usize, height: usize, pixels: Vec<T>, freq_axis_hz: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::dimension("image must have at least one row and column"));
        }
        if pixels.len() != width * height {
            return Err(Error::dimension(format!("{} pixels for {width} x {height}", pixels.len())));
        }
        if freq_axis_hz.len() != height {
            return Err(Error::dimension(format!(
                "frequency axis of {} entries for {height} rows",
                freq_axis_hz.len()
            )));
        }
        if freq_axis_hz.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::dimension("frequency axis must be non-decreasing"));
        }
        if let Some(p) = pixels.iter().find(|p| !p.is_valid()) {
            return Err(Error::Numerical { path: "image".into(), message: format!("pixel value {p:?} out of range") });
        }
        Ok(Image { width, height, pixels, freq_axis_hz })
    }

    pub(crate) fn from_parts(width: usize, height: usize, pixels: Vec<T>, freq_axis_hz: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), width * height);
        debug_assert_eq!(freq_axis_hz.len(), height);
        Image { width, height, pixels, freq_axis_hz }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[T] {
        &self.pixels
    }

    pub fn freq_axis_hz(&self) -> &[f64] {
        &self.freq_axis_hz
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.pixels[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.pixels[row * self.width..(row + 1) * self.width]
    }

    pub fn same_shape<U>(&self, other: &Image<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Keeps rows `start..end`.
    pub fn rows(&self, start: usize, end: usize) -> Self {
        Image {
            width: self.width,
            height: end - start,
            pixels: self.pixels[start * self.width..end * self.width].to_vec(),
            freq_axis_hz: self.freq_axis_hz[start..end].to_vec(),
        }
    }
}

impl GrayImage {
    pub fn min_max(&self) -> (f64, f64) {
        self.pixels.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)))
    }
}

impl BinaryImage {
    pub fn ones(&self) -> usize {
        self.pixels.iter().filter(|&&p| p == 1).count()
    }

    /// Same image viewed as gray levels 0.0 / 1.0.
    pub fn to_gray(&self) -> GrayImage {
        Image::from_parts(
            self.width,
            self.height,
            self.pixels.iter().map(|&p| p as f64).collect(),
            self.freq_axis_hz.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(GrayImage::new(2, 2, vec![0.0; 3], vec![1.0, 2.0]).is_err());
        assert!(GrayImage::new(2, 1, vec![0.0, f64::NAN], vec![1.0]).is_err());
        assert!(GrayImage::new(1, 2, vec![0.0, 1.0], vec![2.0, 1.0]).is_err());
        assert!(BinaryImage::new(2, 1, vec![0, 2], vec![1.0]).is_err());
        assert!(BinaryImage::new(2, 1, vec![0, 1], vec![1.0]).is_ok());
    }
}
