use super::BinaryImage;
use crate::error::{Error, Result};

/// Three binary channels of identical shape: red = wavelet, green =
/// Margenau-Hill, blue = Born-Jordan.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeImage {
    channels: [BinaryImage; 3],
}

impl CompositeImage {
    pub fn compose(r: BinaryImage, g: BinaryImage, b: BinaryImage) -> Result<Self> {
        if !r.same_shape(&g) || !r.same_shape(&b) {
            return Err(Error::dimension(format!(
                "channel shapes differ: {}x{}, {}x{}, {}x{}",
                r.height(),
                r.width(),
                g.height(),
                g.width(),
                b.height(),
                b.width()
            )));
        }
        Ok(CompositeImage { channels: [r, g, b] })
    }

    pub fn decompose(self) -> (BinaryImage, BinaryImage, BinaryImage) {
        let [r, g, b] = self.channels;
        (r, g, b)
    }

    pub fn channels(&self) -> &[BinaryImage; 3] {
        &self.channels
    }

    pub fn width(&self) -> usize {
        self.channels[0].width()
    }

    pub fn height(&self) -> usize {
        self.channels[0].height()
    }

    /// Edge length when square.
    pub fn side(&self) -> Option<usize> {
        (self.width() == self.height()).then(|| self.width())
    }

    pub fn get(&self, channel: usize, row: usize, col: usize) -> u8 {
        self.channels[channel].get(row, col)
    }

    /// Channel-major `[3][height][width]` floats in {0, 1}.
    pub fn to_tensor(&self) -> Vec<f64> {
        self.channels.iter().flat_map(|c| c.pixels().iter().map(|&p| p as f64)).collect()
    }

    /// Interleaved RGB bytes with 1 mapped to 255, row 0 first.
    pub fn interleaved_rgb(&self) -> Vec<u8> {
        let n = self.width() * self.height();
        let mut out = Vec::with_capacity(3 * n);
        for i in 0..n {
            for c in &self.channels {
                out.push(c.pixels()[i] * 255);
            }
        }
        out
    }
}
