use super::{Image, Pixel};
use crate::error::{Error, Result};

pub const DEFAULT_MARGIN_FRAC: f64 = 0.05;

/// Keeps the rows whose frequency lies in
/// `[low (1 - margin), high (1 + margin)]`; every column is kept.
pub fn crop_band<T: Pixel>(img: &Image<T>, active_band_hz: [f64; 2], margin_frac: f64) -> Result<Image<T>> {
    let [low, high] = active_band_hz;
    if !(low <= high) || !(margin_frac >= 0.0) {
        return Err(Error::config(format!(
            "crop band [{low}, {high}] with margin {margin_frac} is malformed"
        )));
    }
    let (lo, hi) = (low * (1.0 - margin_frac), high * (1.0 + margin_frac));
    let axis = img.freq_axis_hz();
    let start = axis.iter().position(|&f| f >= lo);
    let end = axis.iter().rposition(|&f| f <= hi);
    match (start, end) {
        (Some(s), Some(e)) if s <= e => Ok(img.rows(s, e + 1)),
        _ => Err(Error::Crop(format!(
            "band [{lo}, {hi}] Hz misses the image axis [{}, {}] Hz",
            axis[0],
            axis[axis.len() - 1]
        ))),
    }
}

/// Source index for output index `i` when `len` samples map onto `side`:
/// `i len / side` rounded to nearest with exact halves rounded down.
pub fn resize_index(i: usize, len: usize, side: usize) -> usize {
    let num = i * len;
    let (q, r) = (num / side, num % side);
    let idx = if 2 * r > side { q + 1 } else { q };
    idx.min(len - 1)
}

/// Nearest-neighbour resampling to a `side x side` image.
pub fn resize_nn<T: Pixel>(img: &Image<T>, side: usize) -> Result<Image<T>> {
    if side == 0 {
        return Err(Error::config("resize side must be at least 1"));
    }
    let rows: Vec<usize> = (0..side).map(|i| resize_index(i, img.height(), side)).collect();
    let cols: Vec<usize> = (0..side).map(|j| resize_index(j, img.width(), side)).collect();
    let mut pixels = Vec::with_capacity(side * side);
    for &r in &rows {
        let src = img.row(r);
        pixels.extend(cols.iter().map(|&c| src[c]));
    }
    let axis = rows.iter().map(|&r| img.freq_axis_hz()[r]).collect();
    Ok(Image::from_parts(side, side, pixels, axis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgprep::{BinaryImage, GrayImage};

    fn ramp(h: usize, w: usize) -> GrayImage {
        let px = (0..h * w).map(|i| (i % 256) as f64).collect();
        GrayImage::new(w, h, px, (0..h).map(|r| r as f64 * 1e3).collect()).unwrap()
    }

    #[test]
    fn full_band_is_identity() {
        let img = ramp(6, 3);
        assert_eq!(crop_band(&img, [0.0, 5e3], 0.0).unwrap(), img);
    }

    #[test]
    fn crop_keeps_rows_inside_margin() {
        let axis: Vec<f64> = (0..=160).map(|k| k as f64 * 50e3).collect();
        let img = GrayImage::new(2, axis.len(), vec![0.0; 2 * axis.len()], axis).unwrap();
        let c = crop_band(&img, [100e3, 220e3], 0.05).unwrap();
        let kept = c.freq_axis_hz();
        assert_eq!(kept, &[100e3, 150e3, 200e3]);
        assert!(kept.iter().all(|&f| (95e3..=231e3).contains(&f)));
    }

    #[test]
    fn disjoint_band_is_a_crop_error() {
        let img = ramp(4, 4);
        assert!(matches!(crop_band(&img, [10e3, 20e3], 0.05), Err(Error::Crop(_))));
    }

    #[test]
    fn same_size_resize_is_identity() {
        let img = ramp(5, 5);
        assert_eq!(resize_nn(&img, 5).unwrap(), img);
    }

    #[test]
    fn single_pixel_upsamples_to_constant() {
        let img = GrayImage::new(1, 1, vec![42.0], vec![7.0]).unwrap();
        let r = resize_nn(&img, 4).unwrap();
        assert!(r.pixels().iter().all(|&p| p == 42.0));
    }

    #[test]
    fn checkerboard_halves_to_sampled_corners() {
        let px = (0..16).map(|i| ((i / 4 + i % 4) % 2) as u8).collect();
        let img = BinaryImage::new(4, 4, px, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let r = resize_nn(&img, 2).unwrap();
        // Output indices 0 and 1 read source rows/columns 0 and 2.
        assert_eq!(r.pixels(), &[img.get(0, 0), img.get(0, 2), img.get(2, 0), img.get(2, 2)]);
        assert_eq!(r.pixels(), &[0, 0, 0, 0]);
    }

    #[test]
    fn half_rounds_down() {
        assert_eq!(resize_index(1, 3, 2), 1);
        assert_eq!(resize_index(1, 5, 2), 2);
        assert_eq!(resize_index(3, 7, 2), 6);
    }
}
