use super::{BinaryImage, GrayImage, Image};

/// Iteration stops once the threshold moves by no more than this.
pub const CONVERGENCE_TOL: f64 = 1e-3;
/// Hard cap on threshold updates.
pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinarizeStats {
    pub threshold: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn class_means(pixels: &[f64], t: f64) -> (f64, f64) {
    let (mut s1, mut n1, mut s2, mut n2) = (0.0, 0usize, 0.0, 0usize);
    for &p in pixels {
        if p > t {
            s1 += p;
            n1 += 1;
        } else {
            s2 += p;
            n2 += 1;
        }
    }
    let mean = |s: f64, n: usize| if n == 0 { 0.0 } else { s / n as f64 };
    (mean(s1, n1), mean(s2, n2))
}

/// Iterative global threshold: start midway between the extremes, then move
/// to the midpoint of the two class means until the threshold settles.
pub fn binarize_with_stats(img: &GrayImage) -> (BinaryImage, BinarizeStats) {
    let px = img.pixels();
    let (lo, hi) = img.min_max();
    let mut stats = BinarizeStats { threshold: (lo + hi) / 2.0, iterations: 0, converged: true };
    if lo < hi {
        stats.converged = false;
        while stats.iterations < MAX_ITERATIONS {
            let (mu1, mu2) = class_means(px, stats.threshold);
            let next = (mu1 + mu2) / 2.0;
            stats.iterations += 1;
            let delta = (next - stats.threshold).abs();
            stats.threshold = next;
            if delta <= CONVERGENCE_TOL {
                stats.converged = true;
                break;
            }
        }
    }
    let t = stats.threshold;
    let out = px.iter().map(|&p| u8::from(p >= t)).collect();
    (Image::from_parts(img.width(), img.height(), out, img.freq_axis_hz().to_vec()), stats)
}

pub fn binarize(img: &GrayImage) -> BinaryImage {
    binarize_with_stats(img).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_is_all_ones() {
        let img = GrayImage::new(3, 2, vec![0.4; 6], vec![0.0, 1.0]).unwrap();
        let (b, s) = binarize_with_stats(&img);
        assert_eq!(b.ones(), 6);
        assert_eq!(s.threshold, 0.4);
        assert_eq!(s.iterations, 0);
    }

    #[test]
    fn half_split_settles_at_one_half() {
        let px = vec![0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0];
        let img = GrayImage::new(4, 2, px.clone(), vec![0.0, 1.0]).unwrap();
        let (b, s) = binarize_with_stats(&img);
        assert_eq!(s.threshold, 0.5);
        assert!(s.converged);
        assert_eq!(b.pixels(), px.iter().map(|&p| p as u8).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn idempotent() {
        let px: Vec<f64> = (0..20).map(|i| ((i * 7) % 11) as f64 / 10.0).collect();
        let img = GrayImage::new(5, 4, px, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let once = binarize(&img);
        assert_eq!(binarize(&once.to_gray()), once);
    }
}
