//! Minimal gray line plots for the report command.

const MARGIN: usize = 8;

/// Plots `(x, y)` points joined by straight segments on a white canvas with
/// a black frame. Returns the pixels (row 0 on top), width and height.
pub fn line_plot(points: &[(f64, f64)], width: usize, height: usize) -> (Vec<u8>, usize, usize) {
    let mut px = vec![255u8; width * height];
    let (x0, x1, y0, y1) = (MARGIN, width - 1 - MARGIN, MARGIN, height - 1 - MARGIN);
    for x in x0..=x1 {
        px[y0 * width + x] = 0;
        px[y1 * width + x] = 0;
    }
    for y in y0..=y1 {
        px[y * width + x0] = 0;
        px[y * width + x1] = 0;
    }
    if points.is_empty() {
        return (px, width, height);
    }
    let span = |it: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) }
    };
    let (xl, xh) = span(&mut points.iter().map(|p| p.0));
    let (yl, yh) = span(&mut points.iter().map(|p| p.1));
    let to_px = |(x, y): (f64, f64)| {
        let cx = x0 as f64 + 2.0 + (x - xl) / (xh - xl) * (x1 - x0 - 4) as f64;
        let cy = y1 as f64 - 2.0 - (y - yl) / (yh - yl) * (y1 - y0 - 4) as f64;
        (cx, cy)
    };
    let mut draw = |x: f64, y: f64| {
        let (c, r) = (x.round() as usize, y.round() as usize);
        if c < width && r < height {
            px[r * width + c] = 0;
        }
    };
    let mut prev = to_px(points[0]);
    draw(prev.0, prev.1);
    for &p in &points[1..] {
        let cur = to_px(p);
        let steps = ((cur.0 - prev.0).abs().max((cur.1 - prev.1).abs()).ceil() as usize).max(1);
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            draw(prev.0 + t * (cur.0 - prev.0), prev.1 + t * (cur.1 - prev.1));
        }
        prev = cur;
    }
    (px, width, height)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_inked() {
        let (px, w, h) = line_plot(&[(0.0, 0.0), (1.0, 1.0)], 40, 30);
        assert_eq!(px.len(), w * h);
        // First point sits bottom-left inside the frame, last top-right.
        assert_eq!(px[(h - 1 - MARGIN - 2) * w + MARGIN + 2], 0);
        assert_eq!(px[(MARGIN + 2) * w + (w - 1 - MARGIN - 2)], 0);
    }
}
