//! Synthetic test images.

use super::GrayImage;

/// Concentric ridge pattern loosely resembling a fingerprint: a cosine of the
/// radius with `period` pixels per ridge, faded towards a light background at
/// the edges.
pub fn ridges(rows: usize, cols: usize, period: f64) -> GrayImage {
    let (cy, cx) = (rows as f64 * 0.45, cols as f64 * 0.5);
    let reach = (rows.min(cols) as f64) * 0.48;
    GrayImage::from_fn(rows, cols, |r, c| {
        let (dy, dx) = (r as f64 - cy, (c as f64 - cx) * 1.15);
        let radius = (dy * dy + dx * dx).sqrt();
        let wave = (std::f64::consts::TAU * radius / period).cos();
        let fade = (1.0 - (radius / reach).powi(4)).clamp(0.0, 1.0);
        let v = 200.0 - 75.0 * fade * (1.0 + wave);
        v.round().clamp(0.0, 255.0) as u8
    })
}

/// Horizontal gradient from 0 to 255.
pub fn gradient(rows: usize, cols: usize) -> GrayImage {
    GrayImage::from_fn(rows, cols, |_, c| ((c * 255) / (cols.max(2) - 1)) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ridges_have_contrast() {
        let img = ridges(64, 64, 7.0);
        let min = *img.pixels().iter().min().unwrap();
        let max = *img.pixels().iter().max().unwrap();
        assert!(max - min > 100);
    }

    #[test]
    fn gradient_spans_range() {
        let img = gradient(2, 256);
        assert_eq!(img.row(0)[0], 0);
        assert_eq!(img.row(1)[255], 255);
    }
}
