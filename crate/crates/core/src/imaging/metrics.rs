use super::{GrayImage, ImageError};

/// Peak value of an 8-bit image.
pub const PEAK: f64 = 255.0;

/// Mean squared pixel difference.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64, ImageError> {
    a.same_dims(b)?;
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum();
    Ok(sum as f64 / a.pixels().len() as f64)
}

/// Peak signal-to-noise ratio in decibels, `10·log10(255² / MSE)`.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64, ImageError> {
    let e = mse(a, b)?;
    if e == 0.0 {
        return Err(ImageError::IdenticalImages);
    }
    Ok(10.0 * (PEAK * PEAK / e).log10())
}
