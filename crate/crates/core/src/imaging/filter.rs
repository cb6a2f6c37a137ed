//! 3×3 smoothing through a configurable 8×8 multiplier.
//!
//! Each output pixel is the sum of nine `coefficient × pixel` products, each
//! computed by the configured multiplier, shifted right by the kernel scale.
//! The adder tree is exact; only the multiplier may be approximate. Border
//! pixels are copied from the input.

use rayon::prelude::*;

use super::{GrayImage, ImageError, Kernel};
use crate::kom::MultiplierConfig;

pub fn convolve3x3(img: &GrayImage, kernel: &Kernel, cfg: &MultiplierConfig) -> Result<GrayImage, ImageError> {
    if cfg.width() != 8 {
        return Err(ImageError::FilterWidth(cfg.width()));
    }
    let (rows, cols) = (img.rows(), img.cols());
    if rows < 3 || cols < 3 {
        return Err(ImageError::TooSmall { rows, cols });
    }
    let coeffs = kernel.coefficients();
    let shift = kernel.scale_shift();

    let mut out = img.clone();
    out.pixels
        .par_chunks_mut(cols)
        .enumerate()
        .skip(1)
        .take(rows - 2)
        .for_each(|(m, out_row)| {
            // the three buffered input rows centred on m
            let window = [img.row(m - 1), img.row(m), img.row(m + 1)];
            for n in 1..cols - 1 {
                let mut acc: u32 = 0;
                for (i, line) in window.iter().enumerate() {
                    for j in 0..3 {
                        let x = line[n + j - 1] as u64;
                        acc += cfg.multiply_raw(x, coeffs[i][j] as u64) as u32;
                    }
                }
                out_row[n] = (acc >> shift) as u8;
            }
        });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::gaussian_kernel_default;
    use crate::kom::{KomVariant, Model};

    fn cfg(model: Model) -> MultiplierConfig {
        MultiplierConfig::with_model(model, 8).unwrap()
    }

    #[test]
    fn constant_image_is_fixed_point() {
        for v in [0u8, 1, 77, 128, 255] {
            let img = GrayImage::filled(6, 7, v);
            let out = convolve3x3(&img, &gaussian_kernel_default(), &cfg(Model::Exact)).unwrap();
            assert_eq!(out, img);
        }
    }

    #[test]
    fn impulse_response() {
        let mut img = GrayImage::filled(5, 5, 0);
        img.set(2, 2, 255);
        let out = convolve3x3(&img, &gaussian_kernel_default(), &cfg(Model::Exact)).unwrap();
        let expected = [[20, 30, 20], [30, 47, 30], [20, 30, 20]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(out.get(1 + i, 1 + j), v);
            }
        }
        // border copied
        assert_eq!(out.row(0), img.row(0));
        assert_eq!(out.get(2, 0), 0);
    }

    #[test]
    fn rejects_small_or_wrong_width() {
        let k = gaussian_kernel_default();
        assert_eq!(
            convolve3x3(&GrayImage::filled(2, 5, 0), &k, &cfg(Model::Exact)),
            Err(ImageError::TooSmall { rows: 2, cols: 5 })
        );
        let c16 = MultiplierConfig::new(Model::Exact, KomVariant::FourProduct, 16).unwrap();
        assert_eq!(
            convolve3x3(&GrayImage::filled(5, 5, 0), &k, &c16),
            Err(ImageError::FilterWidth(16))
        );
    }

    #[test]
    fn minimum_size_image() {
        let img = GrayImage::from_fn(3, 3, |r, c| (r * 3 + c) as u8 * 20);
        let out = convolve3x3(&img, &gaussian_kernel_default(), &cfg(Model::Exact)).unwrap();
        let k = gaussian_kernel_default();
        let mut acc = 0u32;
        for i in 0..3 {
            for j in 0..3 {
                acc += k.coefficients()[i][j] * img.get(i, j) as u32;
            }
        }
        assert_eq!(out.get(1, 1), (acc >> 8) as u8);
    }
}
