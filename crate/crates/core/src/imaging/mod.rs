//! 8-bit grayscale images and the Gaussian smoothing experiment.

mod filter;
mod kernel;
mod metrics;
mod noise;
pub mod pattern;
mod pgm;

pub use filter::convolve3x3;
pub use kernel::{gaussian_kernel_default, gaussian_kernel_from_sigma, Kernel};
pub use metrics::{mse, psnr, PEAK};
pub use noise::{add_salt_pepper, NoiseSpec};
pub use pgm::{load_pgm, save_pgm, PgmError};

use thiserror::Error;

use crate::kom::ConfigError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImageError {
    #[error("pixel buffer holds {actual} values, expected {rows}x{cols}")]
    BufferSize { rows: usize, cols: usize, actual: usize },
    #[error("image is {rows}x{cols}; convolution needs at least 3x3")]
    TooSmall { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("PSNR undefined for identical images")]
    IdenticalImages,
    #[error("filter multiplier must be 8 bits wide, got {0}")]
    FilterWidth(u32),
    #[error("kernel coefficients sum to {sum}, expected 2^{shift}")]
    KernelSum { sum: u32, shift: u32 },
    #[error("kernel coefficient {0} does not fit in 8 bits")]
    KernelCoefficient(u32),
    #[error("sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("scale shift {0} outside 4..=12")]
    InvalidScaleShift(u32),
    #[error("noise density {0} outside [0, 1]")]
    InvalidDensity(f64),
    #[error("noise seed must be nonzero")]
    ZeroSeed,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Row-major 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if pixels.len() != rows * cols {
            return Err(ImageError::BufferSize {
                rows,
                cols,
                actual: pixels.len(),
            });
        }
        Ok(GrayImage { rows, cols, pixels })
    }

    pub fn filled(rows: usize, cols: usize, value: u8) -> Self {
        GrayImage {
            rows,
            cols,
            pixels: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        GrayImage { rows, cols, pixels }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.pixels[row * self.cols..(row + 1) * self.cols]
    }

    pub(crate) fn same_dims(&self, other: &GrayImage) -> Result<(), ImageError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ImageError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(())
    }
}
