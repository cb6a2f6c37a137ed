use super::{GrayImage, ImageError};
use crate::rng::XorShift64Star;

/// Salt-and-pepper density and PRNG seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    density: f64,
    seed: u64,
}

impl NoiseSpec {
    pub fn new(density: f64, seed: u64) -> Result<Self, ImageError> {
        if !(0.0..=1.0).contains(&density) {
            return Err(ImageError::InvalidDensity(density));
        }
        if seed == 0 {
            return Err(ImageError::ZeroSeed);
        }
        Ok(NoiseSpec { density, seed })
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Corrupts pixels in row-major order, one uniform draw per pixel:
/// `u < p/2` gives pepper (0), `p/2 <= u < p` gives salt (255).
pub fn add_salt_pepper(img: &GrayImage, spec: &NoiseSpec) -> GrayImage {
    let mut rng = XorShift64Star::new(spec.seed);
    let half = spec.density / 2.0;
    let mut out = img.clone();
    for px in out.pixels.iter_mut() {
        let u = rng.next_unit();
        if u < half {
            *px = 0;
        } else if u < spec.density {
            *px = 255;
        }
    }
    out
}
