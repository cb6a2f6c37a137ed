use super::ImageError;

/// 3×3 integer kernel whose coefficients sum to `2^scale_shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Kernel {
    coefficients: [[u32; 3]; 3],
    scale_shift: u32,
}

impl Kernel {
    pub fn new(coefficients: [[u32; 3]; 3], scale_shift: u32) -> Result<Self, ImageError> {
        if let Some(&c) = coefficients.iter().flatten().find(|&&c| c > 255) {
            return Err(ImageError::KernelCoefficient(c));
        }
        let sum: u32 = coefficients.iter().flatten().sum();
        if scale_shift >= 32 || sum != 1u32 << scale_shift {
            return Err(ImageError::KernelSum {
                sum,
                shift: scale_shift,
            });
        }
        Ok(Kernel {
            coefficients,
            scale_shift,
        })
    }

    pub fn coefficients(&self) -> &[[u32; 3]; 3] {
        &self.coefficients
    }

    pub fn scale_shift(&self) -> u32 {
        self.scale_shift
    }

    pub fn sum(&self) -> u32 {
        self.coefficients.iter().flatten().sum()
    }
}

/// The σ = 1.0 kernel at scale 256 used by the filter experiment.
pub fn gaussian_kernel_default() -> Kernel {
    Kernel {
        coefficients: [[21, 31, 21], [31, 48, 31], [21, 31, 21]],
        scale_shift: 8,
    }
}

/// Samples `exp(−(i²+j²)/(2σ²))` on the 3×3 grid, scales to `2^scale_shift`,
/// rounds each weight and absorbs the rounding residue in the centre.
///
/// At σ = 1.0 this does not give the default kernel's constants.
pub fn gaussian_kernel_from_sigma(sigma: f64, scale_shift: u32) -> Result<Kernel, ImageError> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(ImageError::InvalidSigma(sigma));
    }
    if !(4..=12).contains(&scale_shift) {
        return Err(ImageError::InvalidScaleShift(scale_shift));
    }
    let mut g = [[0.0f64; 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 1.0, j as f64 - 1.0);
            *v = (-(di * di + dj * dj) / (2.0 * sigma * sigma)).exp();
        }
    }
    let total: f64 = g.iter().flatten().sum();
    let scale = (1u32 << scale_shift) as f64;
    let mut k = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (scale * g[i][j] / total).round() as i64;
        }
    }
    let residue = (1i64 << scale_shift) - k.iter().flatten().sum::<i64>();
    k[1][1] += residue;
    let mut coefficients = [[0u32; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            coefficients[i][j] = u32::try_from(k[i][j]).map_err(|_| ImageError::KernelSum {
                sum: 0,
                shift: scale_shift,
            })?;
        }
    }
    Kernel::new(coefficients, scale_shift)
}
