//! Fixed-width integer words, Mitchell's logarithmic multiplier and the
//! error-free 2×2 leaf multiplier.
//!
//! Mitchell's method treats an operand `N = 2^k (1 + x)` as having the
//! logarithm `k + x`, adds the logarithms of both operands and takes a
//! piecewise-linear antilog. Everything here is exact shift-and-add fixed
//! point arithmetic; nothing is rounded.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest width a [`UWord`] can carry.
pub const MAX_WORD_WIDTH: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("no leading one: operand is zero")]
    NoLeadingOne,
    #[error("invalid width {0}: must be in 1..=64")]
    InvalidWidth(u32),
    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: u32 },
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(u32, u32),
    #[error("product of two {0}-bit words does not fit in 64 bits")]
    ProductTooWide(u32),
    #[error("operation requires an even width, got {0}")]
    OddWidth(u32),
}

/// An unsigned integer tagged with its declared bit width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UWord {
    value: u64,
    width: u32,
}

impl UWord {
    pub fn new(value: u64, width: u32) -> Result<Self, ArithError> {
        if width == 0 || width > MAX_WORD_WIDTH {
            return Err(ArithError::InvalidWidth(width));
        }
        if width < 64 && value >> width != 0 {
            return Err(ArithError::ValueOutOfRange { value, width });
        }
        Ok(UWord { value, width })
    }

    pub fn zero(width: u32) -> Result<Self, ArithError> {
        UWord::new(0, width)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn width(self) -> u32 {
        self.width
    }

    /// Largest value representable at `width` bits.
    pub fn max_value(width: u32) -> u64 {
        if width >= 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        }
    }

    /// The exact product, carried at twice the operand width.
    pub fn full_product(self, other: UWord) -> Result<UWord, ArithError> {
        let width = product_width(self, other)?;
        UWord::new(self.value * other.value, width)
    }

    pub(crate) fn from_parts_unchecked(value: u64, width: u32) -> Self {
        debug_assert!((1..=64).contains(&width));
        debug_assert!(width == 64 || value >> width == 0);
        UWord { value, width }
    }
}

impl fmt::Display for UWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width as usize)
    }
}

/// Checks that two operands share a width and that their product fits.
pub(crate) fn product_width(a: UWord, b: UWord) -> Result<u32, ArithError> {
    if a.width != b.width {
        return Err(ArithError::WidthMismatch(a.width, b.width));
    }
    if a.width > 32 {
        return Err(ArithError::ProductTooWide(a.width));
    }
    Ok(2 * a.width)
}

/// Characteristic and mantissa of a nonzero operand: `n = 2^k + mantissa_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogDecomposition {
    pub k: u32,
    pub mantissa_bits: u64,
}

impl LogDecomposition {
    /// The mantissa as the binary fraction `mantissa_bits / 2^k`.
    pub fn fraction(&self) -> f64 {
        self.mantissa_bits as f64 / (1u128 << self.k) as f64
    }

    pub fn reconstruct(&self) -> u64 {
        (1u64 << self.k) + self.mantissa_bits
    }
}

/// Position of the most significant set bit.
pub fn leading_one(n: UWord) -> Result<u32, ArithError> {
    if n.value == 0 {
        return Err(ArithError::NoLeadingOne);
    }
    Ok(63 - n.value.leading_zeros())
}

pub fn log_decompose(n: UWord) -> Result<LogDecomposition, ArithError> {
    let k = leading_one(n)?;
    Ok(LogDecomposition {
        k,
        mantissa_bits: n.value ^ (1u64 << k),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MitchellProduct {
    pub value: UWord,
    /// Set when the mantissa sum reached 1 and the carry branch of the
    /// antilog was taken.
    pub carry_case: bool,
}

/// Mitchell multiplication on raw values. Returns `(product, carry_case)`.
///
/// Both mantissas are aligned to `f = max(k1, k2)` fraction bits, so their sum
/// has `f + 1` bits and the antilog is a left shift by `k1 + k2 - f` (or one
/// more in the carry case). `k1 + k2 >= f` always holds, so no bits are lost.
#[inline]
pub(crate) fn mitchell_raw(a: u64, b: u64) -> (u64, bool) {
    if a == 0 || b == 0 {
        return (0, false);
    }
    let k1 = 63 - a.leading_zeros();
    let k2 = 63 - b.leading_zeros();
    let frac = k1.max(k2);
    let x1 = (a ^ (1u64 << k1)) << (frac - k1);
    let x2 = (b ^ (1u64 << k2)) << (frac - k2);
    let sum = x1 + x2;
    let shift = k1 + k2 - frac;
    if sum < (1u64 << frac) {
        (((1u64 << frac) + sum) << shift, false)
    } else {
        (sum << (shift + 1), true)
    }
}

/// Correction term of the error-free 2×2 multiplier: the AND of all four
/// operand bits, i.e. 1 exactly for `3 × 3`.
#[inline]
pub(crate) fn efmlm2_correction(a: u64, b: u64) -> u64 {
    (a & (a >> 1) & b & (b >> 1)) & 1
}

#[inline]
pub(crate) fn efmlm2_raw(a: u64, b: u64) -> u64 {
    debug_assert!(a < 4 && b < 4);
    mitchell_raw(a, b).0 + efmlm2_correction(a, b)
}

/// Mitchell's logarithmic multiplier at the operands' common width.
///
/// A zero operand short-circuits to zero, as the hardware zero detector does.
pub fn mitchell_multiply(a: UWord, b: UWord) -> Result<MitchellProduct, ArithError> {
    let width = product_width(a, b)?;
    let (value, carry_case) = mitchell_raw(a.value, b.value);
    Ok(MitchellProduct {
        value: UWord::from_parts_unchecked(value, width),
        carry_case,
    })
}

/// The 2×2 Mitchell multiplier with its single error (`3 × 3 → 8`) corrected.
pub fn efmlm2_multiply(a: UWord, b: UWord) -> Result<UWord, ArithError> {
    let width = product_width(a, b)?;
    if width != 4 {
        return Err(ArithError::WidthMismatch(a.width, 2));
    }
    Ok(UWord::from_parts_unchecked(efmlm2_raw(a.value, b.value), 4))
}
