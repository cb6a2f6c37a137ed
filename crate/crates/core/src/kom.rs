//! Radix-2 Karatsuba-Ofman recursion over 2×2 leaf multipliers.
//!
//! An n-bit operand splits into two n/2-bit halves, `a = a_L + a_H·2^(n/2)`,
//! and the product is rebuilt from half-width products:
//!
//! ```text
//! P = a_L·b_L + (a_L·b_H + a_H·b_L)·2^(n/2) + a_H·b_H·2^n
//! ```
//!
//! The three-product form replaces the two middle products with
//! `a_L·b_L + a_H·b_H + (a_L − a_H)(b_H − b_L)`. The recursion bottoms out at
//! 2 bits, where the leaf model decides whether the result is exact.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{efmlm2_raw, mitchell_raw, product_width, ArithError, UWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("multiplier width {0} must be a power of two in 2..=32")]
    InvalidWidth(u32),
    #[error("unknown multiplier model `{0}` (expected exact, mitchell, refmlm or mitchell-kom)")]
    UnknownModel(String),
    #[error("unknown KOM variant `{0}` (expected four-product or three-product)")]
    UnknownVariant(String),
    #[error("operand width {operand} does not match configured width {configured}")]
    OperandWidth { operand: u32, configured: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Plain integer multiplication.
    Exact,
    /// Mitchell's multiplier applied once at full width.
    Mitchell,
    /// KOM recursion with error-corrected 2×2 leaves.
    Refmlm,
    /// KOM recursion with uncorrected 2×2 Mitchell leaves.
    MitchellKom,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Exact, Model::Mitchell, Model::Refmlm, Model::MitchellKom];

    pub fn name(self) -> &'static str {
        match self {
            Model::Exact => "exact",
            Model::Mitchell => "mitchell",
            Model::Refmlm => "refmlm",
            Model::MitchellKom => "mitchell-kom",
        }
    }

    /// Whether the model goes through the KOM recursion.
    pub fn is_recursive(self) -> bool {
        matches!(self, Model::Refmlm | Model::MitchellKom)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ConfigError::UnknownModel(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KomVariant {
    #[default]
    FourProduct,
    ThreeProduct,
}

impl KomVariant {
    pub const ALL: [KomVariant; 2] = [KomVariant::FourProduct, KomVariant::ThreeProduct];

    pub fn name(self) -> &'static str {
        match self {
            KomVariant::FourProduct => "four-product",
            KomVariant::ThreeProduct => "three-product",
        }
    }
}

impl fmt::Display for KomVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KomVariant {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KomVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| ConfigError::UnknownVariant(s.to_string()))
    }
}

/// Which multiplier to run and at what operand width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplierConfig {
    model: Model,
    variant: KomVariant,
    width: u32,
}

impl MultiplierConfig {
    pub fn new(model: Model, variant: KomVariant, width: u32) -> Result<Self, ConfigError> {
        if !(2..=32).contains(&width) || !width.is_power_of_two() {
            return Err(ConfigError::InvalidWidth(width));
        }
        Ok(MultiplierConfig { model, variant, width })
    }

    /// Shorthand for the default four-product variant.
    pub fn with_model(model: Model, width: u32) -> Result<Self, ConfigError> {
        MultiplierConfig::new(model, KomVariant::default(), width)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Variant used by the recursion; ignored for `exact` and `mitchell`.
    pub fn variant(&self) -> KomVariant {
        self.variant
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Multiplies two raw operands already known to fit in `width` bits.
    #[inline]
    pub fn multiply_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a <= UWord::max_value(self.width) && b <= UWord::max_value(self.width));
        match self.model {
            Model::Exact => a * b,
            Model::Mitchell => mitchell_raw(a, b).0,
            Model::Refmlm => kom_output(a, b, self.width, Leaf::ErrorFree, self.variant),
            Model::MitchellKom => kom_output(a, b, self.width, Leaf::Mitchell, self.variant),
        }
    }

    pub fn multiply(&self, a: UWord, b: UWord) -> Result<UWord, ArithError> {
        let width = product_width(a, b)?;
        if a.width() != self.width {
            return Err(ArithError::WidthMismatch(a.width(), self.width));
        }
        Ok(UWord::from_parts_unchecked(
            self.multiply_raw(a.value(), b.value()),
            width,
        ))
    }
}

impl Default for MultiplierConfig {
    fn default() -> Self {
        MultiplierConfig {
            model: Model::Refmlm,
            variant: KomVariant::FourProduct,
            width: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Leaf {
    ErrorFree,
    Mitchell,
}

impl Leaf {
    #[inline]
    fn multiply(self, a: u64, b: u64) -> u64 {
        match self {
            Leaf::ErrorFree => efmlm2_raw(a, b),
            Leaf::Mitchell => mitchell_raw(a, b).0,
        }
    }
}

/// Low and high halves of an operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperandSplit {
    pub low: UWord,
    pub high: UWord,
}

pub fn decompose_operand(a: UWord) -> Result<OperandSplit, ArithError> {
    let w = a.width();
    if !w.is_multiple_of(2) {
        return Err(ArithError::OddWidth(w));
    }
    let half = w / 2;
    Ok(OperandSplit {
        low: UWord::from_parts_unchecked(a.value() & UWord::max_value(half), half),
        high: UWord::from_parts_unchecked(a.value() >> half, half),
    })
}

/// A difference of two half-width values in sign-magnitude form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignMagnitude {
    pub negative: bool,
    pub magnitude: u64,
}

impl SignMagnitude {
    pub fn difference(lhs: u64, rhs: u64) -> Self {
        if lhs >= rhs {
            SignMagnitude {
                negative: false,
                magnitude: lhs - rhs,
            }
        } else {
            SignMagnitude {
                negative: true,
                magnitude: rhs - lhs,
            }
        }
    }

    pub fn to_i128(self) -> i128 {
        if self.negative {
            -(self.magnitude as i128)
        } else {
            self.magnitude as i128
        }
    }
}

/// Saturates the signed recursion result into the 2w-bit product register.
///
/// Only the three-product form over inexact leaves can leave `[0, 2^(2w))`:
/// a leaf error entering through `low` or `high` is no longer cancelled by
/// the cross term.
fn kom_output(a: u64, b: u64, width: u32, leaf: Leaf, variant: KomVariant) -> u64 {
    let total = kom_raw(a, b, width, leaf, variant);
    let max = UWord::max_value(2 * width) as i128;
    total.clamp(0, max) as u64
}

fn kom_raw(a: u64, b: u64, width: u32, leaf: Leaf, variant: KomVariant) -> i128 {
    if width == 2 {
        return leaf.multiply(a, b) as i128;
    }
    let half = width / 2;
    let mask = UWord::max_value(half);
    let (a_l, a_h) = (a & mask, a >> half);
    let (b_l, b_h) = (b & mask, b >> half);

    let low = kom_raw(a_l, b_l, half, leaf, variant);
    let high = kom_raw(a_h, b_h, half, leaf, variant);
    let middle = match variant {
        KomVariant::FourProduct => kom_raw(a_h, b_l, half, leaf, variant) + kom_raw(a_l, b_h, half, leaf, variant),
        KomVariant::ThreeProduct => {
            let da = SignMagnitude::difference(a_l, a_h);
            let db = SignMagnitude::difference(b_h, b_l);
            let magnitude = kom_raw(da.magnitude, db.magnitude, half, leaf, variant);
            let cross = if da.negative != db.negative {
                -magnitude
            } else {
                magnitude
            };
            low + high + cross
        }
    };
    low + (middle << half) + (high << width)
}

/// Multiplies through the configured model. For recursive models this is the
/// KOM recursion down to 2-bit leaves; `exact` and `mitchell` are computed
/// directly at full width.
pub fn kom_multiply(a: UWord, b: UWord, cfg: &MultiplierConfig) -> Result<UWord, ArithError> {
    cfg.multiply(a, b)
}

/// Top-level view of one KOM stage, for printing worked examples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KomStageTrace {
    pub a: OperandSplit,
    pub b: OperandSplit,
    /// Sub-products are signed: the three-product form over inexact leaves
    /// can drive them below zero.
    pub low: i128,
    pub high: i128,
    /// Both middle products (four-product) or the signed cross term
    /// `(a_L − a_H)(b_H − b_L)` (three-product).
    pub middle: MiddleTerm,
    pub product: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiddleTerm {
    Pair {
        mid1: i128,
        mid2: i128,
    },
    Cross {
        lhs: SignMagnitude,
        rhs: SignMagnitude,
        value: i128,
    },
}

/// Runs the outermost KOM stage and reports its intermediate values.
///
/// Only meaningful for recursive models at width > 2.
pub fn kom_trace(a: UWord, b: UWord, cfg: &MultiplierConfig) -> Result<KomStageTrace, ArithError> {
    product_width(a, b)?;
    if a.width() != cfg.width || !cfg.model.is_recursive() || cfg.width < 4 {
        return Err(ArithError::WidthMismatch(a.width(), cfg.width));
    }
    let leaf = match cfg.model {
        Model::Refmlm => Leaf::ErrorFree,
        _ => Leaf::Mitchell,
    };
    let sa = decompose_operand(a)?;
    let sb = decompose_operand(b)?;
    let half = cfg.width / 2;
    let sub = |x: u64, y: u64| kom_raw(x, y, half, leaf, cfg.variant);
    let low = sub(sa.low.value(), sb.low.value());
    let high = sub(sa.high.value(), sb.high.value());
    let middle = match cfg.variant {
        KomVariant::FourProduct => MiddleTerm::Pair {
            mid1: sub(sa.high.value(), sb.low.value()),
            mid2: sub(sa.low.value(), sb.high.value()),
        },
        KomVariant::ThreeProduct => {
            let lhs = SignMagnitude::difference(sa.low.value(), sa.high.value());
            let rhs = SignMagnitude::difference(sb.high.value(), sb.low.value());
            let magnitude = sub(lhs.magnitude, rhs.magnitude);
            let value = if lhs.negative != rhs.negative {
                -magnitude
            } else {
                magnitude
            };
            MiddleTerm::Cross { lhs, rhs, value }
        }
    };
    Ok(KomStageTrace {
        a: sa,
        b: sb,
        low,
        high,
        middle,
        product: cfg.multiply_raw(a.value(), b.value()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(value: u64, width: u32) -> UWord {
        UWord::new(value, width).unwrap()
    }

    fn cfg(model: Model, variant: KomVariant, width: u32) -> MultiplierConfig {
        MultiplierConfig::new(model, variant, width).unwrap()
    }

    #[test]
    fn config_validates_width() {
        for width in [2, 4, 8, 16, 32] {
            assert!(MultiplierConfig::with_model(Model::Refmlm, width).is_ok());
        }
        for width in [0, 1, 3, 6, 12, 64] {
            assert_eq!(
                MultiplierConfig::with_model(Model::Refmlm, width),
                Err(ConfigError::InvalidWidth(width))
            );
        }
    }

    #[test]
    fn names_parse_back() {
        for m in Model::ALL {
            assert_eq!(m.name().parse::<Model>(), Ok(m));
        }
        for v in KomVariant::ALL {
            assert_eq!(v.name().parse::<KomVariant>(), Ok(v));
        }
        assert!("booth".parse::<Model>().is_err());
    }

    #[test]
    fn decompose_examples() {
        let s = decompose_operand(w(16, 8)).unwrap();
        assert_eq!((s.low, s.high), (w(0b0000, 4), w(0b0001, 4)));
        let s = decompose_operand(w(60, 8)).unwrap();
        assert_eq!((s.low, s.high), (w(0b1100, 4), w(0b0011, 4)));
        let s = decompose_operand(w(0, 8)).unwrap();
        assert_eq!((s.low.value(), s.high.value()), (0, 0));
        assert_eq!(decompose_operand(w(5, 3)), Err(ArithError::OddWidth(3)));
    }

    #[test]
    fn fig3_three_product_example() {
        let c = cfg(Model::Refmlm, KomVariant::ThreeProduct, 8);
        assert_eq!(kom_multiply(w(16, 8), w(60, 8), &c).unwrap(), w(960, 16));
        let t = kom_trace(w(16, 8), w(60, 8), &c).unwrap();
        match t.middle {
            MiddleTerm::Cross { lhs, rhs, value } => {
                assert_eq!(lhs.to_i128(), -1);
                assert_eq!(rhs.to_i128(), -9);
                assert_eq!(value, 9);
            }
            other => panic!("unexpected middle term {other:?}"),
        }
        assert_eq!(t.product, 960);
    }

    #[test]
    fn fig1_operands_through_refmlm() {
        for v in KomVariant::ALL {
            let c = cfg(Model::Refmlm, v, 8);
            assert_eq!(kom_multiply(w(18, 8), w(60, 8), &c).unwrap().value(), 1080);
        }
    }

    #[test]
    fn three_by_three_at_four_bits() {
        let ref4 = cfg(Model::Refmlm, KomVariant::FourProduct, 4);
        assert_eq!(kom_multiply(w(3, 4), w(3, 4), &ref4).unwrap().value(), 9);
        let mk4 = cfg(Model::MitchellKom, KomVariant::FourProduct, 4);
        // the low leaf 3×3 carries Mitchell's error straight through
        assert_eq!(kom_multiply(w(3, 4), w(3, 4), &mk4).unwrap().value(), 8);
    }

    #[test]
    fn two_bit_config_uses_leaf_directly() {
        let rows = [
            (Model::Exact, 9),
            (Model::Mitchell, 8),
            (Model::Refmlm, 9),
            (Model::MitchellKom, 8),
        ];
        for (m, expected) in rows {
            let c = cfg(m, KomVariant::FourProduct, 2);
            assert_eq!(c.multiply_raw(3, 3), expected, "{m}");
        }
    }

    #[test]
    fn refmlm_exact_at_four_and_eight_bits() {
        for width in [4u32, 8] {
            for v in KomVariant::ALL {
                let c = cfg(Model::Refmlm, v, width);
                for a in 0..(1u64 << width) {
                    for b in 0..(1u64 << width) {
                        assert_eq!(c.multiply_raw(a, b), a * b);
                    }
                }
            }
        }
    }

    #[test]
    fn mitchell_kom_never_overestimates() {
        for v in KomVariant::ALL {
            let c = cfg(Model::MitchellKom, v, 4);
            for a in 0..16u64 {
                for b in 0..16u64 {
                    assert!(c.multiply_raw(a, b) <= a * b, "{a}x{b} {v}");
                }
            }
        }
    }

    #[test]
    fn three_product_over_mitchell_leaves_saturates() {
        // signed totals from an exact-integer transcription of the recursion
        let c = cfg(Model::MitchellKom, KomVariant::ThreeProduct, 8);
        assert_eq!(c.multiply_raw(3, 23), 0); // total −16
        assert_eq!(c.multiply_raw(3, 27), 0); // total −4
        assert_eq!(c.multiply_raw(3, 24), 152); // true product 72
        assert_eq!(c.multiply_raw(3, 20), 76);
        let t = kom_trace(w(3, 8), w(23, 8), &c).unwrap();
        let MiddleTerm::Cross { value, .. } = t.middle else {
            panic!("expected a cross term")
        };
        assert_eq!(t.low + ((t.low + t.high + value) << 4) + (t.high << 8), -16);
    }

    #[test]
    fn cross_term_identity() {
        for a in 0..256u64 {
            for b in 0..256u64 {
                let (a_l, a_h) = ((a & 15) as i64, (a >> 4) as i64);
                let (b_l, b_h) = ((b & 15) as i64, (b >> 4) as i64);
                assert_eq!(a_l * b_h + a_h * b_l, a_l * b_l + a_h * b_h + (a_l - a_h) * (b_h - b_l));
            }
        }
    }

    #[test]
    fn sub_products_order_independent() {
        // Rebuild the 8-bit product from its four half-width products
        // summed in every order; the result must not depend on it.
        let c = cfg(Model::MitchellKom, KomVariant::FourProduct, 8);
        let half = cfg(Model::MitchellKom, KomVariant::FourProduct, 4);
        for (a, b) in [(18u64, 60u64), (255, 255), (0xA5, 0x5A), (77, 201)] {
            let sa = decompose_operand(w(a, 8)).unwrap();
            let sb = decompose_operand(w(b, 8)).unwrap();
            let terms = [
                half.multiply_raw(sa.low.value(), sb.low.value()),
                half.multiply_raw(sa.high.value(), sb.low.value()) << 4,
                half.multiply_raw(sa.low.value(), sb.high.value()) << 4,
                half.multiply_raw(sa.high.value(), sb.high.value()) << 8,
            ];
            let forward: u64 = terms.iter().sum();
            let backward: u64 = terms.iter().rev().sum();
            let (x, y) = rayon::join(|| terms[0] + terms[3], || terms[1] + terms[2]);
            assert_eq!(forward, c.multiply_raw(a, b));
            assert_eq!(backward, forward);
            assert_eq!(x + y, forward);
        }
    }

    #[test]
    fn multiply_rejects_wrong_width() {
        let c = cfg(Model::Refmlm, KomVariant::FourProduct, 8);
        assert!(c.multiply(w(3, 4), w(3, 4)).is_err());
        assert!(c.multiply(w(3, 8), w(3, 4)).is_err());
    }
}
