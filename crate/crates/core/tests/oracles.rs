//! Models checked against independent references: plain multiplication,
//! Mitchell's formula evaluated in exact rationals, and the Karatsuba
//! identity over integers. Frozen statistics were computed with those
//! references, not with the library.

use proptest::prelude::*;
use refmlm::analysis::{analyze_exhaustive, Convention};
use refmlm::{KomVariant, Model, MultiplierConfig, UWord};

/// Exact rational p/q with q a power of two.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Dyadic {
    num: u128,
    shift: u32,
}

impl Dyadic {
    fn add(self, other: Dyadic) -> Dyadic {
        let shift = self.shift.max(other.shift);
        Dyadic {
            num: (self.num << (shift - self.shift)) + (other.num << (shift - other.shift)),
            shift,
        }
    }

    fn ge_one(self) -> bool {
        self.num >= 1u128 << self.shift
    }

    fn times_pow2(self, e: u32) -> u128 {
        let v = self.num << e;
        assert_eq!(v % (1u128 << self.shift), 0, "antilog left a fraction");
        v >> self.shift
    }
}

/// Mitchell's product from the textbook formula, with `x = (N − 2^k) / 2^k`.
fn mitchell_oracle(a: u64, b: u64) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    let k1 = 63 - a.leading_zeros();
    let k2 = 63 - b.leading_zeros();
    let x1 = Dyadic {
        num: (a - (1 << k1)) as u128,
        shift: k1,
    };
    let x2 = Dyadic {
        num: (b - (1 << k2)) as u128,
        shift: k2,
    };
    let s = x1.add(x2);
    if !s.ge_one() {
        Dyadic { num: 1, shift: 0 }.add(s).times_pow2(k1 + k2)
    } else {
        s.times_pow2(k1 + k2 + 1)
    }
}

fn cfg(model: Model, variant: KomVariant, width: u32) -> MultiplierConfig {
    MultiplierConfig::new(model, variant, width).unwrap()
}

#[test]
fn flat_mitchell_matches_rational_formula() {
    for width in [2u32, 4, 8] {
        let c = cfg(Model::Mitchell, KomVariant::FourProduct, width);
        for a in 0..(1u64 << width) {
            for b in 0..(1u64 << width) {
                assert_eq!(c.multiply_raw(a, b) as u128, mitchell_oracle(a, b), "{a}x{b}");
            }
        }
    }
}

#[test]
fn two_bit_mitchell_leaf_in_four_bit_recursion() {
    // mitchell-kom rebuilt by hand from the rational leaf oracle
    let leaf = |x: u64, y: u64| mitchell_oracle(x, y) as u64;
    let c = cfg(Model::MitchellKom, KomVariant::FourProduct, 4);
    for a in 0..16u64 {
        for b in 0..16u64 {
            let (al, ah, bl, bh) = (a & 3, a >> 2, b & 3, b >> 2);
            let expected = leaf(al, bl) + ((leaf(ah, bl) + leaf(al, bh)) << 2) + (leaf(ah, bh) << 4);
            assert_eq!(c.multiply_raw(a, b), expected);
        }
    }
}

#[test]
fn frozen_four_bit_statistics() {
    // (model, variant, convention, pairs, AER %, MER %, exact pairs), from
    // enumerating the rational oracle with exact fractions
    let rows = [
        (
            Model::Mitchell,
            KomVariant::FourProduct,
            Convention::OrderedNonzero,
            225,
            3.0007275490029772,
            100.0 / 9.0,
            104,
        ),
        (
            Model::Mitchell,
            KomVariant::FourProduct,
            Convention::UnorderedNonzero,
            120,
            3.0625880715568807,
            100.0 / 9.0,
            54,
        ),
        (
            Model::MitchellKom,
            KomVariant::FourProduct,
            Convention::OrderedNonzero,
            225,
            1.4838046846038855,
            100.0 / 9.0,
            176,
        ),
        (
            Model::MitchellKom,
            KomVariant::FourProduct,
            Convention::UnorderedNonzero,
            120,
            1.6153640454339753,
            100.0 / 9.0,
            92,
        ),
        (
            Model::MitchellKom,
            KomVariant::ThreeProduct,
            Convention::OrderedNonzero,
            225,
            1.5726988074640422,
            23.809523809523807,
            192,
        ),
        (
            Model::MitchellKom,
            KomVariant::ThreeProduct,
            Convention::UnorderedNonzero,
            120,
            1.764855330040145,
            23.809523809523807,
            100,
        ),
    ];
    for (model, variant, conv, pairs, aer, mer, exact) in rows {
        let s = analyze_exhaustive(&cfg(model, variant, 4), conv).unwrap();
        assert_eq!(s.pairs_evaluated, pairs);
        assert!(
            (s.aer_percent - aer).abs() < 1e-9,
            "{model} {variant} {conv}: {}",
            s.aer_percent
        );
        assert!(
            (s.mer_percent - mer).abs() < 1e-9,
            "{model} {variant} {conv}: {}",
            s.mer_percent
        );
        assert_eq!(s.histogram[0].count, exact, "{model} {variant} {conv}");
    }
}

#[test]
fn three_product_mitchell_kom_still_underestimates() {
    let c = cfg(Model::MitchellKom, KomVariant::ThreeProduct, 4);
    for a in 0..16u64 {
        for b in 0..16u64 {
            assert!(c.multiply_raw(a, b) <= a * b);
        }
    }
}

#[test]
fn swap_symmetry_of_aer() {
    // Every model here is symmetric in its operands, so the ordered
    // enumeration holds each unordered pair twice.
    for model in Model::ALL {
        let c = cfg(model, KomVariant::FourProduct, 8);
        for a in 1..256u64 {
            for b in a..256u64 {
                assert_eq!(c.multiply_raw(a, b), c.multiply_raw(b, a));
            }
        }
    }
}

fn corner_values(width: u32) -> Vec<u64> {
    let max = UWord::max_value(width);
    vec![
        0,
        1,
        2,
        max,
        max - 1,
        1 << (width - 1),
        0x5555_5555 & max,
        0xAAAA_AAAA & max,
    ]
}

#[test]
fn refmlm_exact_on_corners_at_every_width() {
    for width in [2u32, 4, 8, 16, 32] {
        for variant in KomVariant::ALL {
            let c = cfg(Model::Refmlm, variant, width);
            for &a in &corner_values(width) {
                for &b in &corner_values(width) {
                    assert_eq!(c.multiply_raw(a, b), a * b, "{a}x{b} w={width} {variant}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn refmlm_exact_random_32(a in 0u64..(1 << 32), b in 0u64..(1 << 32)) {
        for variant in KomVariant::ALL {
            let c = cfg(Model::Refmlm, variant, 32);
            prop_assert_eq!(c.multiply_raw(a, b), a * b);
        }
    }

    #[test]
    fn flat_mitchell_matches_oracle_16(a in 0u64..(1 << 16), b in 0u64..(1 << 16)) {
        let c = cfg(Model::Mitchell, KomVariant::FourProduct, 16);
        prop_assert_eq!(c.multiply_raw(a, b) as u128, mitchell_oracle(a, b));
    }

    #[test]
    fn models_never_exceed_true_product_16(a in 0u64..(1 << 16), b in 0u64..(1 << 16)) {
        for model in [Model::Mitchell, Model::MitchellKom] {
            let c = cfg(model, KomVariant::FourProduct, 16);
            prop_assert!(c.multiply_raw(a, b) <= a * b);
        }
    }
}
