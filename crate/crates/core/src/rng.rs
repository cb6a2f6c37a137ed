//! xorshift64* generator.
//!
//! The stream is part of the noise and sampling contracts, so the generator
//! is spelled out here instead of coming from a general-purpose RNG crate
//! whose output may change between versions.

const MULTIPLIER: u64 = 2_685_821_657_736_338_717;

/// Substituted for a zero seed; zero is a fixed point of the xorshift step.
pub const ZERO_SEED_REPLACEMENT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 { ZERO_SEED_REPLACEMENT } else { seed };
        XorShift64Star { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut s = self.state;
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        self.state = s;
        s.wrapping_mul(MULTIPLIER)
    }

    /// Uniform in `[0, 1)`: the top 53 bits of the output scaled by 2^-53.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, lo + span)` by multiply-shift reduction.
    #[inline]
    pub fn next_in_span(&mut self, lo: u64, span: u64) -> u64 {
        lo + ((self.next_u64() as u128 * span as u128) >> 64) as u64
    }
}
