//! Deterministic pseudorandom algebra shared by every generator.
//!
//! Seeds are reals in `[-1, 1]`. [`mix`] combines two seeds symmetrically,
//! [`self_mix`] is its diagonal, and [`between`] picks an altitude between two
//! others, biased towards their midpoint.
//!
//! The mixing is defined on a fixed-point encoding so that results are
//! bit-identical on every platform: each seed is scaled by 2^30 and rounded to
//! an `i64`, the symmetric pair `(a + b, a * b)` is fed through a 64-bit
//! avalanche finalizer, and the top 53 bits are mapped affinely back onto
//! `[-1, 1)`. The constants below are part of the output format; changing any
//! of them changes every generated map.

use std::fmt;

/// Fixed-point resolution of the seed encoding (2^30 steps per unit).
pub const SEED_SCALE: f64 = (1u64 << 30) as f64;

const PRODUCT_SALT: u64 = 0x9e37_79b9_7f4a_7c15;
const ROOT_SEED_SALT: u64 = 0xd6e8_feb8_6659_fd93;
const ROOT_ALTITUDE_SALT: u64 = 0xa076_1d64_78bd_642f;

/// A pseudorandom value in `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Seed(f64);

impl Seed {
    pub const ZERO: Seed = Seed(0.0);

    /// Wraps `value`, which must lie in `[-1, 1]`.
    #[inline]
    pub fn new(value: f64) -> Seed {
        debug_assert!(
            (-1.0..=1.0).contains(&value),
            "seed {value} outside [-1, 1]"
        );
        Seed(value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Canonical fixed-point encoding used by [`mix`] and for tie-breaking.
    #[inline]
    pub fn encode(self) -> i64 {
        (self.0 * SEED_SCALE).round() as i64
    }

    #[inline]
    pub fn decode(code: i64) -> Seed {
        Seed::new(code as f64 / SEED_SCALE)
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// MurmurHash3 64-bit finalizer.
#[inline]
pub fn avalanche(mut k: u64) -> u64 {
    k ^= k >> 33;
    k = k.wrapping_mul(0xff51_afd7_ed55_8ccd);
    k ^= k >> 33;
    k = k.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    k ^= k >> 33;
    k
}

/// Maps the top 53 bits of `bits` onto `[-1, 1)`. Exact in `f64`.
#[inline]
pub fn unit_from_bits(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 52) as f64) - 1.0
}

/// Symmetric mixing function: `mix(a, b) == mix(b, a)` bit for bit.
#[inline]
pub fn mix(a: Seed, b: Seed) -> Seed {
    let (a, b) = (a.encode(), b.encode());
    let sum = a.wrapping_add(b) as u64;
    let product = a.wrapping_mul(b) as u64;
    Seed(unit_from_bits(avalanche(sum ^ avalanche(product ^ PRODUCT_SALT))))
}

#[inline]
pub fn self_mix(s: Seed) -> Seed {
    mix(s, s)
}

/// `(h1 + h2 + s^3 (h1 - h2)) / 2`, kept inside `[min(h1, h2), max(h1, h2)]`.
///
/// The clamp only matters at `s = ±1`, where rounding can push the literal
/// formula one ulp past the endpoint.
#[inline]
pub fn between(h1: f64, h2: f64, s: Seed) -> f64 {
    let s = s.0;
    let raw = (h1 + h2 + s * s * s * (h1 - h2)) / 2.0;
    raw.clamp(h1.min(h2), h1.max(h2))
}

/// Seed of the `index`-th root vertex for `master_seed`.
pub fn root_seed(master_seed: u64, index: u64) -> Seed {
    Seed(unit_from_bits(avalanche(
        master_seed ^ avalanche(index.wrapping_add(ROOT_SEED_SALT)),
    )))
}

/// Altitude of the `index`-th root vertex for `master_seed`, in `[-1, 1)`.
pub fn root_altitude(master_seed: u64, index: u64) -> f64 {
    unit_from_bits(avalanche(
        master_seed ^ avalanche(index.wrapping_add(ROOT_ALTITUDE_SALT)),
    ))
}
