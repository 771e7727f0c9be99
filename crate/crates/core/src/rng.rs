//! Seeded random streams shared by every simulator in the crate.
//!
//! All randomness flows through [`SimRng`], a ChaCha8 stream cipher used as a
//! counter-based generator. Its output is specified bit-for-bit and does not
//! depend on the platform, so a seed fixes a run everywhere. The sampling
//! helpers below consume the raw 32/64-bit outputs directly and use the
//! pure-Rust `libm` for logarithms, which keeps real-valued samples portable
//! as well.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// The project's random generator. Fixed for the lifetime of the CSV formats.
pub type SimRng = ChaCha8Rng;

/// Builds a generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derives the seed of trial `k` from a base seed.
///
/// `mix_seed(s, k) = splitmix64_finalize(s + (k + 1) * 0x9E3779B97F4A7C15)`, with
/// wrapping arithmetic. Trial seeds depend only on `(s, k)`, never on the
/// worker that runs the trial.
pub fn mix_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform integer in `[0, bound)` (Lemire's multiply-and-reject).
///
/// # Panics
/// If `bound == 0`.
#[inline]
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: u32) -> u32 {
    assert!(bound > 0, "uniform_below: empty range");
    let mut m = u64::from(rng.next_u32()) * u64::from(bound);
    let mut low = m as u32;
    if low < bound {
        let threshold = bound.wrapping_neg() % bound;
        while low < threshold {
            m = u64::from(rng.next_u32()) * u64::from(bound);
            low = m as u32;
        }
    }
    (m >> 32) as u32
}

/// Uniform index in `[0, len)`.
#[inline]
pub fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, len: usize) -> usize {
    let bound = u32::try_from(len).expect("index range exceeds u32");
    uniform_below(rng, bound) as usize
}

/// Uniform real in `[0, 1)` with 53 random bits.
#[inline]
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `true` with probability `p`.
#[inline]
pub fn bernoulli<R: RngCore + ?Sized>(rng: &mut R, p: f64) -> bool {
    unit_f64(rng) < p
}

/// Exponential sample with the given rate, by inversion.
#[inline]
pub fn exponential<R: RngCore + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    // 1 - U lies in (0, 1], so the logarithm is finite.
    -libm::log(1.0 - unit_f64(rng)) / rate
}

/// Geometric sample on `{0, 1, 2, ...}` with `Pr(k) = (1 - p)^k p`.
#[inline]
pub fn geometric0<R: RngCore + ?Sized>(rng: &mut R, p: f64) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    let v = 1.0 - unit_f64(rng);
    let k = libm::floor(libm::log(v) / libm::log1p(-p));
    if k >= u64::MAX as f64 {
        u64::MAX
    } else {
        k as u64
    }
}

/// In-place Fisher-Yates shuffle.
pub fn shuffle<T, R: RngCore + ?Sized>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = uniform_index(rng, i + 1);
        items.swap(i, j);
    }
}
