//! Seed derivation and the exact sampling primitives used by the generators.
//!
//! Streams are derived by hashing `(seed, index)` with SplitMix64, so any
//! sub-stream (a trial, a tree, a shard) can be reconstructed without
//! replaying the ones before it.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub type SeedRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sub-stream `index` of `seed`.
#[inline]
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(mix64(seed.wrapping_add(GOLDEN)) ^ index.wrapping_mul(GOLDEN).wrapping_add(0x632b_e59b_d9b4_e019))
}

/// Domain-separated sub-stream: `tag` keeps e.g. trial and tree streams apart.
#[inline]
pub fn derive_tagged(seed: u64, tag: u64, index: u64) -> u64 {
    derive_seed(derive_seed(seed, tag ^ 0xa076_1d64_78bd_642f), index)
}

pub fn rng_from_seed(seed: u64) -> SeedRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Top 53 bits of `bits` as a float in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..len` by widening multiply with rejection (no modulo bias).
///
/// Panics if `len == 0`.
#[inline]
pub fn bounded_index<R: RngCore + ?Sized>(rng: &mut R, len: usize) -> usize {
    assert!(len > 0, "bounded_index on empty range");
    let range = len as u64;
    // 2^64 mod range
    let threshold = range.wrapping_neg() % range;
    loop {
        let x = rng.next_u64();
        let wide = (x as u128) * (range as u128);
        if (wide as u64) >= threshold {
            return (wide >> 64) as usize;
        }
    }
}

/// Bernoulli(p) draw using 53 random bits. Exact at `p = 0` and `p = 1`.
#[inline]
pub fn bernoulli<R: RngCore + ?Sized>(rng: &mut R, p: f64) -> bool {
    unit_f64(rng.next_u64()) < p
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    #[test]
    fn derived_streams_differ() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        let c = derive_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(7, 0));
        assert_ne!(derive_tagged(7, 1, 0), derive_tagged(7, 2, 0));
    }

    #[test]
    fn bounded_index_covers_range_uniformly() {
        let mut rng = rng_from_seed(1);
        let mut counts = vec![0u32; 3];
        for _ in 0..30_000 {
            counts[bounded_index(&mut rng, 3)] += 1;
        }
        for c in counts {
            assert!((c as i64 - 10_000).abs() < 400, "{c}");
        }
        assert_eq!(bounded_index(&mut rng, 1), 0);
    }

    #[test]
    fn bernoulli_extremes() {
        let mut rng = rng_from_seed(2);
        assert!((0..1000).all(|_| bernoulli(&mut rng, 1.0)));
        assert!((0..1000).all(|_| !bernoulli(&mut rng, 0.0)));
    }
}
