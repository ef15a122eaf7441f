//! Seed derivation and the per-site coloring hash.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hexlattice::HexCoord;

/// Name recorded in output metadata for the per-site coloring stream.
pub const SITE_GENERATOR: &str = "splitmix64-site-hash";
/// Name recorded for the sequential streams (Brownian paths, bootstrap).
pub const STREAM_GENERATOR: &str = "chacha8";

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const SITE_MIX: u64 = 0xd6e8_feb8_6659_fd93;

/// One round of the splitmix64 output function.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform in `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seed of replica `idx` of a run seeded with `seed`.
#[inline]
pub fn replica_seed(seed: u64, idx: u64) -> u64 {
    splitmix64(seed ^ idx.wrapping_mul(GOLDEN))
}

/// The site hash: a function of `(seed, q, r)` only, so a site keeps its
/// color when the domain around it changes.
#[derive(Debug, Clone, Copy)]
pub struct SiteHash {
    key: u64,
}

impl SiteHash {
    pub fn new(seed: u64) -> Self {
        Self { key: splitmix64(seed) }
    }

    #[inline]
    pub fn unit(&self, h: HexCoord) -> f64 {
        let packed = ((h.q as u32 as u64) << 32) | h.r as u32 as u64;
        unit_f64(splitmix64(self.key ^ packed.wrapping_mul(SITE_MIX)))
    }
}

/// A ChaCha8 stream for replica `idx`.
pub fn stream(seed: u64, idx: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(idx);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference splitmix64 generator seeded with 0
        // are splitmix64(0), splitmix64(GOLDEN), ...
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(splitmix64(GOLDEN), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn site_hash_is_uniform_enough() {
        let s = SiteHash::new(7);
        let n = 20_000;
        let mean: f64 = (0..n).map(|i| s.unit(HexCoord::new(i % 141, i / 141))).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 4.0 * (1.0f64 / 12.0 / n as f64).sqrt());
    }

    #[test]
    fn replica_seeds_differ() {
        let a: std::collections::HashSet<u64> = (0..1000).map(|i| replica_seed(1, i)).collect();
        assert_eq!(a.len(), 1000);
    }
}
