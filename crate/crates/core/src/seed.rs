//! Seed splitting.
//!
//! Every randomized stage draws from its own stream so stages are independently
//! reproducible. The rule is fixed and documented because reports promise
//! bit-identical reruns:
//!
//! * `derive(label)`  → `splitmix64(seed ^ fnv1a64(label))`
//! * `index(i)`       → `splitmix64(seed + (i + 1) · 0x9E3779B97F4A7C15)`
//! * `rng()`          → `ChaCha8Rng::seed_from_u64(seed)`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn fnv1a64(s: &str) -> u64 {
    s.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3))
}

/// Stateless keyed hash of a point, used for deterministic per-input coin flips.
#[inline]
pub fn mix(key: u64, x: u64) -> u64 {
    splitmix64(key ^ splitmix64(x))
}

/// Map a 64-bit hash to [0, 1).
#[inline]
pub fn unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn value(self) -> u64 {
        self.seed
    }

    pub fn derive(self, label: &str) -> Self {
        Self { seed: splitmix64(self.seed ^ fnv1a64(label)) }
    }

    pub fn index(self, i: u64) -> Self {
        Self { seed: splitmix64(self.seed.wrapping_add(i.wrapping_add(1).wrapping_mul(GOLDEN))) }
    }

    pub fn rng(self) -> Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}
