//! Deterministic, splittable random streams.
//!
//! The generator is pinned so that every number the toolkit draws is
//! reproducible from a single master seed:
//!
//! * raw stream: ChaCha12 (`rand_chacha`), seeded through
//!   `SeedableRng::seed_from_u64`;
//! * `split(label)`: child seed = splitmix64(fnv1a64(parent seed bytes ++
//!   label bytes)). Children depend only on the seed lineage, never on how
//!   much of the parent stream has been consumed, so call order and thread
//!   scheduling cannot perturb them;
//! * `uniform`: 53-bit mantissa scaling of `next_u64`;
//! * `normal`: Box-Muller (cosine branch, no cached spare);
//! * `permutation`: Fisher-Yates, index drawn as `next_u64 % bound` (the
//!   modulo bias at 64 bits is far below anything observable here).

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a64(seed: u64, label: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for byte in seed.to_le_bytes().iter().chain(label) {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A seeded random stream with reproducible, label-addressed children.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    stream: ChaCha12Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            stream: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// The seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derive an independent child stream addressed by `label`.
    ///
    /// The child is a pure function of `(self.seed(), label)`; the parent is
    /// not advanced and its position is irrelevant.
    pub fn split(&self, label: &str) -> Rng {
        Rng::new(splitmix64(fnv1a64(self.seed, label.as_bytes())))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.stream.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53-bit resolution.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi]`. A degenerate interval returns `lo`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Parameter(format!(
                "uniform bounds out of order: [{lo}, {hi}]"
            )));
        }
        Ok(lo + (hi - lo) * self.unit())
    }

    /// Normal draw with the given mean and standard deviation.
    ///
    /// `sd == 0` returns `mean` exactly (and consumes no stream values).
    pub fn normal(&mut self, mean: f64, sd: f64) -> Result<f64> {
        if sd.is_nan() || sd < 0.0 {
            return Err(Error::Parameter(format!(
                "normal standard deviation must be >= 0, got {sd}"
            )));
        }
        if sd == 0.0 {
            return Ok(mean);
        }
        // Box-Muller; u1 is shifted into (0, 1) so the log is finite.
        let u1 = ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
        let u2 = self.unit();
        let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        Ok(mean + sd * z)
    }

    /// Uniform index in `0..n`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index bound must be positive");
        (self.next_u64() % n as u64) as usize
    }

    /// Uniformly random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.index(i + 1);
            order.swap(i, j);
        }
        order
    }

    /// `k` distinct values from `0..n`, by partial Fisher-Yates.
    pub fn sample_without_replacement(&mut self, n: usize, k: usize) -> Result<Vec<usize>> {
        if k > n {
            return Err(Error::Parameter(format!(
                "cannot sample {k} distinct values from a pool of {n}"
            )));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.index(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        Ok(pool)
    }
}
