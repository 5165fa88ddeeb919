//! Seeded randomness used by splitting, fold assignment, and the synthetic
//! corpus generator.
//!
//! Algorithm `xoshiro256**-v1`:
//!
//! * state: xoshiro256** seeded from a `u64` through SplitMix64
//!   (the `seed_from_u64` expansion of `rand_xoshiro` 0.6);
//! * bounded integers: `next_u64() % n` after rejecting draws at or above
//!   `floor(2^64 / n) * n`;
//! * unit reals: `(next_u64() >> 11) * 2^-53`, uniform on `[0, 1)`;
//! * shuffling: Fisher-Yates from the last index down,
//!   `for i in (1..len).rev() { swap(i, below(i + 1)) }`.
//!
//! Any reimplementation following these four rules reproduces every split,
//! fold and synthetic corpus bit for bit.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// Name recorded alongside seeds in reports.
pub const ALGORITHM: &str = "xoshiro256**-v1";

#[derive(Debug, Clone)]
pub struct SeededRng(Xoshiro256StarStar);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `[0, n)`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let zone = (u64::MAX / n) * n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// Index into a cumulative weight table (last entry = total weight).
    pub fn pick_cumulative(&mut self, cumulative: &[f64]) -> usize {
        let total = *cumulative.last().expect("empty weight table");
        let target = self.unit_f64() * total;
        cumulative
            .partition_point(|&c| c <= target)
            .min(cumulative.len() - 1)
    }
}
