//! Deterministic per-trial random streams.
//!
//! Trial `i` of a run seeded with `s` always draws from `SplitMix64(s + i)`,
//! so sample points never depend on thread scheduling.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

pub fn trial_rng(seed: u64, trial: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed.wrapping_add(trial))
}

/// Uniform integer in `[-bound, bound]` as an exact rational.
pub fn sample_coordinate(rng: &mut SplitMix64, bound: u64) -> BigRational {
    let b = bound as i64;
    BigRational::from_integer(BigInt::from(rng.random_range(-b..=b)))
}

pub fn sample_point(rng: &mut SplitMix64, len: usize, bound: u64) -> Vec<BigRational> {
    (0..len).map(|_| sample_coordinate(rng, bound)).collect()
}
