//! Seeded random draws for the identity suites.
//!
//! Every trial gets its own generator derived from `(seed, stream, n, trial)`,
//! so results do not depend on thread scheduling or on which trials ran first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hyper::min_contiguous_abs;

/// Sampling interval for random arguments.
pub const SAMPLE_RANGE: f64 = 2.0;
/// Minimum distance of contiguous sums from zero for sampled tuples.
pub const SAMPLE_MARGIN: f64 = 0.1;
/// Minimum distance of every subset sum from zero, for suites that permute
/// arguments across blocks.
pub const SUBSET_MARGIN: f64 = 0.02;

const MAX_REJECTIONS: usize = 1_000_000;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for one trial of one suite.
pub fn trial_rng(seed: u64, stream: &str, n: usize, trial: usize) -> ChaCha8Rng {
    let mut h = mix(seed);
    for b in stream.bytes() {
        h = mix(h ^ b as u64);
    }
    h = mix(h ^ n as u64);
    h = mix(h ^ trial as u64);
    ChaCha8Rng::seed_from_u64(h)
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-SAMPLE_RANGE..SAMPLE_RANGE)).collect()
}

/// Uniform draw in `[-2, 2]^n` whose contiguous sums all clear `margin`.
pub fn regular_tuple(rng: &mut impl Rng, n: usize, margin: f64) -> Vec<f64> {
    for _ in 0..MAX_REJECTIONS {
        let v = uniform_vec(rng, n);
        if n == 0 || min_contiguous_abs(&v) >= margin {
            return v;
        }
    }
    panic!("could not draw a regular {n}-tuple with margin {margin}");
}

pub fn min_subset_abs(args: &[f64]) -> f64 {
    let n = args.len();
    let mut best = f64::INFINITY;
    for mask in 1u64..(1u64 << n) {
        let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| args[i]).sum();
        best = best.min(s.abs());
    }
    best
}

/// Uniform draw whose nonempty subset sums all clear `margin`.
pub fn subset_regular_tuple(rng: &mut impl Rng, n: usize, margin: f64) -> Vec<f64> {
    assert!(n < 20, "subset screening is exponential in n");
    for _ in 0..MAX_REJECTIONS {
        let v = uniform_vec(rng, n);
        if n == 0 || min_subset_abs(&v) >= margin {
            return v;
        }
    }
    panic!("could not draw a subset-regular {n}-tuple with margin {margin}");
}
