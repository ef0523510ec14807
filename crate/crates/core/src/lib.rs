//! Evolving fixed-size subsets of a training set as fitness predictors for
//! neural network evaluation.
//!
//! A predictor is a list of training-sample indices. Its fitness is the test
//! accuracy of a network trained only on those samples. The [`evolution`]
//! module searches for good predictors with a genetic algorithm; [`nn`] holds
//! the network that is trained during each evaluation and [`data`] the
//! datasets it is trained on.

pub mod data;
pub mod evolution;
pub mod nn;
pub mod tensor;

use rand::SeedableRng;

pub use data::{Dataset, SubsetView};
pub use tensor::Tensor;

/// Random generator used throughout; reproducible across platforms.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// SplitMix64 finalizer, used to derive independent seeds from structured input.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_add(0x9e37_79b9_7f4a_7c15).rotate_left(17);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
