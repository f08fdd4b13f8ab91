//! Seed derivation.
//!
//! Every randomized stage draws from its own ChaCha8 stream. Stream seeds are
//! derived from the run's master seed with a SplitMix64 finalizer applied to
//! `(master, stream tag, counter)`, so sample `i` of a corpus gets the same
//! seed regardless of how many workers render the corpus or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StageRng = ChaCha8Rng;

/// Independent random streams of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Scenario = 1,
    Split = 2,
    Pairs = 3,
    Init = 4,
    Support = 5,
    Noise = 6,
    Bits = 7,
    Hops = 8,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `seed = mix(mix(mix(master) ^ tag) ^ counter)`.
pub fn derive_seed(master: u64, stream: Stream, counter: u64) -> u64 {
    let a = splitmix64(master);
    let b = splitmix64(a ^ (stream as u64).wrapping_mul(0xd1b5_4a32_d192_ed03));
    splitmix64(b ^ counter)
}

pub fn stage_rng(master: u64, stream: Stream, counter: u64) -> StageRng {
    StageRng::seed_from_u64(derive_seed(master, stream, counter))
}

pub fn rng_from_seed(seed: u64) -> StageRng {
    StageRng::seed_from_u64(seed)
}
