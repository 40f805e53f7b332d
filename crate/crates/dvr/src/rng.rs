//! Deterministic random streams.
//!
//! Every source of randomness in the crate is a ChaCha8 stream derived
//! from the master seed and a domain tag, so independent concerns (batch
//! sampling, Bernoulli selection, splits, evaluation subsampling) never
//! share state. Disabling one consumer leaves every other stream
//! untouched, which is what makes single-threaded runs bitwise
//! reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream for `tag` under the master `seed`.
pub fn stream(seed: u64, tag: &str) -> ChaCha8Rng {
    stream_indexed(seed, tag, 0)
}

/// Stream for `(tag, index)`, e.g. one independent stream per user.
pub fn stream_indexed(seed: u64, tag: &str, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed ^ fnv1a(tag.as_bytes()) ^ index.wrapping_mul(0x9e3779b97f4a7c15);
    for chunk in key.chunks_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Serializable snapshot of a stream: its 32-byte key and word position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamState {
    pub seed: [u8; 32],
    pub word_pos: u128,
}

pub fn save_stream(rng: &ChaCha8Rng) -> StreamState {
    StreamState {
        seed: rng.get_seed(),
        word_pos: rng.get_word_pos(),
    }
}

pub fn restore_stream(state: &StreamState) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(state.seed);
    rng.set_word_pos(state.word_pos);
    rng
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
