//! Seed derivation for independent, reproducible random substreams.
//!
//! Every randomized procedure takes a 64-bit seed and derives one ChaCha
//! substream per logical unit of work (level, repetition, sample, retry).
//! Substreams indexed by `(seed, tag)` are independent of execution order,
//! which is what makes outputs identical across parallelism degrees.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One step of the splitmix64 sequence; used only to expand seeds into keys.
fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
}

fn splitmix64_output(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `(seed, tag)` into a single 64-bit stream identifier.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut state = seed ^ splitmix64_output(tag.wrapping_mul(0xd134_2543_de82_ef95));
    splitmix64(&mut state);
    splitmix64_output(state)
}

/// Deterministic ChaCha substream for `(seed, tag)`.
pub fn substream(seed: u64, tag: u64) -> ChaCha8Rng {
    let mut state = derive_seed(seed, tag);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        splitmix64(&mut state);
        chunk.copy_from_slice(&splitmix64_output(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
