//! Seed derivation. Every randomized stage draws from its own ChaCha12
//! substream keyed by (master seed, trial, stage), so trials can run in
//! parallel and any stage can be replayed in isolation. Streams are stable
//! across runs and platforms; bit-identity with other languages is not a
//! goal.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Generation stages with fixed substream tags.
pub mod stage {
    pub const CENTRAL: u64 = 1;
    pub const COLLEGES: u64 = 2;
    pub const STUDENTS: u64 = 3;
    pub const RESOURCES: u64 = 4;
    pub const MISC: u64 = 5;
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Substream for a (trial, stage) pair under a master seed.
pub fn substream(seed: u64, trial: u64, stage: u64) -> ChaCha12Rng {
    let mixed = splitmix(splitmix(seed ^ splitmix(trial)) ^ splitmix(stage.wrapping_mul(0xa5a5_a5a5_a5a5_a5a5)));
    ChaCha12Rng::seed_from_u64(mixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn substreams_are_stable_and_distinct() {
        let mut a = substream(42, 0, stage::CENTRAL);
        let mut b = substream(42, 0, stage::CENTRAL);
        assert_eq!(a.next_u64(), b.next_u64());

        let mut c = substream(42, 0, stage::COLLEGES);
        let mut d = substream(42, 1, stage::CENTRAL);
        let base = substream(42, 0, stage::CENTRAL).next_u64();
        assert_ne!(base, c.next_u64());
        assert_ne!(base, d.next_u64());
    }
}
