//! Deterministic seed derivation for multi-trial experiments.
//!
//! Every sampling routine in this crate takes a single `u64` seed and drives a
//! ChaCha8 stream from it. Experiments running many trials derive one sub-seed per
//! trial with [`trial_seed`], so trial outcomes are independent of evaluation order
//! and a parallel driver would reproduce the serial estimates bit for bit.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer. Bijective on u64, good avalanche behavior.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for trial `index` under `master`. Distinct indices give decorrelated
/// streams; the mapping is pure so any trial can be replayed in isolation.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(1)))
}

/// The RNG used throughout: seedable, portable, fast enough for desk-scale
/// Monte Carlo.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_are_stable_and_distinct() {
        let a = trial_seed(42, 0);
        let b = trial_seed(42, 1);
        let c = trial_seed(43, 0);
        assert_eq!(a, trial_seed(42, 0));
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn splitmix_reference_values() {
        // Successive SplitMix64 states advance by the golden gamma; outputs of
        // distinct states must differ and equal states must agree.
        let s0 = splitmix64(1234567);
        let s1 = splitmix64(1234567 + 0x9E37_79B9_7F4A_7C15);
        assert_ne!(s0, s1);
        assert_eq!(s0, splitmix64(1234567));
    }
}
