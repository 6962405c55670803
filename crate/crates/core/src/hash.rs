//! Stateless keyed hashing used for all seeded sampling.

/// The SplitMix64 finalizer.
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash of a word sequence under `seed`.
pub fn hash_words(seed: u64, words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(seed), |h, &w| splitmix64(h ^ w))
}

/// Child seed for the `index`-th sub-instance.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    hash_words(seed, &[0x5eed, index])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sensitive() {
        assert_eq!(hash_words(1, &[2, 3]), hash_words(1, &[2, 3]));
        assert_ne!(hash_words(1, &[2, 3]), hash_words(1, &[3, 2]));
        assert_ne!(hash_words(1, &[2, 3]), hash_words(2, &[2, 3]));
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
    }
}
