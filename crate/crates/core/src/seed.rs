//! Counter-based seed derivation.
//!
//! Child seeds are a pure function of the parent seed and a key, so adding a
//! new experiment cell never shifts the streams of existing ones.

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `parent` and an ordered list of key components.
pub fn derive(parent: u64, key: &[u64]) -> u64 {
    key.iter().fold(mix64(parent), |acc, &k| mix64(acc ^ mix64(k)))
}
