//! Deterministic seed derivation.
//!
//! Every randomized component derives its seed from a master seed plus a
//! fixed tuple of indices (cell, trial, direction, ...). The derivation is a
//! SplitMix64 chain, so results never depend on scheduling or thread count.

/// One SplitMix64 step; a well-mixed 64-bit permutation.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derives a child seed from a master seed and an ordered list of parts.
/// Distinct part tuples give independent-looking streams.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &p in parts {
        state = splitmix64(state ^ splitmix64(p.wrapping_add(0x51ed_270b)));
    }
    state
}
