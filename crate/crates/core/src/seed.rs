//! Deterministic seed derivation.
//!
//! Sweeps split a single 64-bit seed into per-instance streams by hashing the
//! instance key, so results are reproducible regardless of scheduling order.

/// FNV-1a over a byte slice.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}

/// Derives an instance seed from a master seed and a textual key.
pub fn split_seed(seed: u64, key: &str) -> u64 {
    let mut buf = Vec::with_capacity(8 + key.len());
    buf.extend_from_slice(&seed.to_le_bytes());
    buf.extend_from_slice(key.as_bytes());
    fnv1a(&buf)
}

/// splitmix64 step, handy for cheap deterministic point streams.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
