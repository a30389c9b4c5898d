//! Shared inputs for the criterion benchmarks.

/// Sizes used by the construction benchmarks.
pub const SIZES: &[u64] = &[1 << 10, 1 << 16, 1 << 20];

/// `n` strictly increasing keys with gaps, so misses fall between them.
pub fn sorted_keys(n: usize) -> Vec<i64> {
    (0..n as i64).map(|i| i * 2).collect()
}

/// Probes cycling through hits and misses across the key range.
pub fn probes(n: usize, count: usize) -> Vec<i64> {
    let span = (2 * n as u64).max(1);
    // Fixed odd multiplier walks the range without repeating early.
    (0..count as u64)
        .map(|i| (i.wrapping_mul(0x9E37_79B9_7F4A_7C15) % span) as i64)
        .collect()
}
