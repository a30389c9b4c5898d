//! Index arithmetic for the implicit perfect tree.
//!
//! In a perfect BST over `0..2^K - 1`, node `j` sits on level `L(j)` (leaves
//! are level 0), where `L(j)` is the number of trailing one bits of `j`.
//! Children and parents are then `j ± 2^(L(j) - 1)` and `j ± 2^L(j)`.
//!
//! All functions take indices below `2^63`.

use crate::error::{Error, Result};
use crate::tree::MAX_NODES;

/// Level of node `j`: the number of trailing one bits of `j`.
#[inline]
pub fn trailing_ones_level(j: u64) -> u32 {
    debug_assert!(j < MAX_NODES);
    j.trailing_ones()
}

/// `2^L(j)`, computed by isolating the lowest set bit of `j + 1`.
#[inline]
pub fn pow2_trailing(j: u64) -> u64 {
    debug_assert!(j < MAX_NODES);
    let succ = j + 1;
    succ & succ.wrapping_neg()
}

/// Position of the most significant one bit (bit 0 is the least significant).
#[inline]
pub fn msb(j: u64) -> Result<u32> {
    if j == 0 {
        Err(Error::MsbOfZero)
    } else {
        Ok(msb_nonzero(j))
    }
}

#[inline]
pub(crate) fn msb_nonzero(j: u64) -> u32 {
    debug_assert!(j != 0);
    63 - j.leading_zeros()
}

/// Root of the tree built for `n` nodes, `2^M(n) - 1`, or `None` when `n = 0`.
#[inline]
pub fn root_index(n: u64) -> Option<u64> {
    if n == 0 {
        None
    } else {
        Some((1u64 << msb_nonzero(n)) - 1)
    }
}

/// Loop-based versions of the functions above, kept as the reference the
/// intrinsic-backed paths are checked against.
pub mod portable {
    pub fn trailing_ones_level(mut j: u64) -> u32 {
        let mut level = 0;
        while j & 1 == 1 {
            j >>= 1;
            level += 1;
        }
        level
    }

    pub fn pow2_trailing(j: u64) -> u64 {
        1u64 << trailing_ones_level(j)
    }

    pub fn msb(j: u64) -> Option<u32> {
        if j == 0 {
            return None;
        }
        let mut pos = 0;
        let mut rest = j >> 1;
        while rest != 0 {
            rest >>= 1;
            pos += 1;
        }
        Some(pos)
    }
}
