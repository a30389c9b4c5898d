//! Rotating a freshly built tree into complete form.
//!
//! A fresh tree has minimal height but may leave holes above the bottom
//! level, always along its right spine. Walking down that spine and rotating
//! right wherever the right subtree is too short fills every level except
//! the deepest, in `O(log n)` time, without reading parent links.

use crate::bitops::{msb_nonzero, trailing_ones_level};
use crate::error::{Error, Result};
use crate::tree::{NodeIndex, Provenance, TreeArrays};

/// Number of levels in the right subtree of `j`, for `j` on the right spine
/// of the fresh tree over `n` nodes: 0 for the last node, otherwise
/// `M(n - 1 - j) + 1`.
#[inline]
pub fn right_subtree_levels(j: u64, n: u64) -> u32 {
    debug_assert!(j < n);
    if j == n - 1 {
        0
    } else {
        msb_nonzero(n - 1 - j) + 1
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CompletionStats {
    pub rotations: u32,
}

/// Consumes a fresh tree and returns it in complete form.
pub fn make_complete(mut tree: TreeArrays) -> Result<TreeArrays> {
    complete_in_place(&mut tree)?;
    Ok(tree)
}

/// Rewrites `tree` so that depth `d` holds `2^d` nodes for every depth above
/// the deepest. Height and in-order sequence are unchanged; the root may
/// move. Only trees tagged [`Provenance::Fresh`] are accepted.
pub fn complete_in_place(tree: &mut TreeArrays) -> Result<CompletionStats> {
    if tree.provenance != Provenance::Fresh {
        return Err(Error::NotFresh(tree.provenance));
    }
    let n = tree.len();
    let mut stats = CompletionStats::default();
    // Up to three nodes every minimal-height tree is already complete.
    if n > 3 {
        let mut x = tree.root.raw();
        let mut above = None;
        let mut h = trailing_ones_level(x);
        while h > 1 {
            if right_subtree_levels(x, n) < h {
                let y = tree.left[x as usize].raw();
                rotate_right(tree, x, y, above);
                stats.rotations += 1;
                above = Some(y);
            } else {
                above = Some(x);
                x = tree.right[x as usize].raw();
            }
            h -= 1;
        }
    }
    tree.provenance = Provenance::Completed;
    Ok(stats)
}

/// Promotes `y = left[x]` into the place of `x`, which becomes `y`'s right
/// child. `above` is the spine node whose right link pointed at `x`, or
/// `None` when `x` is the root.
fn rotate_right(tree: &mut TreeArrays, x: u64, y: u64, above: Option<u64>) {
    let inner = tree.right[y as usize];
    match above {
        None => tree.root = NodeIndex::from_raw(y),
        Some(z) => tree.right[z as usize] = NodeIndex::from_raw(y),
    }
    tree.left[x as usize] = inner;
    tree.right[y as usize] = NodeIndex::from_raw(x);
    if let Some(p) = tree.parent.as_mut() {
        p[y as usize] = above.map_or(NodeIndex::NONE, NodeIndex::from_raw);
        if inner.is_some() {
            p[inner.raw() as usize] = NodeIndex::from_raw(x);
        }
        p[x as usize] = NodeIndex::from_raw(y);
    }
}
