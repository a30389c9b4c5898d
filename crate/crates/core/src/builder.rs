//! Linear-pass construction of minimal-height trees.
//!
//! Every link of the perfect tree is a function of the node index, so the
//! arrays are filled in a single pass over `0..n`. When `n` is not of the
//! form `2^K - 1` some of those links point past `n - 1`; they all lie on the
//! path from the root to node `n - 1` and are repaired afterwards by a short
//! walk down that path.

use std::mem::MaybeUninit;

use crate::bitops::{msb_nonzero, pow2_trailing, root_index, trailing_ones_level};
use crate::error::{Error, Result};
use crate::tree::{alloc_cells, spare, BuildOptions, NodeIndex, Provenance, TreeArrays, MAX_NODES};

/// Parent of `j` in the perfect tree containing it: `j + 2^L(j)` when bit
/// `L(j) + 1` of `j` is clear, `j - 2^L(j)` otherwise.
///
/// The caller is responsible for the root, whose parent is absent.
#[inline]
pub fn parent_rule(j: u64) -> u64 {
    let pow = pow2_trailing(j);
    if j & pow.wrapping_shl(1) == 0 {
        j.wrapping_add(pow)
    } else {
        j - pow
    }
}

/// Counters recorded while building, for checking the cost bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Cells visited by the linear pass.
    pub filled: u64,
    /// Iterations of the outer repair loop.
    pub glue_iterations: u32,
}

/// Builds the minimal-height BST over `0..n`.
///
/// `n = 0` yields an empty tree with no root.
pub fn build(n: u64, opts: BuildOptions) -> Result<TreeArrays> {
    build_with_stats(n, opts).map(|(tree, _)| tree)
}

/// Like [`build`], also returning the loop counters.
pub fn build_with_stats(n: u64, opts: BuildOptions) -> Result<(TreeArrays, BuildStats)> {
    let mut cells = Cells::allocate(n, opts)?;
    let len = n as usize;
    fill_range(
        0,
        cells.parent.as_mut().map(|p| spare(p, len)),
        spare(&mut cells.left, len),
        spare(&mut cells.right, len),
    );
    // SAFETY: fill_range wrote every one of the first n cells of each array.
    let (tree, glue_iterations) = unsafe { cells.finish(n) };
    Ok((
        tree,
        BuildStats {
            filled: n,
            glue_iterations,
        },
    ))
}

/// Builds the perfect BST on `2^levels - 1` nodes using only the
/// per-index link formulas.
pub fn build_perfect(levels: u32, opts: BuildOptions) -> Result<TreeArrays> {
    if levels > 62 {
        return Err(Error::TooManyLevels { levels });
    }
    if levels == 0 {
        return Ok(TreeArrays::empty(opts, Provenance::Fresh));
    }
    let n = (1u64 << levels) - 1;
    let mut left = alloc_cells(n)?;
    let mut right = alloc_cells(n)?;
    let mut parent = if opts.store_parents {
        Some(alloc_cells(n)?)
    } else {
        None
    };
    for j in 0..n {
        if let Some(p) = parent.as_mut() {
            p.push(NodeIndex::from_raw(parent_rule(j)));
        }
        let level = trailing_ones_level(j);
        if level > 0 {
            let half = 1u64 << (level - 1);
            left.push(NodeIndex::from_raw(j - half));
            right.push(NodeIndex::from_raw(j + half));
        } else {
            left.push(NodeIndex::NONE);
            right.push(NodeIndex::NONE);
        }
    }
    let root = (1u64 << msb_nonzero(n)) - 1;
    if let Some(p) = parent.as_mut() {
        p[root as usize] = NodeIndex::NONE;
    }
    Ok(TreeArrays {
        root: NodeIndex::from_raw(root),
        left,
        right,
        parent,
        provenance: Provenance::Fresh,
    })
}

/// Output arrays with capacity for `n` cells, not yet initialized.
pub(crate) struct Cells {
    pub(crate) left: Vec<NodeIndex>,
    pub(crate) right: Vec<NodeIndex>,
    pub(crate) parent: Option<Vec<NodeIndex>>,
}

impl Cells {
    pub(crate) fn allocate(n: u64, opts: BuildOptions) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::Capacity { n: n as u128 });
        }
        Ok(Cells {
            left: alloc_cells(n)?,
            right: alloc_cells(n)?,
            parent: if opts.store_parents {
                Some(alloc_cells(n)?)
            } else {
                None
            },
        })
    }

    /// Marks the cells initialized, then nulls the root's parent and the
    /// last node's right link and repairs the links that point past `n - 1`.
    /// Returns the tree and the number of repair iterations.
    ///
    /// # Safety
    ///
    /// The first `n` cells of every allocated array must have been written.
    pub(crate) unsafe fn finish(mut self, n: u64) -> (TreeArrays, u32) {
        let len = n as usize;
        self.left.set_len(len);
        self.right.set_len(len);
        if let Some(p) = self.parent.as_mut() {
            p.set_len(len);
        }
        let mut tree = TreeArrays {
            root: NodeIndex::NONE,
            left: self.left,
            right: self.right,
            parent: self.parent,
            provenance: Provenance::Fresh,
        };
        let Some(root) = root_index(n) else {
            return (tree, 0);
        };
        tree.right[len - 1] = NodeIndex::NONE;
        tree.root = NodeIndex::from_raw(root);
        if let Some(p) = tree.parent.as_mut() {
            p[root as usize] = NodeIndex::NONE;
        }
        let iterations = glue(&mut tree, n, root);
        (tree, iterations)
    }
}

/// Writes the perfect-tree links for indices `start..start + left.len()`.
/// Leaves (even indices) get no children.
pub(crate) fn fill_range(
    start: u64,
    parent: Option<&mut [MaybeUninit<NodeIndex>]>,
    left: &mut [MaybeUninit<NodeIndex>],
    right: &mut [MaybeUninit<NodeIndex>],
) {
    debug_assert_eq!(left.len(), right.len());
    debug_assert!(parent.as_ref().is_none_or(|p| p.len() == left.len()));
    let cells = left.iter_mut().zip(right.iter_mut()).zip(start..);
    match parent {
        Some(parent) => {
            for (((l, r), j), p) in cells.zip(parent.iter_mut()) {
                p.write(NodeIndex::from_raw(parent_rule(j)));
                write_children(j, l, r);
            }
        }
        None => {
            for ((l, r), j) in cells {
                write_children(j, l, r);
            }
        }
    }
}

#[inline(always)]
fn write_children(j: u64, l: &mut MaybeUninit<NodeIndex>, r: &mut MaybeUninit<NodeIndex>) {
    if j & 1 == 0 {
        l.write(NodeIndex::NONE);
        r.write(NodeIndex::NONE);
    } else {
        let half = pow2_trailing(j) >> 1;
        l.write(NodeIndex::from_raw(j - half));
        r.write(NodeIndex::from_raw(j + half));
    }
}

/// Walks from `root` toward node `n - 1`, replacing every "right, then
/// left, left, ..." run through missing nodes by a single right edge from
/// its first node to its last.
///
/// `n - 1 - root` has a `1` at bit `m` for each right step taken from a node
/// on level `m + 1` and borrows for the left steps, so each such run shows
/// up as a block of zeros in it.
fn glue(tree: &mut TreeArrays, n: u64, root: u64) -> u32 {
    let last = n - 1;
    let offset = last - root;
    let stop = pow2_trailing(last);
    let mut step = pow2_trailing(root);
    let mut j = root;
    let mut iterations = 0;
    while step > stop {
        iterations += 1;
        step /= 2;
        if offset & step == 0 {
            step /= 2;
            while offset & step == 0 {
                debug_assert!(step != 0);
                step /= 2;
            }
            tree.right[j as usize] = NodeIndex::from_raw(j + step);
            if let Some(p) = tree.parent.as_mut() {
                p[(j + step) as usize] = NodeIndex::from_raw(j);
            }
        }
        j += step;
    }
    iterations
}
