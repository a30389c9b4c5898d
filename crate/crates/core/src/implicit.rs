//! Searching the tree without building it.
//!
//! The tree [`build`](crate::build) would produce for a sorted slice is fully
//! determined by index arithmetic, so a search can walk it directly over the
//! keys. A step that lands past the end of the slice keeps stepping down-left
//! until it reaches an existing index, which reproduces the repaired links of
//! the materialized tree.
//!
//! Inserting or deleting a key is just inserting or deleting it in the
//! sorted slice; there is no tree state to maintain.

use std::cmp::Ordering;

use crate::bitops::{pow2_trailing, root_index};
use crate::error::{Error, Result};
use crate::tree::NodeIndex;

/// Left child of `j` in the tree over `n` nodes.
#[inline]
pub fn implicit_left(j: u64, n: u64) -> NodeIndex {
    debug_assert!(j < n);
    let half = pow2_trailing(j) >> 1;
    if half == 0 {
        NodeIndex::NONE
    } else {
        NodeIndex::from_raw(j - half)
    }
}

/// Right child of `j` in the tree over `n` nodes.
#[inline]
pub fn implicit_right(j: u64, n: u64) -> NodeIndex {
    debug_assert!(j < n);
    let half = pow2_trailing(j) >> 1;
    if half == 0 {
        return NodeIndex::NONE;
    }
    let mut i = j + half;
    while i >= n {
        let half = pow2_trailing(i) >> 1;
        if half == 0 {
            return NodeIndex::NONE;
        }
        i -= half;
    }
    NodeIndex::from_raw(i)
}

/// A sorted, read-only slice of keys.
#[derive(Debug)]
pub struct KeySequence<'a, K> {
    keys: &'a [K],
}

impl<K> Clone for KeySequence<'_, K> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<K> Copy for KeySequence<'_, K> {}

impl<'a, K: Ord> KeySequence<'a, K> {
    /// Wraps `keys`, checking that they are sorted in non-decreasing order.
    pub fn new(keys: &'a [K]) -> Result<Self> {
        match keys.windows(2).position(|w| w[0] > w[1]) {
            Some(i) => Err(Error::Unsorted { index: i + 1 }),
            None => Ok(KeySequence { keys }),
        }
    }

    /// Wraps `keys` without checking the order. Searches over unsorted keys
    /// return unspecified (but memory-safe) results.
    pub fn new_unchecked(keys: &'a [K]) -> Self {
        KeySequence { keys }
    }

    pub fn keys(&self) -> &'a [K] {
        self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn search(&self, target: &K) -> SearchOutcome {
        search(*self, target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Index of a key equal to the target, or `NONE`.
    pub index: NodeIndex,
    /// Number of nodes examined.
    pub comparisons: u32,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.index.is_some()
    }
}

/// Looks up `target` by walking the implicit tree from its root. At most
/// `M(n) + 1` nodes are examined. With duplicate keys, any matching index
/// may be returned.
pub fn search<K: Ord>(ks: KeySequence<'_, K>, target: &K) -> SearchOutcome {
    let n = ks.keys.len() as u64;
    let mut comparisons = 0;
    let mut node = root_index(n).map_or(NodeIndex::NONE, NodeIndex::from_raw);
    while let Some(j) = node.get() {
        comparisons += 1;
        node = match target.cmp(&ks.keys[j as usize]) {
            Ordering::Equal => {
                return SearchOutcome {
                    index: node,
                    comparisons,
                }
            }
            Ordering::Less => implicit_left(j, n),
            Ordering::Greater => implicit_right(j, n),
        };
    }
    SearchOutcome {
        index: NodeIndex::NONE,
        comparisons,
    }
}
