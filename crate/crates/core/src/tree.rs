use std::fmt;
use std::mem::MaybeUninit;

use crate::error::{Error, Result};

/// Largest node count a tree may have. Keeping `n <= 2^63` guarantees that
/// `j + 1` and its two's-complement negation never overflow for `j < n`.
pub const MAX_NODES: u64 = 1 << 63;

/// Index of a node, which is also the rank of its key in the sorted array.
///
/// `NodeIndex::NONE` marks an absent link and never equals a real index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct NodeIndex(u64);

impl NodeIndex {
    pub const NONE: NodeIndex = NodeIndex(u64::MAX);

    /// Wraps a raw index. Panics if `index` is not below [`MAX_NODES`].
    #[inline]
    pub const fn new(index: u64) -> Self {
        assert!(index < MAX_NODES, "node index out of range");
        NodeIndex(index)
    }

    #[inline]
    pub(crate) const fn from_raw(raw: u64) -> Self {
        NodeIndex(raw)
    }

    #[inline]
    pub const fn get(self) -> Option<u64> {
        if self.is_none() {
            None
        } else {
            Some(self.0)
        }
    }

    #[inline]
    pub const fn is_none(self) -> bool {
        self.0 == u64::MAX
    }

    #[inline]
    pub const fn is_some(self) -> bool {
        !self.is_none()
    }

    #[inline]
    pub(crate) const fn raw(self) -> u64 {
        self.0
    }
}

impl From<Option<u64>> for NodeIndex {
    fn from(value: Option<u64>) -> Self {
        value.map_or(NodeIndex::NONE, NodeIndex::new)
    }
}

impl fmt::Debug for NodeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(i) => write!(f, "{i}"),
            None => f.write_str("NONE"),
        }
    }
}

/// How a [`TreeArrays`] value came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Straight out of [`build`](crate::build) or an equivalent builder.
    Fresh,
    /// Rewritten by [`make_complete`](crate::make_complete).
    Completed,
    /// Anything else: halving baseline, deserialized input, hand-made trees.
    Foreign,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Fresh => "fresh",
            Provenance::Completed => "completed",
            Provenance::Foreign => "foreign",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Allocate and fill the parent array. Nothing in this crate reads
    /// parent links while building or completing a tree.
    pub store_parents: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            store_parents: true,
        }
    }
}

impl BuildOptions {
    pub fn without_parents() -> Self {
        BuildOptions {
            store_parents: false,
        }
    }
}

/// A binary search tree over the ranks `0..n`, stored as flat link arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeArrays {
    pub(crate) root: NodeIndex,
    pub(crate) left: Vec<NodeIndex>,
    pub(crate) right: Vec<NodeIndex>,
    pub(crate) parent: Option<Vec<NodeIndex>>,
    pub(crate) provenance: Provenance,
}

impl TreeArrays {
    pub(crate) fn empty(opts: BuildOptions, provenance: Provenance) -> Self {
        TreeArrays {
            root: NodeIndex::NONE,
            left: Vec::new(),
            right: Vec::new(),
            parent: opts.store_parents.then(Vec::new),
            provenance,
        }
    }

    /// Assembles a tree from caller-supplied arrays. The result is tagged
    /// [`Provenance::Foreign`]; its structure is not checked here, use
    /// [`oracle::validate`](crate::oracle::validate) for that.
    pub fn from_parts(
        root: NodeIndex,
        left: Vec<NodeIndex>,
        right: Vec<NodeIndex>,
        parent: Option<Vec<NodeIndex>>,
    ) -> Result<Self> {
        let n = left.len();
        if right.len() != n {
            return Err(Error::LengthMismatch {
                field: "right",
                expected: n,
                actual: right.len(),
            });
        }
        if let Some(p) = &parent {
            if p.len() != n {
                return Err(Error::LengthMismatch {
                    field: "parent",
                    expected: n,
                    actual: p.len(),
                });
            }
        }
        if n as u64 > MAX_NODES {
            return Err(Error::Capacity { n: n as u128 });
        }
        Ok(TreeArrays {
            root,
            left,
            right,
            parent,
            provenance: Provenance::Foreign,
        })
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.left.len() as u64
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    #[inline]
    pub fn root(&self) -> NodeIndex {
        self.root
    }

    #[inline]
    pub fn left(&self) -> &[NodeIndex] {
        &self.left
    }

    #[inline]
    pub fn right(&self) -> &[NodeIndex] {
        &self.right
    }

    #[inline]
    pub fn parent(&self) -> Option<&[NodeIndex]> {
        self.parent.as_deref()
    }

    #[inline]
    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// True when both trees have the same links, ignoring provenance.
    pub fn same_links(&self, other: &TreeArrays) -> bool {
        self.root == other.root
            && self.left == other.left
            && self.right == other.right
            && self.parent == other.parent
    }

    pub fn into_parts(
        self,
    ) -> (
        NodeIndex,
        Vec<NodeIndex>,
        Vec<NodeIndex>,
        Option<Vec<NodeIndex>>,
    ) {
        (self.root, self.left, self.right, self.parent)
    }
}

/// Allocates exactly `n` uninitialized cells, reporting failure instead of
/// aborting.
pub(crate) fn alloc_cells(n: u64) -> Result<Vec<NodeIndex>> {
    let len = usize::try_from(n).map_err(|_| Error::Allocation { n })?;
    let mut cells = Vec::new();
    cells
        .try_reserve_exact(len)
        .map_err(|_| Error::Allocation { n })?;
    Ok(cells)
}

/// The first `n` cells of the spare capacity of `v`.
#[inline]
pub(crate) fn spare(v: &mut Vec<NodeIndex>, n: usize) -> &mut [MaybeUninit<NodeIndex>] {
    &mut v.spare_capacity_mut()[..n]
}
