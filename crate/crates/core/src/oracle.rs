//! Reference builders and structural checks.
//!
//! Nothing here shares code paths with [`builder`](crate::builder): the
//! halving builder is the classic recursive midpoint construction, and the
//! validators inspect trees by traversal only.

use crate::bitops::portable;
use crate::error::{Error, Result};
use crate::tree::{alloc_cells, NodeIndex, Provenance, TreeArrays, MAX_NODES};

/// Builds a minimal-height tree by recursively picking the midpoint
/// `(lo + hi) / 2` of the inclusive index range.
pub fn build_halving(n: u64) -> Result<TreeArrays> {
    if n > MAX_NODES {
        return Err(Error::Capacity { n: n as u128 });
    }
    let mut left = alloc_cells(n)?;
    let mut right = alloc_cells(n)?;
    let mut parent = alloc_cells(n)?;
    left.resize(n as usize, NodeIndex::NONE);
    right.resize(n as usize, NodeIndex::NONE);
    parent.resize(n as usize, NodeIndex::NONE);

    fn halve(
        lo: u64,
        hi: u64,
        up: NodeIndex,
        left: &mut [NodeIndex],
        right: &mut [NodeIndex],
        parent: &mut [NodeIndex],
    ) -> NodeIndex {
        let mid = lo + (hi - lo) / 2;
        parent[mid as usize] = up;
        let me = NodeIndex::new(mid);
        if mid > lo {
            left[mid as usize] = halve(lo, mid - 1, me, left, right, parent);
        }
        if mid < hi {
            right[mid as usize] = halve(mid + 1, hi, me, left, right, parent);
        }
        me
    }

    let root = if n == 0 {
        NodeIndex::NONE
    } else {
        halve(
            0,
            n - 1,
            NodeIndex::NONE,
            &mut left,
            &mut right,
            &mut parent,
        )
    };
    Ok(TreeArrays {
        root,
        left,
        right,
        parent: Some(parent),
        provenance: Provenance::Foreign,
    })
}

/// Number of nodes at each depth, root at depth 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LevelProfile {
    counts: Vec<u64>,
}

impl LevelProfile {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Height in edges, `None` for an empty tree.
    pub fn height(&self) -> Option<u32> {
        self.counts.len().checked_sub(1).map(|h| h as u32)
    }

    /// Every depth above the deepest holds `2^d` nodes.
    pub fn upper_levels_full(&self) -> bool {
        let upper = self.counts.len().saturating_sub(1);
        self.counts[..upper]
            .iter()
            .enumerate()
            .all(|(d, &c)| c == 1u64 << d)
    }
}

/// The least possible height in edges for `n >= 1` nodes,
/// `ceil(log2(n + 1)) - 1`.
pub fn minimal_height(n: u64) -> u32 {
    assert!(n >= 1);
    let mut h = 0u32;
    // A tree of height h holds at most 2^(h + 1) - 1 nodes.
    while ((1u128 << (h + 1)) - 1) < n as u128 {
        h += 1;
    }
    h
}

fn breadth_first_counts(tree: &TreeArrays) -> Result<Vec<u64>> {
    let n = tree.len();
    let mut counts = Vec::new();
    let mut seen = 0u64;
    let mut frontier: Vec<u64> = tree.root.get().into_iter().collect();
    while !frontier.is_empty() {
        seen += frontier.len() as u64;
        if seen > n {
            return Err(Error::CorruptStructure {
                node: frontier[0],
                reason: "node reached more than once",
            });
        }
        counts.push(frontier.len() as u64);
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for &j in &frontier {
            if j >= n {
                return Err(Error::CorruptStructure {
                    node: j,
                    reason: "index out of range",
                });
            }
            next.extend(
                [tree.left[j as usize], tree.right[j as usize]]
                    .into_iter()
                    .filter_map(NodeIndex::get),
            );
        }
        frontier = next;
    }
    Ok(counts)
}

/// Height in edges of a non-empty tree, by traversal.
pub fn height_of(tree: &TreeArrays) -> Result<u32> {
    if tree.is_empty() {
        return Err(Error::EmptyTree);
    }
    let counts = breadth_first_counts(tree)?;
    counts
        .len()
        .checked_sub(1)
        .map(|h| h as u32)
        .ok_or(Error::CorruptStructure {
            node: tree.root.raw(),
            reason: "non-empty tree has no root",
        })
}

pub fn level_profile(tree: &TreeArrays) -> Result<LevelProfile> {
    breadth_first_counts(tree).map(|counts| LevelProfile { counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// A child index is not below `n`.
    OutOfRange,
    /// A left child is not smaller, or a right child not larger, than its parent.
    Order,
    /// The in-order walk does not visit this rank at this position.
    InOrder,
    /// The node is reachable along more than one path.
    SharedChild,
    /// The parent link disagrees with the child links.
    ParentLink,
    /// The root is missing, out of range, or not the only parentless node.
    Root,
    /// The node cannot be reached from the root.
    Unreachable,
    /// The tree is taller than the minimum for its size.
    Height,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Violation {
    pub node: u64,
    pub kind: ViolationKind,
}

/// Result of [`validate`].
///
/// `upper_levels_full` describes the shape and does not count as a failure;
/// every other flag does, and each failure leaves at least one entry in
/// `violations`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub n: u64,
    pub bst_order_ok: bool,
    pub links_consistent: bool,
    pub single_root: bool,
    pub height_edges: Option<u32>,
    pub minimal_height_ok: bool,
    pub upper_levels_full: bool,
    pub profile: LevelProfile,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.bst_order_ok && self.links_consistent && self.single_root && self.minimal_height_ok
    }
}

/// Checks that `tree` is a binary search tree over `0..n` of minimal height.
///
/// Parent links are cross-checked only when the tree stores them.
pub fn validate(tree: &TreeArrays) -> ValidationReport {
    let n = tree.len();
    let mut violations = Vec::new();

    // Local link checks.
    for j in 0..n {
        let (l, r) = (tree.left[j as usize], tree.right[j as usize]);
        for (child, smaller) in [(l, true), (r, false)] {
            let Some(c) = child.get() else { continue };
            if c >= n {
                flag(&mut violations, j, ViolationKind::OutOfRange);
            } else if (c < j) != smaller || c == j {
                flag(&mut violations, j, ViolationKind::Order);
            }
        }
    }
    let out_of_range = violations
        .iter()
        .any(|v| v.kind == ViolationKind::OutOfRange);

    // Root.
    let root = tree.root.get();
    let mut root_ok = match root {
        None => n == 0,
        Some(r) => r < n,
    };
    if !root_ok {
        flag(&mut violations, tree.root.raw(), ViolationKind::Root);
    }

    // Breadth-first walk, each node at most once.
    let mut depth_of = vec![u32::MAX; n as usize];
    let mut counts = Vec::new();
    let mut shared = false;
    if let (true, Some(r)) = (root_ok, root) {
        depth_of[r as usize] = 0;
        let mut frontier = vec![r];
        let mut depth = 0;
        while !frontier.is_empty() {
            counts.push(frontier.len() as u64);
            depth += 1;
            let mut next = Vec::new();
            for &j in &frontier {
                for c in [tree.left[j as usize], tree.right[j as usize]]
                    .into_iter()
                    .filter_map(NodeIndex::get)
                    .filter(|&c| c < n)
                {
                    if depth_of[c as usize] != u32::MAX {
                        shared = true;
                        flag(&mut violations, c, ViolationKind::SharedChild);
                    } else {
                        depth_of[c as usize] = depth;
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
    }
    let mut unreachable = false;
    if root_ok {
        for j in 0..n {
            if depth_of[j as usize] == u32::MAX {
                unreachable = true;
                flag(&mut violations, j, ViolationKind::Unreachable);
            }
        }
    }

    // In-order identity, only meaningful on a proper tree.
    let mut in_order_ok = true;
    if root_ok && !shared && !out_of_range {
        let mut stack = Vec::new();
        let mut cursor = tree.root;
        let mut expected = 0u64;
        loop {
            while let Some(j) = cursor.get() {
                stack.push(j);
                cursor = tree.left[j as usize];
            }
            let Some(j) = stack.pop() else { break };
            if j != expected && in_order_ok {
                in_order_ok = false;
                flag(&mut violations, j, ViolationKind::InOrder);
            }
            expected += 1;
            cursor = tree.right[j as usize];
        }
    }
    let order_ok = !violations
        .iter()
        .any(|v| matches!(v.kind, ViolationKind::OutOfRange | ViolationKind::Order))
        && in_order_ok
        && !unreachable;

    // Parent cross-links.
    let mut links_ok = !shared;
    if let Some(parent) = tree.parent.as_deref() {
        let mut parentless = 0;
        for j in 0..n {
            let p = parent[j as usize];
            match p.get() {
                None => {
                    parentless += 1;
                    if root != Some(j) {
                        root_ok = false;
                        flag(&mut violations, j, ViolationKind::Root);
                    }
                }
                Some(p) => {
                    let linked = p < n
                        && (tree.left[p as usize].get() == Some(j)
                            || tree.right[p as usize].get() == Some(j));
                    if !linked {
                        links_ok = false;
                        flag(&mut violations, j, ViolationKind::ParentLink);
                    }
                }
            }
            for c in [tree.left[j as usize], tree.right[j as usize]]
                .into_iter()
                .filter_map(NodeIndex::get)
                .filter(|&c| c < n)
            {
                if parent[c as usize].get() != Some(j) {
                    links_ok = false;
                    flag(&mut violations, c, ViolationKind::ParentLink);
                }
            }
        }
        if n > 0 && parentless == 0 {
            root_ok = false;
            flag(&mut violations, tree.root.raw(), ViolationKind::Root);
        }
    }
    let single_root = root_ok && !unreachable;

    let profile = LevelProfile { counts };
    let height_edges = profile.height();
    let minimal_height_ok = match (n, height_edges) {
        (0, None) => true,
        (0, Some(_)) | (_, None) => false,
        (n, Some(h)) => h == minimal_height(n),
    };
    if !minimal_height_ok && n > 0 && root_ok {
        flag(&mut violations, tree.root.raw(), ViolationKind::Height);
    }
    let upper_levels_full = profile.upper_levels_full();
    violations.dedup();

    ValidationReport {
        n,
        bst_order_ok: order_ok,
        links_consistent: links_ok,
        single_root,
        height_edges,
        minimal_height_ok,
        upper_levels_full,
        profile,
        violations,
    }
}

fn flag(violations: &mut Vec<Violation>, node: u64, kind: ViolationKind) {
    violations.push(Violation { node, kind });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Up,
    DownRight,
}

/// A link of the unrepaired perfect-tree formulas that targets a node past
/// `n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MissingEdge {
    pub from: u64,
    pub to: u64,
    pub kind: EdgeKind,
    /// The down-right edge of node `n - 1`, which is simply dropped.
    pub exempt: bool,
}

/// Parent of `j` in the perfect tree: `j + 2^k` when `j` ends in `0` followed
/// by `k` ones preceded by another `0`, and `j - 2^k` otherwise.
fn perfect_parent(j: u64) -> u64 {
    let k = portable::trailing_ones_level(j);
    if (j >> (k + 1)) & 1 == 0 {
        j + (1 << k)
    } else {
        j - (1 << k)
    }
}

/// Path from node `n - 1` up to the root of the perfect tree with the same
/// height as the tree built for `n` nodes.
pub fn ascending_path(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let top = portable::msb(n).expect("n >= 1");
    let mut j = n - 1;
    let mut path = vec![j];
    while portable::trailing_ones_level(j) < top {
        j = perfect_parent(j);
        path.push(j);
    }
    path
}

/// Every up or down-right edge the per-index link formulas produce for
/// nodes `0..n` whose target is past `n - 1`. The root's parent link is not
/// an edge.
pub fn missing_edges(n: u64) -> Vec<MissingEdge> {
    assert!(n >= 1);
    let root = (1u64 << portable::msb(n).expect("n >= 1")) - 1;
    let mut edges = Vec::new();
    for j in 0..n {
        if j != root {
            let up = perfect_parent(j);
            if up >= n {
                edges.push(MissingEdge {
                    from: j,
                    to: up,
                    kind: EdgeKind::Up,
                    exempt: false,
                });
            }
        }
        let level = portable::trailing_ones_level(j);
        if level > 0 {
            let down = j + (1 << (level - 1));
            if down >= n {
                edges.push(MissingEdge {
                    from: j,
                    to: down,
                    kind: EdgeKind::DownRight,
                    exempt: j == n - 1,
                });
            }
        }
    }
    edges
}

/// Checks that every non-exempt missing edge has both ends on
/// [`ascending_path`]. Returns the edges, or the first one that is not.
pub fn check_missing_edge_locality(n: u64) -> Result<Vec<MissingEdge>, MissingEdge> {
    let path = ascending_path(n);
    let edges = missing_edges(n);
    match edges
        .iter()
        .find(|e| !e.exempt && !(path.contains(&e.from) && path.contains(&e.to)))
    {
        Some(&bad) => Err(bad),
        None => Ok(edges),
    }
}
