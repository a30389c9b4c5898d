//! Minimal-height binary search trees over sorted arrays.
//!
//! Nodes are identified with ranks: node `i` holds the `i`-th smallest key of
//! the caller's sorted array, so a tree is just three index arrays (parent,
//! left, right) plus a root. The level of node `j` (its distance to the
//! nearest leaf of the enclosing perfect tree) is the number of trailing one
//! bits of `j`, which makes every link computable from the index alone.
//!
//! * [`build`] fills the arrays in one linear pass with no auxiliary memory,
//!   then repairs the `O(log n)` edges that would point past the last node.
//! * [`make_complete`] rotates the right spine so every level above the
//!   bottom one is full, again in `O(log n)`.
//! * [`implicit`] searches the same tree without materializing it.
//! * [`build_parallel`] splits the linear pass over worker threads.
//! * [`oracle`] holds an independent recursive builder and validators.
//!
//! ```
//! use flatbst::{build, make_complete, BuildOptions};
//!
//! let tree = build(10, BuildOptions::default()).unwrap();
//! assert_eq!(tree.root().get(), Some(7));
//! let tree = make_complete(tree).unwrap();
//! assert_eq!(tree.root().get(), Some(3));
//! ```

pub mod bitops;
pub mod builder;
pub mod completion;
mod error;
pub mod implicit;
pub mod oracle;
pub mod parallel;
mod tree;

pub use builder::{build, build_perfect, build_with_stats, parent_rule, BuildStats};
pub use completion::{complete_in_place, make_complete, right_subtree_levels, CompletionStats};
pub use error::{Error, Result};
pub use implicit::{search, KeySequence, SearchOutcome};
pub use oracle::{LevelProfile, ValidationReport};
pub use parallel::build_parallel;
pub use tree::{BuildOptions, NodeIndex, Provenance, TreeArrays, MAX_NODES};
