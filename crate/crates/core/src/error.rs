use crate::tree::Provenance;

/// Errors produced by tree construction, completion and inspection.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("most significant bit of zero is undefined")]
    MsbOfZero,
    #[error("{n} nodes exceeds the supported maximum of 2^63")]
    Capacity { n: u128 },
    #[error("perfect tree with {levels} levels exceeds the supported maximum of 62")]
    TooManyLevels { levels: u32 },
    #[error("failed to allocate {n} tree cells")]
    Allocation { n: u64 },
    #[error("worker count must be at least 1")]
    ZeroWorkers,
    #[error("completion requires a freshly built tree, got a {0} tree")]
    NotFresh(Provenance),
    #[error("{field} array has {actual} entries, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("tree is empty")]
    EmptyTree,
    #[error("corrupt tree structure at node {node}: {reason}")]
    CorruptStructure { node: u64, reason: &'static str },
    #[error("keys are not sorted: element {index} is smaller than its predecessor")]
    Unsorted { index: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
