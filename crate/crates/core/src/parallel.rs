//! Multi-threaded construction.
//!
//! The linear pass writes each cell from its own index only, so disjoint
//! index ranges can be filled concurrently. The repair walk touches cells
//! anywhere along the path to the last node and runs after all workers have
//! joined.

use std::mem::MaybeUninit;
use std::ops::Range;
use std::thread;

use crate::builder::{fill_range, Cells};
use crate::error::{Error, Result};
use crate::tree::{spare, BuildOptions, NodeIndex, TreeArrays};

/// Builds the same tree as [`build`](crate::build), filling the arrays with
/// `workers` threads.
pub fn build_parallel(n: u64, opts: BuildOptions, workers: usize) -> Result<TreeArrays> {
    if workers == 0 {
        return Err(Error::ZeroWorkers);
    }
    let mut cells = Cells::allocate(n, opts)?;
    let len = n as usize;
    let ranges = chunk_ranges(len, workers);

    let mut parents = cells.parent.as_mut().map(|p| spare(p, len));
    let mut lefts = spare(&mut cells.left, len);
    let mut rights = spare(&mut cells.right, len);
    let mut jobs = Vec::with_capacity(ranges.len());
    for range in ranges {
        let take = range.len();
        let (l, rest) = lefts.split_at_mut(take);
        lefts = rest;
        let (r, rest) = rights.split_at_mut(take);
        rights = rest;
        let p = parents.take().map(|p| {
            let (head, rest) = p.split_at_mut(take);
            parents = Some(rest);
            head
        });
        jobs.push(Job {
            start: range.start as u64,
            parent: p,
            left: l,
            right: r,
        });
    }

    let mut jobs = jobs.into_iter();
    let inline_job = jobs.next();
    thread::scope(|scope| {
        for job in jobs {
            scope.spawn(move || job.run());
        }
        if let Some(job) = inline_job {
            job.run();
        }
    });

    // SAFETY: the ranges cover 0..n, and every job wrote all cells of its
    // range before the scope joined.
    let (tree, _) = unsafe { cells.finish(n) };
    Ok(tree)
}

struct Job<'a> {
    start: u64,
    parent: Option<&'a mut [MaybeUninit<NodeIndex>]>,
    left: &'a mut [MaybeUninit<NodeIndex>],
    right: &'a mut [MaybeUninit<NodeIndex>],
}

impl Job<'_> {
    fn run(self) {
        fill_range(self.start, self.parent, self.left, self.right);
    }
}

/// Splits `0..len` into at most `workers` contiguous non-empty ranges whose
/// sizes differ by at most one, larger ranges first.
pub(crate) fn chunk_ranges(len: usize, workers: usize) -> Vec<Range<usize>> {
    let workers = workers.max(1).min(len.max(1));
    let base = len / workers;
    let extra = len % workers;
    let mut start = 0;
    (0..workers)
        .map(|w| {
            let size = base + usize::from(w < extra);
            let range = start..start + size;
            start += size;
            range
        })
        .filter(|r| !r.is_empty())
        .collect()
}
