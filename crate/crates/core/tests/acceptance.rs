//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use flatbst::bitops::msb;
use flatbst::implicit::{implicit_left, implicit_right};
use flatbst::oracle::{check_missing_edge_locality, minimal_height, validate};
use flatbst::{
    build, build_parallel, build_perfect, complete_in_place, search, BuildOptions, KeySequence,
    NodeIndex, TreeArrays,
};

// ---------------------------------------------------------------------------
// Allocation counting, scoped to the thread that enables it.

struct Counting;

thread_local! {
    static TRACKING: Cell<bool> = const { Cell::new(false) };
}

static ALLOCS: AtomicU64 = AtomicU64::new(0);
static LIVE: AtomicU64 = AtomicU64::new(0);
static PEAK: AtomicU64 = AtomicU64::new(0);

fn tracking() -> bool {
    TRACKING.try_with(Cell::get).unwrap_or(false)
}

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        if tracking() {
            ALLOCS.fetch_add(1, Ordering::Relaxed);
            let live =
                LIVE.fetch_add(layout.size() as u64, Ordering::Relaxed) + layout.size() as u64;
            PEAK.fetch_max(live, Ordering::Relaxed);
        }
        System.alloc(layout)
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        if tracking() {
            LIVE.fetch_sub(layout.size() as u64, Ordering::Relaxed);
        }
        System.dealloc(ptr, layout)
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        if tracking() {
            ALLOCS.fetch_add(1, Ordering::Relaxed);
            let live = LIVE.fetch_add(new_size as u64, Ordering::Relaxed) + new_size as u64;
            PEAK.fetch_max(live, Ordering::Relaxed);
            LIVE.fetch_sub(layout.size() as u64, Ordering::Relaxed);
        }
        System.realloc(ptr, layout, new_size)
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

/// Allocation count and peak live bytes while running `f`.
fn measure_allocs<T>(f: impl FnOnce() -> T) -> (T, u64, u64) {
    ALLOCS.store(0, Ordering::SeqCst);
    LIVE.store(0, Ordering::SeqCst);
    PEAK.store(0, Ordering::SeqCst);
    TRACKING.with(|t| t.set(true));
    let out = f();
    TRACKING.with(|t| t.set(false));
    (
        out,
        ALLOCS.load(Ordering::SeqCst),
        PEAK.load(Ordering::SeqCst),
    )
}

// ---------------------------------------------------------------------------

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Ok(format!("{detail}; {elapsed:.2?} <= {limit:?}"))
    } else {
        Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn idx(v: &[Option<u64>]) -> Vec<NodeIndex> {
    v.iter().map(|&x| NodeIndex::from(x)).collect()
}

fn figure_tree() -> Outcome {
    // Four-level perfect tree: root 0111, then 011 / 01011, and so on.
    let edges: [(u64, u64, u64); 7] = [
        (7, 3, 11),
        (3, 1, 5),
        (11, 9, 13),
        (1, 0, 2),
        (5, 4, 6),
        (9, 8, 10),
        (13, 12, 14),
    ];
    let mut left = vec![None; 15];
    let mut right = vec![None; 15];
    let mut parent = vec![None; 15];
    for (p, l, r) in edges {
        left[p as usize] = Some(l);
        right[p as usize] = Some(r);
        parent[l as usize] = Some(p);
        parent[r as usize] = Some(p);
    }
    let start = Instant::now();
    let tree = build(15, BuildOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(tree.root().get() == Some(7), || {
        format!("root {:?}", tree.root())
    })?;
    ensure(tree.left() == idx(&left), || "left array differs".into())?;
    ensure(tree.right() == idx(&right), || "right array differs".into())?;
    ensure(tree.parent() == Some(&idx(&parent)[..]), || {
        "parent array differs".into()
    })?;
    within(elapsed, Duration::from_millis(1), "exact arrays".into())
}

fn exhaustive_structure() -> Outcome {
    let start = Instant::now();
    for n in 0..=4096u64 {
        let tree = build(n, BuildOptions::default()).map_err(|e| e.to_string())?;
        let report = validate(&tree);
        ensure(report.is_valid(), || {
            format!("n={n}: {:?}", report.violations)
        })?;
        let expected = if n == 0 {
            None
        } else {
            Some(minimal_height(n))
        };
        ensure(report.height_edges == expected, || {
            format!(
                "n={n}: height {:?}, expected {expected:?}",
                report.height_edges
            )
        })?;
    }
    within(
        start.elapsed(),
        Duration::from_secs(5),
        "n in [0, 4096]".into(),
    )
}

fn perfect_equivalence() -> Outcome {
    let start = Instant::now();
    for k in 1..=16u32 {
        let a = build((1 << k) - 1, BuildOptions::default()).map_err(|e| e.to_string())?;
        let b = build_perfect(k, BuildOptions::default()).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("K={k}: arrays differ"))?;
    }
    within(
        start.elapsed(),
        Duration::from_secs(2),
        "K in [1, 16]".into(),
    )
}

fn completion_suite() -> Outcome {
    let start = Instant::now();
    let mut max_rotations = 0;
    for n in 1..=4096u64 {
        let mut tree = build(n, BuildOptions::default()).map_err(|e| e.to_string())?;
        let height = validate(&tree).height_edges;
        let stats = complete_in_place(&mut tree).map_err(|e| e.to_string())?;
        let report = validate(&tree);
        ensure(report.is_valid(), || {
            format!("n={n}: {:?}", report.violations)
        })?;
        ensure(report.height_edges == height, || {
            format!("n={n}: height changed")
        })?;
        let counts = report.profile.counts();
        let bottom = counts.len() - 1;
        ensure(
            counts[..bottom]
                .iter()
                .enumerate()
                .all(|(d, &c)| c == 1 << d),
            || format!("n={n}: level profile {counts:?}"),
        )?;
        let m = msb(n).unwrap();
        ensure(stats.rotations <= m, || {
            format!("n={n}: {} rotations > {m}", stats.rotations)
        })?;
        max_rotations = max_rotations.max(stats.rotations);
    }
    within(
        start.elapsed(),
        Duration::from_secs(5),
        format!("n in [1, 4096], max rotations {max_rotations}"),
    )
}

fn missing_edge_suite() -> Outcome {
    let start = Instant::now();
    let mut edges = 0;
    for n in 1..=2048u64 {
        let found =
            check_missing_edge_locality(n).map_err(|e| format!("n={n}: off-path edge {e:?}"))?;
        edges += found.len();
    }
    within(
        start.elapsed(),
        Duration::from_secs(5),
        format!("n in [1, 2048], {edges} missing edges checked"),
    )
}

fn virtual_tree_suite() -> Outcome {
    let start = Instant::now();
    let mut probes_run = 0;
    for n in 1..=1024usize {
        let keys: Vec<i64> = (0..n as i64).map(|i| 10 * i).collect();
        let ks = KeySequence::new(&keys).map_err(|e| e.to_string())?;
        let mut probes: Vec<i64> = keys.clone();
        probes.extend(keys.windows(2).map(|w| (w[0] + w[1]) / 2));
        probes.push(keys[0] - 1);
        probes.push(keys[n - 1] + 1);
        ensure(probes.len() == 2 * n + 1, || "probe count".into())?;
        let bound = msb(n as u64).unwrap() + 1;
        for p in probes {
            let out = search(ks, &p);
            let expected = keys.binary_search(&p).ok().map(|i| i as u64);
            ensure(out.index.get() == expected, || {
                format!("n={n} probe={p}: {:?} vs {expected:?}", out.index)
            })?;
            ensure(out.comparisons <= bound, || {
                format!("n={n} probe={p}: {} comparisons > {bound}", out.comparisons)
            })?;
            probes_run += 1;
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(10),
        format!("{probes_run} probes"),
    )
}

fn implicit_equivalence() -> Outcome {
    let start = Instant::now();
    for n in 1..=2048u64 {
        let tree = build(n, BuildOptions::without_parents()).map_err(|e| e.to_string())?;
        let mut stack = vec![tree.root()];
        let mut reached = 0;
        while let Some(top) = stack.pop() {
            let Some(j) = top.get() else { continue };
            reached += 1;
            let (l, r) = (tree.left()[j as usize], tree.right()[j as usize]);
            ensure(
                implicit_left(j, n) == l && implicit_right(j, n) == r,
                || format!("n={n} j={j}"),
            )?;
            stack.extend([l, r]);
        }
        ensure(reached == n, || format!("n={n}: reached {reached}"))?;
    }
    within(
        start.elapsed(),
        Duration::from_secs(5),
        "n in [1, 2048]".into(),
    )
}

fn parallel_determinism() -> Outcome {
    let n = 1_000_000;
    let start = Instant::now();
    let sequential = build(n, BuildOptions::default()).map_err(|e| e.to_string())?;
    for workers in [1, 2, 4, 8] {
        let par = build_parallel(n, BuildOptions::default(), workers).map_err(|e| e.to_string())?;
        ensure(par == sequential, || {
            format!("workers={workers}: arrays differ")
        })?;
    }
    within(
        start.elapsed(),
        Duration::from_secs(10),
        "n = 10^6, workers 1,2,4,8".into(),
    )
}

fn median_build_time(n: u64, repeats: usize) -> Result<Duration, String> {
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let tree = build(n, BuildOptions::default()).map_err(|e| e.to_string())?;
        samples.push(start.elapsed());
        std::hint::black_box(&tree);
        drop(tree);
    }
    samples.sort();
    Ok(samples[repeats / 2])
}

fn linear_scaling() -> Outcome {
    // Warm up the allocator and page tables once.
    median_build_time(1 << 20, 1)?;
    let small = median_build_time(1 << 20, 7)?;
    let large = median_build_time(1 << 24, 5)?;
    let ratio = large.as_secs_f64() / small.as_secs_f64();
    let detail = format!("t(2^24)={large:.2?} t(2^20)={small:.2?} ratio={ratio:.2} (want [8, 32])");
    if (8.0..=32.0).contains(&ratio) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn constant_auxiliary_memory() -> Outcome {
    let mut lines = Vec::new();
    for opts in [BuildOptions::default(), BuildOptions::without_parents()] {
        let arrays: u64 = if opts.store_parents { 3 } else { 2 };
        let mut seen: Option<(u64, u64)> = None;
        for n in [1u64 << 10, 1 << 20, 1 << 24] {
            let (tree, allocs, peak) = measure_allocs(|| build(n, opts));
            let tree: TreeArrays = tree.map_err(|e| e.to_string())?;
            let output = arrays * n * std::mem::size_of::<NodeIndex>() as u64;
            drop(tree);
            let aux_bytes = peak
                .checked_sub(output)
                .ok_or_else(|| format!("n={n}: peak {peak} below output size {output}"))?;
            let aux_allocs = allocs
                .checked_sub(arrays)
                .ok_or_else(|| format!("n={n}: {allocs} allocations for {arrays} arrays"))?;
            match seen {
                None => seen = Some((aux_allocs, aux_bytes)),
                Some(prev) => ensure(prev == (aux_allocs, aux_bytes), || {
                    format!(
                        "n={n}: auxiliary (allocs, bytes) {:?} vs {prev:?}",
                        (aux_allocs, aux_bytes)
                    )
                })?,
            }
        }
        let (a, b) = seen.unwrap();
        lines.push(format!(
            "{arrays} arrays: {a} extra allocations, {b} extra peak bytes"
        ));
    }
    Ok(lines.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("figure-1 fixture", figure_tree),
        ("exhaustive structure", exhaustive_structure),
        ("perfect-size equivalence", perfect_equivalence),
        ("completion", completion_suite),
        ("missing-edge locality", missing_edge_suite),
        ("virtual tree search", virtual_tree_suite),
        ("implicit/explicit equivalence", implicit_equivalence),
        ("parallel determinism", parallel_determinism),
        ("linear scaling", linear_scaling),
        ("constant auxiliary memory", constant_auxiliary_memory),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
