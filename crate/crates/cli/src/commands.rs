use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatbst::oracle::{build_halving, validate, ValidationReport};
use flatbst::{build, build_parallel, make_complete, BuildOptions, KeySequence, TreeArrays};

use crate::error::{exit, CliError};
use crate::format::{self, Format};
use crate::keys::load_keys;

#[derive(Debug, Parser)]
#[command(
    name = "flatbst",
    version,
    about = "Minimal-height binary search trees from sorted arrays"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a tree over n ranks or over the keys of a file.
    Build(BuildArgs),
    /// Check a JSON tree for order, link consistency and minimal height.
    Verify(VerifyArgs),
    /// Look a key up in a sorted key file without building a tree.
    ///
    /// Inserting or deleting keys only means editing the sorted file.
    Search(SearchArgs),
    /// Time tree construction and print CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Build over the ranks 0..n.
    #[arg(long = "n", value_name = "COUNT")]
    pub n: Option<u64>,
    /// Build over the keys in a file, one integer per line.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub source: Source,
    /// Sort input keys instead of rejecting unsorted files.
    #[arg(long)]
    pub sort: bool,
    /// Rotate the tree into complete form.
    #[arg(long)]
    pub complete: bool,
    /// Do not store parent links.
    #[arg(long)]
    pub no_parents: bool,
    #[arg(long, env = "FLATBST_THREADS", default_value_t = 1)]
    pub threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON tree file.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Sorted key file, one integer per line.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub key: i64,
    /// Sort the keys first; reported indices refer to the sorted order.
    #[arg(long)]
    pub sort: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// Linear-pass builder.
    New,
    /// Recursive midpoint builder.
    Halving,
    Both,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long = "n", value_name = "COUNT")]
    pub n: u64,
    #[arg(long, value_enum, default_value_t = Algo::Both)]
    pub algo: Algo,
    #[arg(long, env = "FLATBST_THREADS", default_value_t = 1)]
    pub threads: usize,
    /// Timed runs per configuration; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub repeat: usize,
}

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Build(args) => cmd_build(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Search(args) => cmd_search(args, out),
        Command::Bench(args) => cmd_bench(args, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn tree_for(n: u64, opts: BuildOptions, threads: usize) -> Result<TreeArrays, CliError> {
    Ok(if threads == 1 {
        build(n, opts)?
    } else {
        build_parallel(n, opts, threads)?
    })
}

pub fn cmd_build(args: BuildArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let keys = match &args.source.input {
        Some(path) => Some(load_keys(path, args.sort)?),
        None => None,
    };
    let n = match (&keys, args.source.n) {
        (Some(keys), _) => keys.len() as u64,
        (None, Some(n)) => n,
        (None, None) => unreachable!("clap enforces one source"),
    };
    let opts = BuildOptions {
        store_parents: !args.no_parents,
    };
    let mut tree = tree_for(n, opts, args.threads)?;
    if args.complete {
        tree = make_complete(tree)?;
    }
    let text = match args.format {
        Format::Json => format::to_json(&tree) + "\n",
        Format::Dot => format::to_dot(&tree, keys.as_deref()),
        Format::Arrays => format::to_arrays(&tree),
    };
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => write_out(out, &text)?,
    }
    Ok(exit::OK)
}

fn read_tree(path: &Path) -> Result<TreeArrays, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    format::from_json(&text).map_err(|reason| CliError::Malformed {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn render_report(report: &ValidationReport) -> String {
    let ok = |b: bool| if b { "ok" } else { "FAILED" };
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!("n: {}\n", report.n);
    text += &format!("bst order: {}\n", ok(report.bst_order_ok));
    text += &format!("links consistent: {}\n", ok(report.links_consistent));
    text += &format!("single root: {}\n", ok(report.single_root));
    match report.height_edges {
        Some(h) => text += &format!("height: {h} (minimal: {})\n", ok(report.minimal_height_ok)),
        None => text += &format!("height: - (minimal: {})\n", ok(report.minimal_height_ok)),
    }
    text += &format!("upper levels full: {}\n", yes(report.upper_levels_full));
    let counts: Vec<String> = report.profile.counts().iter().map(u64::to_string).collect();
    if counts.is_empty() {
        text += "level sizes: -\n";
    } else {
        text += &format!("level sizes: {}\n", counts.join(" "));
    }
    if report.violations.is_empty() {
        text += "violations: none\n";
    } else {
        text += &format!("violations: {}\n", report.violations.len());
        for v in &report.violations {
            text += &format!("  node {}: {:?}\n", v.node, v.kind);
        }
    }
    text += if report.is_valid() {
        "result: valid\n"
    } else {
        "result: INVALID\n"
    };
    text
}

pub fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let tree = read_tree(&args.input)?;
    let report = validate(&tree);
    write_out(out, &render_report(&report))?;
    Ok(if report.is_valid() {
        exit::OK
    } else {
        exit::NEGATIVE
    })
}

pub fn cmd_search(args: SearchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let keys = load_keys(&args.input, args.sort)?;
    let outcome = KeySequence::new(&keys)?.search(&args.key);
    match outcome.index.get() {
        Some(i) => {
            write_out(
                out,
                &format!("found {i} comparisons {}\n", outcome.comparisons),
            )?;
            Ok(exit::OK)
        }
        None => {
            write_out(
                out,
                &format!("absent comparisons {}\n", outcome.comparisons),
            )?;
            Ok(exit::NEGATIVE)
        }
    }
}

pub const BENCH_HEADER: &str = "algo,n,threads,repeat,median_ns";

fn median_ns<T>(
    repeat: usize,
    mut f: impl FnMut() -> Result<T, CliError>,
) -> Result<u128, CliError> {
    let mut samples = Vec::with_capacity(repeat);
    for _ in 0..repeat {
        let start = Instant::now();
        let result = f()?;
        samples.push(start.elapsed().as_nanos());
        drop(std::hint::black_box(result));
    }
    samples.sort_unstable();
    Ok(samples[repeat / 2])
}

fn precheck(tree: &TreeArrays, algo: &str) -> Result<(), CliError> {
    let report = validate(tree);
    match report.violations.first() {
        None if report.is_valid() => Ok(()),
        first => Err(CliError::Precheck(format!(
            "{algo}: invalid tree ({first:?})"
        ))),
    }
}

pub fn cmd_bench(args: BenchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if args.repeat < 5 {
        return Err(CliError::Usage("--repeat must be at least 5".into()));
    }
    if args.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let opts = BuildOptions::default();
    let mut rows = vec![BENCH_HEADER.to_string()];
    if matches!(args.algo, Algo::New | Algo::Both) {
        let tree = tree_for(args.n, opts, args.threads)?;
        precheck(&tree, "new")?;
        if args.threads > 1 && tree != build(args.n, opts)? {
            return Err(CliError::Precheck(
                "new: parallel output differs from sequential output".into(),
            ));
        }
        drop(tree);
        let ns = median_ns(args.repeat, || tree_for(args.n, opts, args.threads))?;
        rows.push(format!(
            "new,{},{},{},{ns}",
            args.n, args.threads, args.repeat
        ));
    }
    if matches!(args.algo, Algo::Halving | Algo::Both) {
        precheck(&build_halving(args.n)?, "halving")?;
        let ns = median_ns(args.repeat, || Ok(build_halving(args.n)?))?;
        rows.push(format!("halving,{},1,{},{ns}", args.n, args.repeat));
    }
    write_out(out, &(rows.join("\n") + "\n"))?;
    Ok(exit::OK)
}
