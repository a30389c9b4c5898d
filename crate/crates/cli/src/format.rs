//! Tree serialization.
//!
//! JSON is `{"n", "root", "parent"?, "left", "right"}` with `null` for absent
//! links; `parent` is omitted when the tree does not store parents.

use std::fmt::Write as _;

use flatbst::{NodeIndex, TreeArrays};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Arrays,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeJson {
    n: u64,
    root: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<Vec<Option<u64>>>,
    left: Vec<Option<u64>>,
    right: Vec<Option<u64>>,
}

fn links(v: &[NodeIndex]) -> Vec<Option<u64>> {
    v.iter().map(|x| x.get()).collect()
}

pub fn to_json(tree: &TreeArrays) -> String {
    let doc = TreeJson {
        n: tree.len(),
        root: tree.root().get(),
        parent: tree.parent().map(links),
        left: links(tree.left()),
        right: links(tree.right()),
    };
    serde_json::to_string(&doc).expect("tree serializes")
}

/// Parses a JSON tree. Structural problems other than malformed JSON,
/// mismatched lengths or oversized indices are left for the validator.
pub fn from_json(text: &str) -> Result<TreeArrays, String> {
    let doc: TreeJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let convert = |field: &str, v: Vec<Option<u64>>| -> Result<Vec<NodeIndex>, String> {
        v.into_iter()
            .map(|x| match x {
                Some(i) if i >= flatbst::MAX_NODES => Err(format!(
                    "{field}: index {i} exceeds the maximum of 2^63 - 1"
                )),
                other => Ok(NodeIndex::from(other)),
            })
            .collect()
    };
    if doc.left.len() as u64 != doc.n {
        return Err(format!(
            "left has {} entries, n is {}",
            doc.left.len(),
            doc.n
        ));
    }
    let root = convert("root", vec![doc.root])?[0];
    let left = convert("left", doc.left)?;
    let right = convert("right", doc.right)?;
    let parent = doc.parent.map(|p| convert("parent", p)).transpose()?;
    TreeArrays::from_parts(root, left, right, parent).map_err(|e| e.to_string())
}

/// Graphviz digraph. Edges are listed breadth-first from the root, so every
/// node's incoming edge precedes its outgoing ones.
pub fn to_dot(tree: &TreeArrays, keys: Option<&[i64]>) -> String {
    let mut out = String::from("digraph bst {\n");
    for j in 0..tree.len() {
        match keys.and_then(|k| k.get(j as usize)) {
            Some(key) => writeln!(out, "  {j} [label=\"{j}: {key}\"];"),
            None => writeln!(out, "  {j} [label=\"{j}\"];"),
        }
        .unwrap();
    }
    let mut queue = std::collections::VecDeque::from_iter(tree.root().get());
    while let Some(j) = queue.pop_front() {
        for (side, child) in [
            ("L", tree.left()[j as usize]),
            ("R", tree.right()[j as usize]),
        ] {
            if let Some(c) = child.get() {
                writeln!(out, "  {j} -> {c} [label=\"{side}\"];").unwrap();
                queue.push_back(c);
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Plain text, one array per line, `-` for absent links.
pub fn to_arrays(tree: &TreeArrays) -> String {
    fn row(name: &str, v: &[NodeIndex]) -> String {
        let mut line = name.to_string();
        for x in v {
            line.push(' ');
            match x.get() {
                Some(i) => line.push_str(&i.to_string()),
                None => line.push('-'),
            }
        }
        line.push('\n');
        line
    }
    let mut out = format!("n {}\n", tree.len());
    out += &row("root", &[tree.root()]);
    if let Some(p) = tree.parent() {
        out += &row("parent", p);
    }
    out += &row("left", tree.left());
    out += &row("right", tree.right());
    out
}
