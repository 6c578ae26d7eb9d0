//! Seeded synthesis of random graphs, trees, alignments and junk lines.
//! Drives the property suites and makes experiments reproducible without
//! corpus data.

use rand::Rng;

use crate::graph::{AmrGraph, ConstKind, Edge, NodeRef};
use crate::preprocess::{AlignEntry, Alignment};
use crate::tree::{TreeNodeKind, VariableFreeTree};

const CONCEPTS: &[&str] = &[
    "go-01",
    "want-01",
    "believe-01",
    "dog",
    "cat",
    "boy",
    "girl",
    "city",
    "country",
    "house",
    "day",
    "person",
    "thing",
    "good",
    "small",
    "run-02",
    "see-01",
    "have-03",
    "wave-04",
    "heat",
];

const RELATIONS: &[&str] = &[
    ":ARG0",
    ":ARG1",
    ":ARG2",
    ":mod",
    ":time",
    ":location",
    ":domain",
    ":poss",
    ":manner",
    ":ARG1-of",
];

const ATTR_RELATIONS: &[&str] = &[":polarity", ":quant", ":mode", ":value", ":op1"];

fn pick<'a, R: Rng>(rng: &mut R, pool: &'a [&'a str]) -> &'a str {
    pool[rng.random_range(0..pool.len())]
}

#[derive(Debug, Clone, Copy)]
pub struct GraphConfig {
    pub max_vars: usize,
    /// Give every node a unique concept (and unique attribute values), so
    /// pruning and co-reference restoration are exact no-ops.
    pub distinct_concepts: bool,
    /// Extra edges pointing at already-present variables, at most one per
    /// target, never closing a cycle.
    pub max_reentrancies: usize,
    pub attribute_prob: f64,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            max_vars: 7,
            distinct_concepts: false,
            max_reentrancies: 0,
            attribute_prob: 0.3,
        }
    }
}

/// A random rooted graph satisfying every `AmrGraph` invariant.
pub fn random_graph<R: Rng>(rng: &mut R, cfg: &GraphConfig) -> AmrGraph {
    let n = rng.random_range(1..=cfg.max_vars.max(1));
    let mut parents = vec![0usize; n];
    for (i, parent) in parents.iter_mut().enumerate().skip(1) {
        *parent = rng.random_range(0..i);
    }
    let mut graph = AmrGraph::new("v0");
    for i in 0..n {
        let concept = if cfg.distinct_concepts {
            format!("{}-x{i}", pick(rng, CONCEPTS))
        } else {
            pick(rng, CONCEPTS).to_string()
        };
        graph.instances.push((format!("v{i}"), concept));
    }
    for (i, &parent) in parents.iter().enumerate().skip(1) {
        graph.edges.push(Edge::new(
            format!("v{parent}"),
            pick(rng, RELATIONS),
            NodeRef::var(format!("v{i}")),
        ));
    }
    for i in 0..n {
        if rng.random_bool(cfg.attribute_prob) {
            let target = if cfg.distinct_concepts {
                NodeRef::constant(format!("{}", 100 + i), ConstKind::Number)
            } else {
                match rng.random_range(0..3) {
                    0 => NodeRef::constant("-", ConstKind::Symbol),
                    1 => {
                        NodeRef::constant(format!("{}", rng.random_range(0..5)), ConstKind::Number)
                    }
                    _ => NodeRef::constant("France", ConstKind::Quoted),
                }
            };
            graph.edges.push(Edge::new(
                format!("v{i}"),
                pick(rng, ATTR_RELATIONS),
                target,
            ));
        }
    }
    let is_ancestor = |parents: &[usize], mut node: usize, candidate: usize| -> bool {
        loop {
            if node == candidate {
                return true;
            }
            if node == 0 {
                return false;
            }
            node = parents[node];
        }
    };
    let mut reentrant_targets: Vec<usize> = Vec::new();
    for _ in 0..cfg.max_reentrancies {
        if n < 2 {
            break;
        }
        let source = rng.random_range(0..n);
        let target = rng.random_range(0..n);
        if is_ancestor(&parents, source, target) || reentrant_targets.contains(&target) {
            continue;
        }
        reentrant_targets.push(target);
        graph.edges.push(Edge::new(
            format!("v{source}"),
            pick(rng, RELATIONS),
            NodeRef::var(format!("v{target}")),
        ));
    }
    graph
}

/// Renames every variable bijectively to `{prefix}{i}`.
pub fn rename_vars(graph: &AmrGraph, prefix: &str) -> AmrGraph {
    let rename = |v: &str| -> String {
        let idx = graph
            .instances
            .iter()
            .position(|(var, _)| var == v)
            .expect("variable defined");
        format!("{prefix}{idx}")
    };
    let mut out = graph.clone();
    out.top = rename(&graph.top);
    out.instances = graph
        .instances
        .iter()
        .map(|(v, c)| (rename(v), c.clone()))
        .collect();
    out.edges = graph
        .edges
        .iter()
        .map(|e| {
            let target = match &e.target {
                NodeRef::Var(t) => NodeRef::var(rename(t)),
                c => c.clone(),
            };
            Edge::new(rename(&e.source), e.relation.clone(), target)
        })
        .collect();
    out
}

/// Applies 1-3 small semantic edits: relabeled edges, changed concepts,
/// added attributes, deleted leaves, reordered edge lists. The result is
/// still a valid graph.
pub fn perturb<R: Rng>(rng: &mut R, graph: &AmrGraph) -> AmrGraph {
    let mut out = graph.clone();
    for _ in 0..rng.random_range(1..=3) {
        match rng.random_range(0..5) {
            0 if !out.edges.is_empty() => {
                let i = rng.random_range(0..out.edges.len());
                out.edges[i].relation = pick(rng, RELATIONS).to_string();
            }
            1 => {
                let i = rng.random_range(0..out.instances.len());
                out.instances[i].1 = pick(rng, CONCEPTS).to_string();
            }
            2 => {
                let i = rng.random_range(0..out.instances.len());
                let var = out.instances[i].0.clone();
                out.edges.push(Edge::new(
                    var,
                    pick(rng, ATTR_RELATIONS),
                    NodeRef::constant("-", ConstKind::Symbol),
                ));
            }
            3 if out.num_vars() > 1 => {
                let leaves: Vec<String> = out
                    .instances
                    .iter()
                    .map(|(v, _)| v.clone())
                    .filter(|v| v != &out.top && out.outgoing(v).next().is_none())
                    .collect();
                if let Some(victim) = leaves.first() {
                    out.edges
                        .retain(|e| e.target != NodeRef::var(victim.clone()));
                    out.instances.retain(|(v, _)| v != victim);
                }
            }
            _ if out.edges.len() > 1 => {
                let i = rng.random_range(0..out.edges.len());
                let j = rng.random_range(0..out.edges.len());
                out.edges.swap(i, j);
            }
            _ => {}
        }
    }
    out
}

/// A random variable-free tree; small label pools make duplicate
/// (relation, concept) leaves common, which the pruning laws need.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> VariableFreeTree {
    let concepts = &CONCEPTS[..6];
    let relations = &RELATIONS[..5];
    let n = rng.random_range(1..=max_nodes.max(1));
    let mut nodes: Vec<VariableFreeTree> = (0..n)
        .map(|i| {
            if i > 0 && rng.random_bool(0.15) {
                VariableFreeTree::constant(format!("{}", rng.random_range(0..4)), ConstKind::Number)
            } else {
                VariableFreeTree::concept(pick(rng, concepts))
            }
        })
        .collect();
    // attach children to earlier concept nodes, back to front; node 0 is
    // always a concept, so a parent always exists
    for i in (1..n).rev() {
        let concept_parents: Vec<usize> = (0..i)
            .filter(|&j| matches!(nodes[j].kind, TreeNodeKind::Concept))
            .collect();
        let parent = concept_parents[rng.random_range(0..concept_parents.len())];
        let child = nodes.remove(i);
        let rel = pick(rng, relations).to_string();
        nodes[parent].children.push((rel, child));
    }
    nodes.remove(0)
}

fn node_paths(tree: &VariableFreeTree) -> Vec<Vec<usize>> {
    fn walk(node: &VariableFreeTree, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        for (i, (_, child)) in node.children.iter().enumerate() {
            path.push(i);
            walk(child, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(tree, &mut Vec::new(), &mut out);
    out
}

/// Aligns a random subset of tree nodes to random token indices.
pub fn random_alignment<R: Rng>(
    rng: &mut R,
    tree: &VariableFreeTree,
    sentence_len: usize,
) -> Alignment {
    let mut entries = Vec::new();
    for path in node_paths(tree) {
        if rng.random_bool(0.6) {
            let start = rng.random_range(0..sentence_len.max(1));
            entries.push(AlignEntry {
                start,
                end: start + 1,
                path,
            });
        }
    }
    Alignment { entries }
}

/// A line of structural noise: parens, quotes, relations, words, junk.
pub fn random_junk_line<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let pieces = [
        "(", ")", "\"", ":", ":mod", ":ARG0", "/", "+", "\\", "*", " ", "  ", "dog", "go-01",
        "material", "-", "1", "null", "::snt", "über", "(raw", "x)",
    ];
    let len = rng.random_range(0..=max_len);
    let mut line = String::new();
    for _ in 0..len {
        line.push_str(pieces[rng.random_range(0..pieces.len())]);
    }
    line
}

/// A printable single-line string exercising every tokenizer path.
pub fn random_text_line<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| match rng.random_range(0..10) {
            0 => ' ',
            1 => '(',
            2 => ')',
            3 => ':',
            4 => '+',
            5 => '"',
            6 => '\\',
            7 => '*',
            _ => char::from(rng.random_range(b'a'..=b'z')),
        })
        .collect()
}
