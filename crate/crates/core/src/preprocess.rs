//! Gold-side preprocessing: sentence cleaning, wiki stripping, variable
//! removal, alignment-driven reordering and data doubling.

use std::collections::HashMap;

use crate::graph::{AmrGraph, NodeRef};
use crate::tree::{TreeNodeKind, VariableFreeTree};

// ---------------------------------------------------------------------------
// Sentence cleaning
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SentenceRecord {
    pub raw: String,
    pub cleaned: String,
    pub tokens: Vec<String>,
    /// One POS tag per token; empty strings mean "untagged".
    pub tags: Option<Vec<String>>,
}

/// Drops substrings matching `<[A-Za-z/!][^>]*>` (HTML tags). URLs survive:
/// they never put `<` before an ASCII letter, `/` or `!` followed by `>`.
fn strip_html_tags(raw: &str) -> String {
    let chars: Vec<char> = raw.chars().collect();
    let mut out = String::with_capacity(raw.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '<' && i + 1 < chars.len() {
            let c = chars[i + 1];
            if c.is_ascii_alphabetic() || c == '/' || c == '!' {
                if let Some(end) = chars[i + 1..].iter().position(|&c| c == '>') {
                    i += end + 2; // skip past `>`
                    continue;
                }
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}

/// Removes HTML tags, squeezes whitespace and tokenizes on spaces.
pub fn clean_sentence(raw: &str) -> SentenceRecord {
    let stripped = strip_html_tags(raw);
    let tokens: Vec<String> = stripped.split_whitespace().map(str::to_string).collect();
    SentenceRecord {
        raw: raw.to_string(),
        cleaned: tokens.join(" "),
        tokens,
        tags: None,
    }
}

// ---------------------------------------------------------------------------
// Graph-level preprocessing
// ---------------------------------------------------------------------------

/// Removes every `:wiki` edge; nothing else changes.
pub fn strip_wiki(graph: &AmrGraph) -> AmrGraph {
    let mut out = graph.clone();
    out.edges.retain(|e| e.relation != ":wiki");
    out
}

/// Warning emitted when variable removal walks into a cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicReference {
    pub var: String,
}

/// Turns a graph into the variable-free tree: depth-first from the top, the
/// first visit of a variable expands its subtree, every later mention becomes
/// a leaf carrying only the concept. Cycles are cut at one level and
/// reported.
pub fn remove_variables(graph: &AmrGraph) -> (VariableFreeTree, Vec<CyclicReference>) {
    let mut adjacency: HashMap<&str, Vec<(&str, &NodeRef)>> = HashMap::new();
    for e in &graph.edges {
        adjacency
            .entry(e.source.as_str())
            .or_default()
            .push((e.relation.as_str(), &e.target));
    }
    let mut warnings = Vec::new();
    let mut expanded: Vec<&str> = Vec::new();
    let mut path: Vec<&str> = Vec::new();
    let tree = expand(
        graph,
        &adjacency,
        &graph.top,
        &mut expanded,
        &mut path,
        &mut warnings,
    );
    (tree, warnings)
}

fn expand<'g>(
    graph: &'g AmrGraph,
    adjacency: &HashMap<&str, Vec<(&'g str, &'g NodeRef)>>,
    var: &'g str,
    expanded: &mut Vec<&'g str>,
    path: &mut Vec<&'g str>,
    warnings: &mut Vec<CyclicReference>,
) -> VariableFreeTree {
    let concept = graph.concept_of(var).unwrap_or("amr-unknown");
    expanded.push(var);
    path.push(var);
    let mut children = Vec::new();
    if let Some(edges) = adjacency.get(var) {
        for (rel, target) in edges {
            let child = match target {
                NodeRef::Const { value, kind } => VariableFreeTree::constant(value.clone(), *kind),
                NodeRef::Var(t) => {
                    if path.contains(&t.as_str()) {
                        warnings.push(CyclicReference { var: t.clone() });
                        VariableFreeTree::concept(graph.concept_of(t).unwrap_or("amr-unknown"))
                    } else if expanded.contains(&t.as_str()) {
                        VariableFreeTree::concept(graph.concept_of(t).unwrap_or("amr-unknown"))
                    } else {
                        expand(graph, adjacency, t, expanded, path, warnings)
                    }
                }
            };
            children.push((rel.to_string(), child));
        }
    }
    path.pop();
    VariableFreeTree {
        label: concept.to_string(),
        kind: TreeNodeKind::Concept,
        children,
    }
}

// ---------------------------------------------------------------------------
// Alignments
// ---------------------------------------------------------------------------

/// One alignment entry: a token span pointing at a tree node. Paths are
/// child indices below the root; the surface notation writes the root as `0`,
/// so `0.1.0` resolves to `root.children[1].children[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignEntry {
    pub start: usize,
    pub end: usize,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Alignment {
    pub entries: Vec<AlignEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignmentFormat {
    /// Space-separated `start-end|path(+path)*` items (JAMR metadata style).
    Jamr,
    /// One `tokenIndex<TAB>path` entry per line.
    Tsv,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("malformed alignment entry `{item}`")]
pub struct MalformedEntry {
    pub item: String,
}

fn parse_path(s: &str) -> Result<Vec<usize>, MalformedEntry> {
    let mut parts = s.split('.');
    // leading component names the root and must be 0
    match parts.next().map(|p| p.parse::<usize>()) {
        Some(Ok(0)) => {}
        _ => {
            return Err(MalformedEntry {
                item: s.to_string(),
            })
        }
    }
    parts
        .map(|p| {
            p.parse::<usize>().map_err(|_| MalformedEntry {
                item: s.to_string(),
            })
        })
        .collect()
}

pub fn parse_alignments(meta: &str, format: AlignmentFormat) -> Result<Alignment, MalformedEntry> {
    let mut entries = Vec::new();
    match format {
        AlignmentFormat::Jamr => {
            for item in meta.split_whitespace() {
                let (span, paths) = item.split_once('|').ok_or_else(|| MalformedEntry {
                    item: item.to_string(),
                })?;
                let (s, e) = span.split_once('-').ok_or_else(|| MalformedEntry {
                    item: item.to_string(),
                })?;
                let start: usize = s.parse().map_err(|_| MalformedEntry {
                    item: item.to_string(),
                })?;
                let end: usize = e.parse().map_err(|_| MalformedEntry {
                    item: item.to_string(),
                })?;
                for p in paths.split('+') {
                    entries.push(AlignEntry {
                        start,
                        end,
                        path: parse_path(p)?,
                    });
                }
            }
        }
        AlignmentFormat::Tsv => {
            for line in meta.lines() {
                if line.trim().is_empty() {
                    continue;
                }
                let (idx, path) = line.split_once('\t').ok_or_else(|| MalformedEntry {
                    item: line.to_string(),
                })?;
                let token: usize = idx.trim().parse().map_err(|_| MalformedEntry {
                    item: line.to_string(),
                })?;
                entries.push(AlignEntry {
                    start: token,
                    end: token + 1,
                    path: parse_path(path.trim())?,
                });
            }
        }
    }
    Ok(Alignment { entries })
}

// ---------------------------------------------------------------------------
// Reordering
// ---------------------------------------------------------------------------

// Tree annotated with alignment entry indices, so child permutations can be
// tracked and the alignment remapped afterwards.
struct AnnNode {
    label: String,
    kind: TreeNodeKind,
    entries: Vec<usize>,
    children: Vec<(String, AnnNode)>,
}

fn annotate(tree: &VariableFreeTree, align: &Alignment) -> AnnNode {
    fn build(node: &VariableFreeTree, path: &mut Vec<usize>, align: &Alignment) -> AnnNode {
        let entries = align
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.path == *path)
            .map(|(i, _)| i)
            .collect();
        let children = node
            .children
            .iter()
            .enumerate()
            .map(|(i, (rel, child))| {
                path.push(i);
                let ann = build(child, path, align);
                path.pop();
                (rel.clone(), ann)
            })
            .collect();
        AnnNode {
            label: node.label.clone(),
            kind: node.kind,
            entries,
            children,
        }
    }
    build(tree, &mut Vec::new(), align)
}

/// Sort key for a subtree: the minimum aligned token of the node itself when
/// it is aligned, otherwise the minimum over its children's keys. A node's
/// own alignment shadows its descendants', so a re-entrant copy aligned far
/// away does not drag a whole branch forward.
fn subtree_key(node: &AnnNode, align: &Alignment) -> Option<usize> {
    let own = node.entries.iter().map(|&i| align.entries[i].start).min();
    if own.is_some() {
        return own;
    }
    node.children
        .iter()
        .filter_map(|(_, c)| subtree_key(c, align))
        .min()
}

fn sort_children(node: &mut AnnNode, align: &Alignment) {
    for (_, child) in node.children.iter_mut() {
        sort_children(child, align);
    }
    let keys: Vec<Option<usize>> = node
        .children
        .iter()
        .map(|(_, c)| subtree_key(c, align))
        .collect();
    // unaligned children inherit their predecessor's effective key, keeping
    // them attached to it through the stable sort
    let mut effective: Vec<i64> = Vec::with_capacity(keys.len());
    for (i, key) in keys.iter().enumerate() {
        let value = match key {
            Some(k) => *k as i64,
            None => {
                if i == 0 {
                    i64::MIN
                } else {
                    effective[i - 1]
                }
            }
        };
        effective.push(value);
    }
    let mut order: Vec<usize> = (0..node.children.len()).collect();
    order.sort_by_key(|&i| (effective[i], i));
    let mut taken: Vec<Option<(String, AnnNode)>> = node.children.drain(..).map(Some).collect();
    node.children = order
        .iter()
        .map(|&i| taken[i].take().expect("each index used once"))
        .collect();
}

fn strip_annotations(
    node: AnnNode,
    path: &mut Vec<usize>,
    new_paths: &mut Vec<(usize, Vec<usize>)>,
) -> VariableFreeTree {
    for &e in &node.entries {
        new_paths.push((e, path.clone()));
    }
    let children = node
        .children
        .into_iter()
        .enumerate()
        .map(|(i, (rel, child))| {
            path.push(i);
            let c = strip_annotations(child, path, new_paths);
            path.pop();
            (rel, c)
        })
        .collect();
    VariableFreeTree {
        label: node.label,
        kind: node.kind,
        children,
    }
}

/// Stably reorders every node's children so that depth-first traversal best
/// follows the word order of the aligned sentence. Returns the reordered tree
/// together with the alignment remapped to the new paths, which makes the
/// operation idempotent.
pub fn best_reordering(
    tree: &VariableFreeTree,
    align: &Alignment,
) -> (VariableFreeTree, Alignment) {
    let mut ann = annotate(tree, align);
    sort_children(&mut ann, align);
    let mut new_paths = Vec::new();
    let out = strip_annotations(ann, &mut Vec::new(), &mut new_paths);
    let mut remapped = align.clone();
    for (entry_idx, path) in new_paths {
        remapped.entries[entry_idx].path = path;
    }
    (out, remapped)
}

/// Alphabetical child order (by serialized child form), depth-first.
pub fn alphabetical_reordering(tree: &VariableFreeTree) -> VariableFreeTree {
    let mut out = tree.clone();
    fn sort(node: &mut VariableFreeTree) {
        for (_, child) in node.children.iter_mut() {
            sort(child);
        }
        node.children
            .sort_by(|(ra, a), (rb, b)| (ra, a.to_string()).cmp(&(rb, b.to_string())));
    }
    sort(&mut out);
    out
}

/// Counts of ordered sibling-pair keys over a corpus, for the
/// swap-to-majority ("consistency") reordering.
#[derive(Debug, Default, Clone)]
pub struct PairOrderStats {
    counts: HashMap<(String, String), u64>,
}

impl PairOrderStats {
    fn sibling_key(rel: &str, child: &VariableFreeTree) -> String {
        format!("{rel} {}", child.label)
    }

    pub fn observe(&mut self, tree: &VariableFreeTree) {
        let mut stack = vec![tree];
        while let Some(node) = stack.pop() {
            for i in 0..node.children.len() {
                for j in i + 1..node.children.len() {
                    let a = Self::sibling_key(&node.children[i].0, &node.children[i].1);
                    let b = Self::sibling_key(&node.children[j].0, &node.children[j].1);
                    *self.counts.entry((a, b)).or_default() += 1;
                }
            }
            stack.extend(node.children.iter().map(|(_, c)| c));
        }
    }

    /// Swaps adjacent siblings whose order is strictly less common than the
    /// reverse, one left-to-right pass per node.
    pub fn consistency_reordering(&self, tree: &VariableFreeTree) -> VariableFreeTree {
        let mut out = tree.clone();
        self.fix(&mut out);
        out
    }

    fn fix(&self, node: &mut VariableFreeTree) {
        for (_, child) in node.children.iter_mut() {
            self.fix(child);
        }
        for i in 0..node.children.len().saturating_sub(1) {
            let a = Self::sibling_key(&node.children[i].0, &node.children[i].1);
            let b = Self::sibling_key(&node.children[i + 1].0, &node.children[i + 1].1);
            let forward = self
                .counts
                .get(&(a.clone(), b.clone()))
                .copied()
                .unwrap_or(0);
            let reverse = self.counts.get(&(b, a)).copied().unwrap_or(0);
            if reverse > forward {
                node.children.swap(i, i + 1);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Enumeration and doubling
// ---------------------------------------------------------------------------

/// Distinct child-permutation variants of `tree` in a deterministic order,
/// original first, capped at `limit`.
pub fn enumerate_reorderings(tree: &VariableFreeTree, limit: usize) -> Vec<VariableFreeTree> {
    let mut out: Vec<VariableFreeTree> = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    let mut current = tree.clone();
    enumerate_node(&mut current, 0, limit, &mut seen, &mut out);
    out
}

// Odometer over nodes in depth-first order: for each node enumerate the
// lexicographic permutations of its children (identity first), recursing to
// later nodes for every choice.
fn enumerate_node(
    tree: &mut VariableFreeTree,
    node_index: usize,
    limit: usize,
    seen: &mut Vec<String>,
    out: &mut Vec<VariableFreeTree>,
) {
    if out.len() >= limit {
        return;
    }
    let total_nodes = tree.node_count();
    if node_index >= total_nodes {
        let key = tree.to_string();
        if !seen.contains(&key) {
            seen.push(key);
            out.push(tree.clone());
        }
        return;
    }
    let n = with_node(tree, node_index, |node| node.children.len());
    let mut perm: Vec<usize> = (0..n).collect();
    let original = with_node(tree, node_index, |node| node.children.clone());
    loop {
        with_node(tree, node_index, |node| {
            node.children = perm.iter().map(|&i| original[i].clone()).collect();
        });
        enumerate_node(tree, node_index + 1, limit, seen, out);
        if out.len() >= limit || !next_permutation(&mut perm) {
            break;
        }
    }
    with_node(tree, node_index, |node| {
        node.children = original.clone();
    });
}

/// Runs `f` on the `index`-th node in depth-first pre-order.
fn with_node<T>(
    tree: &mut VariableFreeTree,
    index: usize,
    f: impl FnOnce(&mut VariableFreeTree) -> T,
) -> T {
    fn locate<'t>(
        node: &'t mut VariableFreeTree,
        index: usize,
        counter: &mut usize,
    ) -> Option<&'t mut VariableFreeTree> {
        if *counter == index {
            return Some(node);
        }
        *counter += 1;
        for (_, child) in node.children.iter_mut() {
            if let Some(found) = locate(child, index, counter) {
                return Some(found);
            }
        }
        None
    }
    let mut counter = 0;
    let node = locate(tree, index, &mut counter).expect("node index in range");
    f(node)
}

fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// One training record: a sentence, its variable-free tree and alignment.
pub type TrainRecord = (SentenceRecord, VariableFreeTree, Alignment);

/// Appends the best-reordered variant of every record: N records become 2N,
/// originals first. Records are duplicated unconditionally, even when the
/// best reordering equals the original.
pub fn double_data(corpus: &[TrainRecord]) -> Vec<(SentenceRecord, VariableFreeTree)> {
    let mut out: Vec<(SentenceRecord, VariableFreeTree)> = corpus
        .iter()
        .map(|(s, t, _)| (s.clone(), t.clone()))
        .collect();
    out.extend(
        corpus
            .iter()
            .map(|(s, t, a)| (s.clone(), best_reordering(t, a).0)),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_amr;

    #[test]
    fn html_tags_are_removed() {
        let rec = clean_sentence("see <a href=\"x\">this</a>");
        assert_eq!(rec.cleaned, "see this");
        assert_eq!(rec.tokens, vec!["see", "this"]);
    }

    #[test]
    fn urls_are_kept() {
        let rec = clean_sentence("visit http://a.b/c now");
        assert_eq!(rec.cleaned, "visit http://a.b/c now");
    }

    #[test]
    fn plain_text_unchanged() {
        assert_eq!(clean_sentence("plain text").cleaned, "plain text");
    }

    #[test]
    fn math_angle_brackets_survive() {
        // `< ` is not a tag opener; an unterminated `<x` is kept as-is
        assert_eq!(clean_sentence("3 < 5 and 5 > 3").cleaned, "3 < 5 and 5 > 3");
        assert_eq!(clean_sentence("a <b untermin").cleaned, "a <b untermin");
    }

    #[test]
    fn whitespace_is_squeezed() {
        assert_eq!(clean_sentence("a   b\t c").cleaned, "a b c");
    }

    #[test]
    fn strip_wiki_removes_only_wiki_edges() {
        let g = parse_amr(
            r#"(c / country :wiki "France" :name (n / name :op1 "France") :mod (b / big))"#,
        )
        .unwrap();
        let stripped = strip_wiki(&g);
        assert_eq!(stripped.edges.len(), g.edges.len() - 1);
        assert!(stripped.edges.iter().all(|e| e.relation != ":wiki"));
        assert_eq!(stripped.instances, g.instances);
        // no :wiki at all: unchanged
        let g2 = parse_amr("(a / alpha :mod (b / beta))").unwrap();
        assert_eq!(strip_wiki(&g2), g2);
        // two :wiki edges: both removed
        let g3 = parse_amr(r#"(a / a2 :wiki "X" :ARG0 (b / b2 :wiki "Y"))"#).unwrap();
        assert_eq!(strip_wiki(&g3).edges.len(), 1);
    }

    const OPIUM: &str = r#"(m / material
   :mod (r / raw)
   :domain (o / opium)
   :ARG1-of (u / use-01
               :ARG2 (p / make-01
                        :ARG1 (h / heroin)
                        :ARG2 o)))"#;

    #[test]
    fn variable_removal_duplicates_coreferent_nodes() {
        let g = parse_amr(OPIUM).unwrap();
        let (tree, warnings) = remove_variables(&g);
        assert!(warnings.is_empty());
        assert_eq!(
            tree.to_string(),
            "(material :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))"
        );
    }

    #[test]
    fn no_reentrancy_keeps_shape() {
        let g = parse_amr("(a / alpha :x (b / beta) :y (c / gamma :z (d / delta)))").unwrap();
        let (tree, warnings) = remove_variables(&g);
        assert!(warnings.is_empty());
        assert_eq!(tree.to_string(), "(alpha :x (beta) :y (gamma :z (delta)))");
    }

    #[test]
    fn second_mention_becomes_concept_leaf() {
        let g = parse_amr(
            r#"(a / affect-01
   :ARG0 (w / wave-04 :ARG1 (h2 / heat))
   :ARG1 (p / person
            :ARG0-of (s / strike-02
                        :mod (h / hunger-01
                                :ARG0 p))))"#,
        )
        .unwrap();
        let (tree, _) = remove_variables(&g);
        // the re-entrant p expands under :ARG1 of affect-01; its second
        // mention under hunger-01's :ARG0 is just (person)
        assert_eq!(
            tree.to_string(),
            "(affect-01 :ARG0 (wave-04 :ARG1 (heat)) :ARG1 (person :ARG0-of (strike-02 :mod (hunger-01 :ARG0 (person)))))"
        );
        let leaf = tree.at_path(&[1, 0, 0, 0]).unwrap();
        assert_eq!(leaf.label, "person");
        assert!(leaf.is_leaf());
    }

    #[test]
    fn cycle_is_cut_with_warning() {
        let mut g = parse_amr("(a / alpha :x (b / beta))").unwrap();
        g.edges
            .push(crate::graph::Edge::new("b", ":y", NodeRef::var("a")));
        let (tree, warnings) = remove_variables(&g);
        assert_eq!(tree.to_string(), "(alpha :x (beta :y (alpha)))");
        assert_eq!(warnings, vec![CyclicReference { var: "a".into() }]);
    }

    #[test]
    fn jamr_alignment_items() {
        let a = parse_alignments("0-1|0.0", AlignmentFormat::Jamr).unwrap();
        assert_eq!(
            a.entries,
            vec![AlignEntry {
                start: 0,
                end: 1,
                path: vec![0]
            }]
        );
        let a = parse_alignments("3-5|0+0.1", AlignmentFormat::Jamr).unwrap();
        assert_eq!(a.entries.len(), 2);
        assert_eq!(a.entries[0].path, Vec::<usize>::new());
        assert_eq!(a.entries[1].path, vec![1]);
        assert!(a.entries.iter().all(|e| e.start == 3 && e.end == 5));
    }

    #[test]
    fn malformed_alignment() {
        assert!(parse_alignments("x-y|0", AlignmentFormat::Jamr).is_err());
        assert!(parse_alignments("1-2", AlignmentFormat::Jamr).is_err());
        assert!(parse_alignments("0-1|1.0", AlignmentFormat::Jamr).is_err());
    }

    #[test]
    fn tsv_alignment() {
        let a = parse_alignments("0\t0.1\n4\t0\n", AlignmentFormat::Tsv).unwrap();
        assert_eq!(a.entries.len(), 2);
        assert_eq!(a.entries[0].path, vec![1]);
        assert_eq!(a.entries[1].start, 4);
    }

    fn opium_tree() -> VariableFreeTree {
        let g = parse_amr(OPIUM).unwrap();
        remove_variables(&g).0
    }

    /// Token indices for "Opium is the raw material used to make heroin":
    /// opium 0, raw 3, material 4, use 5, make 7, heroin 8; both opium
    /// mentions carry the alignment of the graph node.
    fn opium_alignment() -> Alignment {
        parse_alignments(
            "4-5|0 3-4|0.0 0-1|0.1+0.2.0.1 5-6|0.2 7-8|0.2.0 8-9|0.2.0.0",
            AlignmentFormat::Jamr,
        )
        .unwrap()
    }

    #[test]
    fn opium_reordering() {
        let (reordered, _) = best_reordering(&opium_tree(), &opium_alignment());
        assert_eq!(
            reordered.to_string(),
            "(material :domain (opium) :mod (raw) :ARG1-of (use-01 :ARG2 (make-01 :ARG2 (opium) :ARG1 (heroin))))"
        );
    }

    #[test]
    fn reordering_is_idempotent_on_opium() {
        let (t1, a1) = best_reordering(&opium_tree(), &opium_alignment());
        let (t2, a2) = best_reordering(&t1, &a1);
        assert_eq!(t1, t2);
        assert_eq!(a1, a2);
    }

    #[test]
    fn empty_alignment_keeps_order() {
        let tree = opium_tree();
        let (out, _) = best_reordering(&tree, &Alignment::default());
        assert_eq!(out, tree);
    }

    #[test]
    fn enumerate_three_children() {
        let tree = VariableFreeTree::with_children(
            "a",
            vec![
                (":x".into(), VariableFreeTree::concept("b")),
                (":y".into(), VariableFreeTree::concept("c")),
                (":z".into(), VariableFreeTree::concept("d")),
            ],
        );
        let variants = enumerate_reorderings(&tree, 10);
        assert_eq!(variants.len(), 6);
        assert_eq!(variants[0], tree);
    }

    #[test]
    fn enumerate_chain_has_one_variant() {
        let tree = VariableFreeTree::with_children(
            "a",
            vec![(
                ":x".into(),
                VariableFreeTree::with_children(
                    "b",
                    vec![(":y".into(), VariableFreeTree::concept("c"))],
                ),
            )],
        );
        assert_eq!(enumerate_reorderings(&tree, 10).len(), 1);
    }

    #[test]
    fn enumerate_caps_at_limit_original_first() {
        let tree = opium_tree();
        let variants = enumerate_reorderings(&tree, 4);
        assert_eq!(variants.len(), 4);
        assert_eq!(variants[0], tree);
    }

    #[test]
    fn doubling_doubles() {
        let record = (
            clean_sentence("opium is raw"),
            opium_tree(),
            opium_alignment(),
        );
        let doubled = double_data(&[record.clone(), record]);
        assert_eq!(doubled.len(), 4);
        // unconditional duplication even when reorder is a no-op
        let plain = (
            clean_sentence("x"),
            VariableFreeTree::concept("x"),
            Alignment::default(),
        );
        assert_eq!(double_data(&[plain]).len(), 2);
        assert!(double_data(&[]).is_empty());
    }

    #[test]
    fn alphabetical_reordering_sorts_children() {
        let tree = opium_tree();
        let sorted = alphabetical_reordering(&tree);
        let rels: Vec<&str> = sorted.children.iter().map(|(r, _)| r.as_str()).collect();
        assert_eq!(rels, vec![":ARG1-of", ":domain", ":mod"]);
    }

    #[test]
    fn consistency_reordering_swaps_to_majority() {
        let majority = VariableFreeTree::with_children(
            "a",
            vec![
                (":x".into(), VariableFreeTree::concept("b")),
                (":y".into(), VariableFreeTree::concept("c")),
            ],
        );
        let minority = VariableFreeTree::with_children(
            "a",
            vec![
                (":y".into(), VariableFreeTree::concept("c")),
                (":x".into(), VariableFreeTree::concept("b")),
            ],
        );
        let mut stats = PairOrderStats::default();
        stats.observe(&majority);
        stats.observe(&majority);
        stats.observe(&minority);
        assert_eq!(stats.consistency_reordering(&minority), majority);
        assert_eq!(stats.consistency_reordering(&majority), majority);
    }
}
