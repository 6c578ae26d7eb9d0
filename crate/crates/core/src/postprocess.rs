//! Turning raw model output back into valid, scorable AMRs: structural
//! repair, duplicate pruning, variable and co-reference restoration, and
//! wikification.

use std::collections::HashMap;

use crate::graph::{AmrGraph, ConstKind, Edge, NodeRef};
use crate::parse::looks_like_number;
use crate::tree::{TreeNodeKind, VariableFreeTree};

/// One logged action of a pipeline stage.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StageLog {
    pub stage: &'static str,
    pub action: &'static str,
    pub detail: String,
}

impl StageLog {
    fn new(stage: &'static str, action: &'static str, detail: impl Into<String>) -> Self {
        StageLog {
            stage,
            action,
            detail: detail.into(),
        }
    }
}

// ---------------------------------------------------------------------------
// Repair
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum RTok {
    LParen,
    RParen,
    Rel(String),
    Str(String),
    Word(String),
}

/// Tolerant lexer. An unclosed quote is terminated just before the next
/// `(`, `)` or `:` (or at end of line), and the fix is logged.
fn repair_lex(raw: &str, logs: &mut Vec<StageLog>) -> Vec<RTok> {
    let chars: Vec<char> = raw.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                toks.push(RTok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(RTok::RParen);
                i += 1;
            }
            '"' => {
                // does a closing quote appear before any paren?
                let mut end = None;
                for (off, &c2) in chars[i + 1..].iter().enumerate() {
                    match c2 {
                        '"' => {
                            end = Some(i + 1 + off);
                            break;
                        }
                        '(' | ')' => break,
                        _ => {}
                    }
                }
                match end {
                    Some(end) => {
                        toks.push(RTok::Str(chars[i + 1..end].iter().collect()));
                        i = end + 1;
                    }
                    None => {
                        let boundary = chars[i + 1..]
                            .iter()
                            .position(|&c2| c2 == '(' || c2 == ')' || c2 == ':')
                            .map(|off| i + 1 + off)
                            .unwrap_or(chars.len());
                        let content: String = chars[i + 1..boundary]
                            .iter()
                            .collect::<String>()
                            .trim()
                            .to_string();
                        logs.push(StageLog::new("repair", "closed_quote", content.clone()));
                        toks.push(RTok::Str(content));
                        i = boundary;
                    }
                }
            }
            ':' => {
                let mut s = String::from(":");
                i += 1;
                while i < chars.len()
                    && !chars[i].is_whitespace()
                    && !matches!(chars[i], '(' | ')' | '"')
                {
                    s.push(chars[i]);
                    i += 1;
                }
                toks.push(RTok::Rel(s));
            }
            _ => {
                let mut s = String::new();
                while i < chars.len()
                    && !chars[i].is_whitespace()
                    && !matches!(chars[i], '(' | ')' | '"' | ':')
                {
                    s.push(chars[i]);
                    i += 1;
                }
                toks.push(RTok::Word(s));
            }
        }
    }
    toks
}

const SYMBOL_CONSTANTS: &[&str] = &["-", "+", "imperative", "expressive", "interrogative"];

fn leaf_for_word(w: String) -> VariableFreeTree {
    if looks_like_number(&w) {
        VariableFreeTree::constant(w, ConstKind::Number)
    } else if SYMBOL_CONSTANTS.contains(&w.as_str()) {
        VariableFreeTree::constant(w, ConstKind::Symbol)
    } else {
        VariableFreeTree::concept(w)
    }
}

struct Repairer {
    toks: Vec<RTok>,
    at: usize,
    logs: Vec<StageLog>,
}

impl Repairer {
    fn peek(&self) -> Option<&RTok> {
        self.toks.get(self.at)
    }

    /// Parses a node starting at `(`. Returns None when the node turned out
    /// to be empty and was dropped.
    fn parse_node(&mut self) -> Option<VariableFreeTree> {
        debug_assert_eq!(self.peek(), Some(&RTok::LParen));
        self.at += 1;
        // concept: first word; tolerate `var / concept` leftovers
        let mut concept = String::new();
        if let Some(RTok::Word(w)) = self.peek() {
            concept = w.clone();
            self.at += 1;
            if concept != "/" && self.peek() == Some(&RTok::Word("/".into())) {
                self.at += 1;
                if let Some(RTok::Word(real)) = self.peek().cloned() {
                    self.logs
                        .push(StageLog::new("repair", "dropped_variable", concept.clone()));
                    concept = real;
                    self.at += 1;
                }
            }
        } else if let Some(RTok::Str(s)) = self.peek() {
            concept = s.clone();
            self.at += 1;
        }
        let mut node = VariableFreeTree::concept(concept);
        loop {
            match self.peek().cloned() {
                Some(RTok::RParen) => {
                    self.at += 1;
                    break;
                }
                Some(RTok::Rel(rel)) => {
                    self.at += 1;
                    match self.peek().cloned() {
                        Some(RTok::LParen) => {
                            if let Some(child) = self.parse_node() {
                                node.children.push((rel, child));
                            } else {
                                self.logs.push(StageLog::new(
                                    "repair",
                                    "deleted_unfinished",
                                    rel.clone(),
                                ));
                            }
                        }
                        Some(RTok::Word(w)) => {
                            self.at += 1;
                            node.children.push((rel, leaf_for_word(w)));
                        }
                        Some(RTok::Str(s)) => {
                            self.at += 1;
                            node.children
                                .push((rel, VariableFreeTree::constant(s, ConstKind::Quoted)));
                        }
                        Some(RTok::Rel(_)) | Some(RTok::RParen) | None => {
                            self.logs.push(StageLog::new(
                                "repair",
                                "deleted_unfinished",
                                rel.clone(),
                            ));
                        }
                    }
                }
                Some(RTok::LParen) => {
                    // a node with no relation in front: parse and discard
                    if let Some(orphan) = self.parse_node() {
                        self.logs.push(StageLog::new(
                            "repair",
                            "dropped_orphan",
                            orphan.to_string(),
                        ));
                    }
                }
                Some(RTok::Word(w)) => {
                    self.at += 1;
                    self.logs.push(StageLog::new("repair", "dropped_word", w));
                }
                Some(RTok::Str(s)) => {
                    self.at += 1;
                    self.logs.push(StageLog::new("repair", "dropped_word", s));
                }
                None => {
                    self.logs
                        .push(StageLog::new("repair", "closed_paren", node.label.clone()));
                    break;
                }
            }
        }
        if node.label.is_empty() {
            if node.children.is_empty() {
                return None;
            }
            self.logs
                .push(StageLog::new("repair", "missing_concept", ""));
            node.label = "amr-unknown".into();
        }
        Some(node)
    }
}

/// Repairs one raw model-output line into a parseable tree. Total: any byte
/// string yields a tree; an empty result falls back to `(amr-empty)`.
pub fn repair(raw: &str) -> (VariableFreeTree, Vec<StageLog>) {
    let mut logs = Vec::new();
    let toks = repair_lex(raw, &mut logs);
    let mut repairer = Repairer { toks, at: 0, logs };
    // drop anything before the first `(`; synthesize one if the line starts
    // with a bare concept instead
    let mut tree = None;
    while tree.is_none() {
        match repairer.peek() {
            None => break,
            Some(RTok::LParen) => {
                tree = repairer.parse_node();
            }
            Some(RTok::Word(_)) | Some(RTok::Rel(_)) | Some(RTok::Str(_)) => {
                repairer
                    .logs
                    .push(StageLog::new("repair", "inserted_paren", ""));
                repairer.toks.insert(repairer.at, RTok::LParen);
            }
            Some(RTok::RParen) => {
                repairer
                    .logs
                    .push(StageLog::new("repair", "dropped_paren", ""));
                repairer.at += 1;
            }
        }
    }
    // trailing tokens after the root are dropped
    while let Some(tok) = repairer.peek() {
        let action = match tok {
            RTok::RParen => "dropped_paren",
            _ => "dropped_trailing",
        };
        repairer.logs.push(StageLog::new("repair", action, ""));
        repairer.at += 1;
    }
    let mut logs = repairer.logs;
    let tree = tree.unwrap_or_else(|| {
        logs.push(StageLog::new("repair", "empty_fallback", ""));
        VariableFreeTree::concept("amr-empty")
    });
    (tree, logs)
}

// ---------------------------------------------------------------------------
// Pruning
// ---------------------------------------------------------------------------

/// The four leaf-pruning methods. Leaves are relation-concept pairs without
/// children, keyed by `(relation, label)` and counted depth-first over the
/// whole tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneMethod {
    /// 1: delete every occurrence after the first.
    Reoccurring,
    /// 2: delete an occurrence iff an earlier one shares the same parent.
    SameParent,
    /// 3: delete occurrences three and later.
    Frequent,
    /// 4: methods 2 and 3 combined.
    Combined,
}

impl PruneMethod {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(PruneMethod::Reoccurring),
            2 => Some(PruneMethod::SameParent),
            3 => Some(PruneMethod::Frequent),
            4 => Some(PruneMethod::Combined),
            _ => None,
        }
    }
}

/// One pruned leaf: the parent's path, the child slot it occupied, and the
/// leaf itself.
#[derive(Debug, Clone, PartialEq)]
pub struct PruneAction {
    pub parent_path: Vec<usize>,
    pub child_index: usize,
    pub relation: String,
    pub label: String,
}

struct LeafOccurrence {
    parent_path: Vec<usize>,
    child_index: usize,
    key: (String, String, TreeNodeKind),
    occ_index: usize,
}

fn census(tree: &VariableFreeTree) -> Vec<LeafOccurrence> {
    fn walk(
        node: &VariableFreeTree,
        path: &mut Vec<usize>,
        counters: &mut HashMap<(String, String, TreeNodeKind), usize>,
        occs: &mut Vec<LeafOccurrence>,
    ) {
        for (i, (rel, child)) in node.children.iter().enumerate() {
            if child.is_leaf() {
                let key = (rel.clone(), child.label.clone(), child.kind);
                let counter = counters.entry(key.clone()).or_insert(0);
                let occ_index = *counter;
                *counter += 1;
                occs.push(LeafOccurrence {
                    parent_path: path.clone(),
                    child_index: i,
                    key,
                    occ_index,
                });
            } else {
                path.push(i);
                walk(child, path, counters, occs);
                path.pop();
            }
        }
    }
    let mut occs = Vec::new();
    walk(tree, &mut Vec::new(), &mut HashMap::new(), &mut occs);
    occs
}

/// Deletes redundant duplicate leaves. Internal nodes are never touched.
pub fn prune(tree: &VariableFreeTree, method: PruneMethod) -> (VariableFreeTree, Vec<PruneAction>) {
    let occs = census(tree);
    let same_parent_dup = |occ: &LeafOccurrence| {
        occs.iter().any(|earlier| {
            earlier.occ_index < occ.occ_index
                && earlier.key == occ.key
                && earlier.parent_path == occ.parent_path
        })
    };
    let doomed: Vec<&LeafOccurrence> = occs
        .iter()
        .filter(|occ| match method {
            PruneMethod::Reoccurring => occ.occ_index >= 1,
            PruneMethod::SameParent => same_parent_dup(occ),
            PruneMethod::Frequent => occ.occ_index >= 2,
            PruneMethod::Combined => same_parent_dup(occ) || occ.occ_index >= 2,
        })
        .collect();
    let mut actions: Vec<PruneAction> = doomed
        .iter()
        .map(|occ| PruneAction {
            parent_path: occ.parent_path.clone(),
            child_index: occ.child_index,
            relation: occ.key.0.clone(),
            label: occ.key.1.clone(),
        })
        .collect();
    let mut out = tree.clone();
    // delete in descending full-path order so a removal never shifts the
    // indices a later removal still has to follow
    let full_path = |a: &PruneAction| {
        let mut p = a.parent_path.clone();
        p.push(a.child_index);
        p
    };
    actions.sort_by_key(|a| std::cmp::Reverse(full_path(a)));
    for action in &actions {
        let mut node = &mut out;
        for &idx in &action.parent_path {
            node = &mut node.children[idx].1;
        }
        node.children.remove(action.child_index);
    }
    actions.sort_by_key(&full_path);
    (out, actions)
}

// ---------------------------------------------------------------------------
// Variable restoration
// ---------------------------------------------------------------------------

fn variable_base(concept: &str) -> char {
    concept
        .chars()
        .find(|c| c.is_ascii_alphabetic())
        .map(|c| c.to_ascii_lowercase())
        .unwrap_or('x')
}

/// Assigns a fresh variable to every concept node: the first letter of the
/// concept, with suffixes 2, 3, ... on collision in first-seen order.
pub fn restore_variables(tree: &VariableFreeTree) -> AmrGraph {
    let mut graph = AmrGraph::default();
    let mut counters: HashMap<char, usize> = HashMap::new();
    let top = restore_node(tree, &mut graph, &mut counters);
    graph.top = top;
    graph
}

fn restore_node(
    node: &VariableFreeTree,
    graph: &mut AmrGraph,
    counters: &mut HashMap<char, usize>,
) -> String {
    let base = variable_base(&node.label);
    let counter = counters.entry(base).or_insert(0);
    *counter += 1;
    let var = if *counter == 1 {
        base.to_string()
    } else {
        format!("{base}{counter}")
    };
    graph.instances.push((var.clone(), node.label.clone()));
    for (rel, child) in &node.children {
        match child.kind {
            TreeNodeKind::Constant(kind) if child.is_leaf() => {
                graph.edges.push(Edge::new(
                    var.clone(),
                    rel.clone(),
                    NodeRef::constant(child.label.clone(), kind),
                ));
            }
            _ => {
                let child_var = restore_node(child, graph, counters);
                graph
                    .edges
                    .push(Edge::new(var.clone(), rel.clone(), NodeRef::var(child_var)));
            }
        }
    }
    var
}

// ---------------------------------------------------------------------------
// Co-reference restoration
// ---------------------------------------------------------------------------

/// A childless node whose concept already occurred is deleted and its
/// incoming edge retargeted to the first node with that concept. At most one
/// merge per concept; later duplicates stay.
pub fn restore_coreference(graph: &AmrGraph) -> (AmrGraph, Vec<StageLog>) {
    let mut out = graph.clone();
    let mut logs = Vec::new();
    let mut first_with_concept: HashMap<String, String> = HashMap::new();
    let mut merged_concepts: std::collections::HashSet<String> = Default::default();
    let mut removed: Vec<String> = Vec::new();
    for (var, concept) in &graph.instances {
        match first_with_concept.get(concept) {
            None => {
                first_with_concept.insert(concept.clone(), var.clone());
            }
            Some(first) => {
                let childless = !graph.edges.iter().any(|e| &e.source == var);
                if childless && var != &graph.top && !merged_concepts.contains(concept) {
                    let first = first.clone();
                    for e in out.edges.iter_mut() {
                        if e.target == NodeRef::var(var.clone()) {
                            e.target = NodeRef::var(first.clone());
                        }
                    }
                    removed.push(var.clone());
                    merged_concepts.insert(concept.clone());
                    logs.push(StageLog::new(
                        "coref",
                        "merged",
                        format!("{var} -> {first} ({concept})"),
                    ));
                }
            }
        }
    }
    out.instances.retain(|(v, _)| !removed.contains(v));
    (out, logs)
}

// ---------------------------------------------------------------------------
// Wikification
// ---------------------------------------------------------------------------

/// Looks up a canonical name string (ordered `:opN` values joined by spaces)
/// and returns a wiki title on a hit. Shared read-only across worker threads.
pub trait NameLinker: Send + Sync {
    fn lookup(&self, name: &str) -> Option<String>;
}

#[derive(Debug, thiserror::Error)]
#[error("gazetteer unavailable: {0}")]
pub struct GazetteerUnavailable(pub String);

/// Offline name -> wiki-title store, loaded from TSV (`name<TAB>title`).
/// Lookup is exact-match after case-folding and quote-stripping.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    map: HashMap<String, String>,
}

fn fold_name(name: &str) -> String {
    name.trim().replace('"', "").to_lowercase()
}

impl Gazetteer {
    pub fn new() -> Self {
        Gazetteer::default()
    }

    pub fn insert(&mut self, name: &str, title: impl Into<String>) {
        self.map.insert(fold_name(name), title.into());
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn from_tsv_reader<R: std::io::BufRead>(reader: R) -> Result<Self, GazetteerUnavailable> {
        let mut gaz = Gazetteer::new();
        for line in reader.lines() {
            let line = line.map_err(|e| GazetteerUnavailable(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            if let Some((name, title)) = line.split_once('\t') {
                gaz.insert(name, title.trim());
            }
        }
        Ok(gaz)
    }

    pub fn from_tsv_path(path: &std::path::Path) -> Result<Self, GazetteerUnavailable> {
        let file = std::fs::File::open(path)
            .map_err(|e| GazetteerUnavailable(format!("{}: {e}", path.display())))?;
        Self::from_tsv_reader(std::io::BufReader::new(file))
    }
}

impl NameLinker for Gazetteer {
    fn lookup(&self, name: &str) -> Option<String> {
        self.map.get(&fold_name(name)).cloned()
    }
}

/// Name string of a `:name` node: its `:opN` constant values in N order.
fn name_string(graph: &AmrGraph, name_var: &str) -> String {
    let mut ops: Vec<(u32, &str)> = graph
        .outgoing(name_var)
        .filter_map(|e| {
            let n: u32 = e.relation.strip_prefix(":op")?.parse().ok()?;
            match &e.target {
                NodeRef::Const { value, .. } => Some((n, value.as_str())),
                NodeRef::Var(_) => None,
            }
        })
        .collect();
    ops.sort_by_key(|(n, _)| *n);
    ops.iter().map(|(_, v)| *v).collect::<Vec<_>>().join(" ")
}

/// Adds `:wiki "Title"` to every node with a `:name` whose name string is in
/// the linker; nodes that already carry `:wiki` and lookup misses are left
/// alone.
pub fn wikify(graph: &AmrGraph, linker: &dyn NameLinker) -> (AmrGraph, Vec<StageLog>) {
    let mut out = graph.clone();
    let mut logs = Vec::new();
    let mut insertions: Vec<(usize, Edge)> = Vec::new();
    for (var, _) in &graph.instances {
        if graph.outgoing(var).any(|e| e.relation == ":wiki") {
            continue;
        }
        let Some((edge_pos, name_var)) =
            out.edges
                .iter()
                .enumerate()
                .find_map(|(i, e)| match (&e.relation, &e.target) {
                    (rel, NodeRef::Var(t)) if rel.as_str() == ":name" && &e.source == var => {
                        Some((i, t.clone()))
                    }
                    _ => None,
                })
        else {
            continue;
        };
        let name = name_string(graph, &name_var);
        if name.is_empty() {
            continue;
        }
        if let Some(title) = linker.lookup(&name) {
            insertions.push((
                edge_pos,
                Edge::new(
                    var.clone(),
                    ":wiki",
                    NodeRef::constant(title.clone(), ConstKind::Quoted),
                ),
            ));
            logs.push(StageLog::new(
                "wikify",
                "added",
                format!("{name} -> {title}"),
            ));
        }
    }
    // insert from the back so earlier positions stay valid
    insertions.sort_by_key(|(pos, _)| std::cmp::Reverse(*pos));
    for (pos, edge) in insertions {
        out.edges.insert(pos, edge);
    }
    (out, logs)
}

// ---------------------------------------------------------------------------
// HTTP entity-linking client (optional backend mirroring the off-the-shelf
// service usage; not built for wasm targets)
// ---------------------------------------------------------------------------

#[cfg(not(target_arch = "wasm32"))]
pub use http_linker::HttpLinker;

#[cfg(not(target_arch = "wasm32"))]
mod http_linker {
    use std::io::{Read, Write};
    use std::net::TcpStream;
    use std::time::Duration;

    use super::NameLinker;

    const TIMEOUT: Duration = Duration::from_secs(2);

    /// POSTs `{"query": name}` to a configurable `http://` endpoint and reads
    /// `{"title": ...}` back. Every failure — bad URL, connect, timeout,
    /// non-200, malformed JSON — is a miss.
    #[derive(Debug, Clone)]
    pub struct HttpLinker {
        host: String,
        port: u16,
        path: String,
    }

    impl HttpLinker {
        pub fn new(url: &str) -> Result<Self, String> {
            let rest = url
                .strip_prefix("http://")
                .ok_or_else(|| format!("only http:// endpoints are supported, got `{url}`"))?;
            let (authority, path) = match rest.find('/') {
                Some(i) => (&rest[..i], &rest[i..]),
                None => (rest, "/"),
            };
            let (host, port) = match authority.rsplit_once(':') {
                Some((h, p)) => (
                    h.to_string(),
                    p.parse::<u16>()
                        .map_err(|_| format!("bad port in `{url}`"))?,
                ),
                None => (authority.to_string(), 80),
            };
            if host.is_empty() {
                return Err(format!("missing host in `{url}`"));
            }
            Ok(HttpLinker {
                host,
                port,
                path: path.to_string(),
            })
        }

        fn request(&self, name: &str) -> Option<String> {
            let body = serde_json::json!({ "query": name }).to_string();
            let mut stream = TcpStream::connect((self.host.as_str(), self.port)).ok()?;
            stream.set_read_timeout(Some(TIMEOUT)).ok()?;
            stream.set_write_timeout(Some(TIMEOUT)).ok()?;
            let request = format!(
                "POST {} HTTP/1.1\r\nHost: {}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                self.path,
                self.host,
                body.len(),
                body
            );
            stream.write_all(request.as_bytes()).ok()?;
            let mut response = Vec::new();
            stream.read_to_end(&mut response).ok()?;
            let response = String::from_utf8_lossy(&response);
            let (head, body) = response.split_once("\r\n\r\n")?;
            let status = head.split_whitespace().nth(1)?;
            if status != "200" {
                return None;
            }
            let value: serde_json::Value = serde_json::from_str(body.trim()).ok()?;
            value.get("title")?.as_str().map(str::to_string)
        }
    }

    impl NameLinker for HttpLinker {
        fn lookup(&self, name: &str) -> Option<String> {
            self.request(name)
        }
    }
}

// ---------------------------------------------------------------------------
// The full per-line pipeline
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    /// `None` disables pruning; method 4 is the default.
    pub prune: Option<PruneMethod>,
    pub restore_coref: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            prune: Some(PruneMethod::Combined),
            restore_coref: true,
        }
    }
}

/// repair -> prune -> restore variables -> restore co-reference -> wikify.
/// Total: every byte string produces a valid graph plus a per-stage log.
pub fn pipeline(
    raw: &str,
    opts: &PipelineOptions,
    linker: Option<&dyn NameLinker>,
) -> (AmrGraph, Vec<StageLog>) {
    let (mut tree, mut logs) = repair(raw);
    if let Some(method) = opts.prune {
        let (pruned, actions) = prune(&tree, method);
        for a in &actions {
            logs.push(StageLog::new(
                "prune",
                "removed",
                format!("{} {}", a.relation, a.label),
            ));
        }
        tree = pruned;
    }
    let graph = restore_variables(&tree);
    let graph = if opts.restore_coref {
        let (merged, coref_logs) = restore_coreference(&graph);
        logs.extend(coref_logs);
        merged
    } else {
        graph
    };
    let graph = match linker {
        Some(linker) => {
            let (wikified, wiki_logs) = wikify(&graph, linker);
            logs.extend(wiki_logs);
            wikified
        }
        None => graph,
    };
    (graph, logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Layout;
    use crate::parse::parse_amr;
    use crate::preprocess::remove_variables;

    #[test]
    fn repair_balances_missing_parens() {
        let (tree, logs) = repair("(material :mod (raw");
        assert_eq!(tree.to_string(), "(material :mod (raw))");
        assert!(logs.iter().any(|l| l.action == "closed_paren"));
    }

    #[test]
    fn repair_deletes_unfinished_nodes() {
        let (tree, _) = repair("(a :mod )");
        assert_eq!(tree.to_string(), "(a)");
        let (tree, _) = repair("(a :mod :quant 1)");
        assert_eq!(tree.to_string(), "(a :quant 1)");
    }

    #[test]
    fn repair_keeps_valid_text_identical() {
        let text = "(material :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))";
        let (tree, logs) = repair(text);
        assert_eq!(tree.to_string(), text);
        assert!(logs.is_empty());
    }

    #[test]
    fn repair_drops_surplus_parens() {
        let (tree, logs) = repair("(a :mod (b))))");
        assert_eq!(tree.to_string(), "(a :mod (b))");
        assert_eq!(
            logs.iter().filter(|l| l.action == "dropped_paren").count(),
            2
        );
    }

    #[test]
    fn repair_closes_quotes() {
        let (tree, logs) = repair(r#"(c :wiki "France :name (n :op1 "France"))"#);
        assert!(logs.iter().any(|l| l.action == "closed_quote"));
        // the broken quote swallows `:name (n :op1 ` up to the paren; the
        // tree still parses
        assert!(tree.to_string().starts_with("(c :wiki"));
    }

    #[test]
    fn repair_empty_line_falls_back() {
        let (tree, logs) = repair("");
        assert_eq!(tree.to_string(), "(amr-empty)");
        assert!(logs.iter().any(|l| l.action == "empty_fallback"));
        let (tree, _) = repair("   )))   ");
        assert_eq!(tree.to_string(), "(amr-empty)");
    }

    #[test]
    fn repair_quoted_constants_kept() {
        let (tree, _) = repair(r#"(c :wiki "France")"#);
        assert_eq!(tree.to_string(), r#"(c :wiki "France")"#);
    }

    fn dup_same_parent() -> VariableFreeTree {
        repair("(material :mod (raw) :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))").0
    }

    fn dup_distinct_parents() -> VariableFreeTree {
        repair("(material :mod (raw) :domain (opium :mod (raw)) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :mod (raw) :ARG2 (opium))))").0
    }

    #[test]
    fn prune_same_parent_dup_method4() {
        let (pruned, actions) = prune(&dup_same_parent(), PruneMethod::Combined);
        assert_eq!(
            pruned.to_string(),
            "(material :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))"
        );
        assert_eq!(actions.len(), 1);
        assert_eq!(actions[0].child_index, 1);
    }

    #[test]
    fn prune_distinct_parents_method4_removes_only_third() {
        let (pruned, actions) = prune(&dup_distinct_parents(), PruneMethod::Combined);
        assert_eq!(
            pruned.to_string(),
            "(material :mod (raw) :domain (opium :mod (raw)) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))"
        );
        assert_eq!(actions.len(), 1);
    }

    #[test]
    fn prune_distinct_parents_method1_removes_second_and_third() {
        let (pruned, actions) = prune(&dup_distinct_parents(), PruneMethod::Reoccurring);
        assert_eq!(
            pruned.to_string(),
            "(material :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))"
        );
        assert_eq!(actions.len(), 2);
    }

    #[test]
    fn prune_methods_2_and_3() {
        // left: both :mod (raw) under material -> method 2 removes the second
        let (pruned, _) = prune(&dup_same_parent(), PruneMethod::SameParent);
        assert_eq!(
            pruned.to_string(),
            "(material :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))"
        );
        // left: only two occurrences -> method 3 does nothing
        let (pruned, actions) = prune(&dup_same_parent(), PruneMethod::Frequent);
        assert_eq!(pruned, dup_same_parent());
        assert!(actions.is_empty());
        // right: distinct parents -> method 2 does nothing
        let (pruned, _) = prune(&dup_distinct_parents(), PruneMethod::SameParent);
        assert_eq!(pruned, dup_distinct_parents());
        // right: method 3 removes exactly the third
        let (pruned, _) = prune(&dup_distinct_parents(), PruneMethod::Frequent);
        assert_eq!(
            pruned.to_string(),
            "(material :mod (raw) :domain (opium :mod (raw)) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))"
        );
    }

    #[test]
    fn restore_variables_first_letter_scheme() {
        let (tree, _) = remove_variables(&parse_amr("(h2 / heat)").unwrap());
        let g = restore_variables(&tree);
        assert_eq!(g.instances, vec![("h".to_string(), "heat".to_string())]);

        let (tree, _) = repair("(x :a (heat) :b (hunger-01))");
        let g = restore_variables(&tree);
        assert_eq!(g.instances[1], ("h".to_string(), "heat".to_string()));
        assert_eq!(g.instances[2], ("h2".to_string(), "hunger-01".to_string()));
    }

    #[test]
    fn restore_variables_keeps_constants() {
        let (tree, _) = repair("(t :quant 1 :polarity -)");
        let g = restore_variables(&tree);
        assert_eq!(g.num_vars(), 1);
        assert_eq!(g.edges.len(), 2);
        assert!(matches!(g.edges[0].target, NodeRef::Const { .. }));
        g.validate().unwrap();
    }

    #[test]
    fn restore_variables_no_alphabetic_falls_back_to_x() {
        let (tree, _) = repair("(42 :mod (99))");
        let g = restore_variables(&tree);
        assert_eq!(g.instances[0].0, "x");
        assert_eq!(g.instances[1].0, "x2");
    }

    const OPIUM_WITH_COPIES: &str = r#"(m / material
       :mod (r / raw)
       :domain (o / opium)
       :mod (r2 / raw)
       :ARG1-of (u / use-01
              :ARG2 (m2 / make-01
                     :ARG1 (h / heroin)
                     :ARG2 (o2 / opium))))"#;

    const OPIUM_COREFERENT: &str = r#"(m / material
       :mod (r / raw)
       :domain (o / opium)
       :mod r
       :ARG1-of (u / use-01
              :ARG2 (m2 / make-01
                     :ARG1 (h / heroin)
                     :ARG2 o)))"#;

    #[test]
    fn copy_variables_and_coreference() {
        // strip the duplicated form's variables, then restore: the first-letter
        // scheme reproduces the original names (m, r, o, r2, u, m2, h, o2)
        let (tree, _) = remove_variables(&parse_amr(OPIUM_WITH_COPIES).unwrap());
        let restored = restore_variables(&tree);
        let expected_vars: Vec<&str> = vec!["m", "r", "o", "r2", "u", "m2", "h", "o2"];
        let got: Vec<&str> = restored.instances.iter().map(|(v, _)| v.as_str()).collect();
        assert_eq!(got, expected_vars);

        let (merged, logs) = restore_coreference(&restored);
        let expected = parse_amr(OPIUM_COREFERENT).unwrap();
        assert_eq!(
            merged.serialize(Layout::SingleLine),
            expected.serialize(Layout::SingleLine)
        );
        assert_eq!(logs.len(), 2);
    }

    #[test]
    fn coref_all_distinct_unchanged() {
        let g = parse_amr("(a / alpha :x (b / beta) :y (c / gamma))").unwrap();
        let (merged, logs) = restore_coreference(&g);
        assert_eq!(merged, g);
        assert!(logs.is_empty());
    }

    #[test]
    fn coref_merges_once_per_concept() {
        let (tree, _) = repair("(and :op1 (dog) :op2 (dog) :op3 (dog))");
        let g = restore_variables(&tree);
        let (merged, logs) = restore_coreference(&g);
        assert_eq!(logs.len(), 1);
        // d2 merged into d, d3 kept as its own node
        assert_eq!(merged.num_vars(), 3);
        assert!(merged.has_var("d3"));
        assert_eq!(
            merged.serialize(Layout::SingleLine),
            "(a / and :op1 (d / dog) :op2 d :op3 (d3 / dog))"
        );
    }

    #[test]
    fn coref_never_merges_nodes_with_children() {
        let (tree, _) = repair("(a :x (dog :mod (big)) :y (dog :mod (small)))");
        let g = restore_variables(&tree);
        let (merged, logs) = restore_coreference(&g);
        assert_eq!(merged, g);
        assert!(logs.is_empty());
    }

    #[test]
    fn wikify_adds_link_before_name() {
        let g = parse_amr(r#"(c / country :name (n / name :op1 "France"))"#).unwrap();
        let mut gaz = Gazetteer::new();
        gaz.insert("france", "France");
        let (wikified, logs) = wikify(&g, &gaz);
        assert_eq!(
            wikified.serialize(Layout::SingleLine),
            r#"(c / country :wiki "France" :name (n / name :op1 "France"))"#
        );
        assert_eq!(logs.len(), 1);
    }

    #[test]
    fn wikify_multiword_names() {
        let g = parse_amr(r#"(c / city :name (n / name :op1 "New" :op2 "York"))"#).unwrap();
        let mut gaz = Gazetteer::new();
        gaz.insert("New York", "New_York_City");
        let (wikified, _) = wikify(&g, &gaz);
        assert!(wikified
            .edges
            .iter()
            .any(|e| e.relation == ":wiki" && e.target.surface() == "\"New_York_City\""));
    }

    #[test]
    fn wikify_misses_and_existing_links_leave_graph_alone() {
        let gaz = Gazetteer::new();
        let g = parse_amr(r#"(c / country :name (n / name :op1 "Atlantis"))"#).unwrap();
        let (out, logs) = wikify(&g, &gaz);
        assert_eq!(out, g);
        assert!(logs.is_empty());
        // no :name at all
        let g2 = parse_amr("(a / alpha)").unwrap();
        assert_eq!(wikify(&g2, &gaz).0, g2);
        // already wikified
        let mut gaz2 = Gazetteer::new();
        gaz2.insert("france", "Wrong_Page");
        let g3 =
            parse_amr(r#"(c / country :wiki "France" :name (n / name :op1 "France"))"#).unwrap();
        assert_eq!(wikify(&g3, &gaz2).0, g3);
    }

    #[test]
    fn http_linker_round_trip_and_misses() {
        use std::io::{Read as _, Write as _};
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let handle = std::thread::spawn(move || {
            for (i, stream) in listener.incoming().enumerate() {
                let mut stream = stream.unwrap();
                let mut buf = [0u8; 4096];
                let n = stream.read(&mut buf).unwrap();
                let request = String::from_utf8_lossy(&buf[..n]).into_owned();
                let response = if i == 0 {
                    assert!(request.starts_with("POST /link HTTP/1.1"));
                    assert!(request.contains(r#"{"query":"france"}"#));
                    "HTTP/1.1 200 OK\r\nContent-Length: 19\r\n\r\n{\"title\":\"France\"}"
                        .to_string()
                } else {
                    "HTTP/1.1 404 Not Found\r\nContent-Length: 0\r\n\r\n".to_string()
                };
                stream.write_all(response.as_bytes()).unwrap();
                if i == 1 {
                    break;
                }
            }
        });
        let linker = HttpLinker::new(&format!("http://{addr}/link")).unwrap();
        assert_eq!(linker.lookup("france"), Some("France".to_string()));
        assert_eq!(linker.lookup("atlantis"), None);
        handle.join().unwrap();
        // connection refused is a miss, not an error
        let dead = HttpLinker::new("http://127.0.0.1:1/q").unwrap();
        assert_eq!(dead.lookup("anything"), None);
        assert!(HttpLinker::new("https://example.com").is_err());
    }

    #[test]
    fn pipeline_is_total_and_valid() {
        for raw in ["", "(((", ":mod :mod", "(a :mod )", "junk ( \" ::"] {
            let (graph, _) = pipeline(raw, &PipelineOptions::default(), None);
            graph.validate().unwrap();
        }
        let (graph, _) = pipeline("", &PipelineOptions::default(), None);
        assert_eq!(graph.serialize(Layout::SingleLine), "(a / amr-empty)");
    }

    #[test]
    fn pipeline_composes_stages() {
        let raw = "(material :mod (raw) :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))";
        let (graph, logs) = pipeline(raw, &PipelineOptions::default(), None);
        // the duplicate :mod (raw) is pruned, the opium copy is merged back
        let expected = parse_amr(
            "(m / material :mod (r / raw) :domain (o / opium) :ARG1-of (u / use-01 :ARG2 (m2 / make-01 :ARG1 (h / heroin) :ARG2 o)))",
        )
        .unwrap();
        assert_eq!(
            graph.serialize(Layout::SingleLine),
            expected.serialize(Layout::SingleLine)
        );
        assert!(logs.iter().any(|l| l.stage == "prune"));
        assert!(logs.iter().any(|l| l.stage == "coref"));
    }
}
