//! Variable-labeled AMR graphs: the in-memory form of one PENMAN-notation AMR.
//!
//! An [`AmrGraph`] is a rooted, directed graph. Nodes are variables bound to a
//! concept label; edges carry relation labels (`:ARG0`, `:mod`, ...) and point
//! either at another variable or at a constant. Graphs are immutable after
//! construction and cheap to clone.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

/// Constants that can appear as relation values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConstKind {
    /// A `"quoted"` literal; the stored value has no surrounding quotes.
    Quoted,
    /// A bare numeric literal such as `1`, `-4`, `3.14`.
    Number,
    /// Bare symbols: `-`, `+`, `imperative`, `expressive`, and anything else
    /// that is not a node and not a known variable.
    Symbol,
}

/// Target of an edge: a variable reference or a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum NodeRef {
    Var(String),
    Const { value: String, kind: ConstKind },
}

impl NodeRef {
    pub fn var(name: impl Into<String>) -> Self {
        NodeRef::Var(name.into())
    }

    pub fn constant(value: impl Into<String>, kind: ConstKind) -> Self {
        NodeRef::Const {
            value: value.into(),
            kind,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            NodeRef::Var(v) => Some(v),
            NodeRef::Const { .. } => None,
        }
    }

    /// Surface form as it appears in AMR text (quotes re-added).
    pub fn surface(&self) -> String {
        match self {
            NodeRef::Var(v) => v.clone(),
            NodeRef::Const { value, kind } => match kind {
                ConstKind::Quoted => format!("\"{value}\""),
                _ => value.clone(),
            },
        }
    }
}

/// One labeled edge. `relation` keeps its leading `:`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub source: String,
    pub relation: String,
    pub target: NodeRef,
}

impl Edge {
    pub fn new(source: impl Into<String>, relation: impl Into<String>, target: NodeRef) -> Self {
        Edge {
            source: source.into(),
            relation: relation.into(),
            target,
        }
    }
}

/// Layout for [`AmrGraph::serialize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Everything on one line, single spaces.
    SingleLine,
    /// One relation per line, children indented under their parent.
    Indented,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GraphError {
    #[error("top variable `{0}` has no instance")]
    TopUndefined(String),
    #[error("variable `{0}` is used but has no instance")]
    DanglingVariable(String),
    #[error("variable `{0}` has more than one instance")]
    DuplicateInstance(String),
    #[error("relation `{0}` does not start with `:`")]
    BadRelationLabel(String),
    #[error("variable `{0}` is not reachable from the top node")]
    Unreachable(String),
}

/// A complete AMR: top variable, instance list, ordered edges and the
/// `# ::key value` metadata that preceded it in the corpus.
///
/// Instance and edge order reflect the surface text and drive serialization;
/// triple extraction treats both as multisets.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AmrGraph {
    pub top: String,
    /// `(variable, concept)` in order of first definition.
    pub instances: Vec<(String, String)>,
    pub edges: Vec<Edge>,
    /// Metadata pairs in input order, keys without the `::` prefix.
    pub metadata: Vec<(String, String)>,
}

impl AmrGraph {
    pub fn new(top: impl Into<String>) -> Self {
        AmrGraph {
            top: top.into(),
            ..Default::default()
        }
    }

    pub fn concept_of(&self, var: &str) -> Option<&str> {
        self.instances
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, c)| c.as_str())
    }

    pub fn has_var(&self, var: &str) -> bool {
        self.instances.iter().any(|(v, _)| v == var)
    }

    pub fn num_vars(&self) -> usize {
        self.instances.len()
    }

    /// Outgoing edges of `var` in surface order.
    pub fn outgoing<'a>(&'a self, var: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.source == var)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        let key = key.into();
        let value = value.into();
        if let Some(slot) = self.metadata.iter_mut().find(|(k, _)| *k == key) {
            slot.1 = value;
        } else {
            self.metadata.push((key, value));
        }
    }

    /// Checks every structural invariant. Cheap enough to run in tests and
    /// on every fuzzed pipeline output.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut seen = HashSet::new();
        for (v, _) in &self.instances {
            if !seen.insert(v.as_str()) {
                return Err(GraphError::DuplicateInstance(v.clone()));
            }
        }
        if !seen.contains(self.top.as_str()) {
            return Err(GraphError::TopUndefined(self.top.clone()));
        }
        for e in &self.edges {
            if !e.relation.starts_with(':') {
                return Err(GraphError::BadRelationLabel(e.relation.clone()));
            }
            if !seen.contains(e.source.as_str()) {
                return Err(GraphError::DanglingVariable(e.source.clone()));
            }
            if let NodeRef::Var(t) = &e.target {
                if !seen.contains(t.as_str()) {
                    return Err(GraphError::DanglingVariable(t.clone()));
                }
            }
        }
        // Every instance must be reachable from the top, otherwise it would
        // be silently dropped by serialization.
        let mut reached = HashSet::new();
        let mut stack = vec![self.top.as_str()];
        while let Some(v) = stack.pop() {
            if !reached.insert(v) {
                continue;
            }
            for e in self.outgoing(v) {
                if let NodeRef::Var(t) = &e.target {
                    stack.push(t.as_str());
                }
            }
        }
        for (v, _) in &self.instances {
            if !reached.contains(v.as_str()) {
                return Err(GraphError::Unreachable(v.clone()));
            }
        }
        Ok(())
    }

    /// Renders the graph back to AMR text (no metadata lines).
    ///
    /// Each variable is defined at its first visit in depth-first edge order,
    /// so `parse_amr(serialize(g))` reconstructs an identical graph.
    pub fn serialize(&self, layout: Layout) -> String {
        let mut adjacency: HashMap<&str, Vec<&Edge>> = HashMap::new();
        for e in &self.edges {
            adjacency.entry(e.source.as_str()).or_default().push(e);
        }
        let mut out = String::new();
        let mut defined = HashSet::new();
        self.write_node(&self.top, &adjacency, &mut defined, 0, layout, &mut out);
        out
    }

    fn write_node(
        &self,
        var: &str,
        adjacency: &HashMap<&str, Vec<&Edge>>,
        defined: &mut HashSet<String>,
        col: usize,
        layout: Layout,
        out: &mut String,
    ) {
        let concept = self.concept_of(var).unwrap_or("amr-unknown");
        out.push('(');
        out.push_str(var);
        out.push_str(" / ");
        out.push_str(concept);
        defined.insert(var.to_string());
        // Children indent under the column where this node's paren opened.
        let child_col = col + 3;
        if let Some(edges) = adjacency.get(var) {
            for e in edges {
                match layout {
                    Layout::SingleLine => out.push(' '),
                    Layout::Indented => {
                        out.push('\n');
                        for _ in 0..child_col {
                            out.push(' ');
                        }
                    }
                }
                out.push_str(&e.relation);
                out.push(' ');
                match &e.target {
                    NodeRef::Var(t) if !defined.contains(t) => {
                        let tcol = child_col + e.relation.chars().count() + 1;
                        self.write_node(t, adjacency, defined, tcol, layout, out);
                    }
                    other => out.push_str(&other.surface()),
                }
            }
        }
        out.push(')');
    }

    /// Serialized metadata lines followed by the AMR, ready for a corpus file.
    pub fn to_corpus_block(&self, layout: Layout) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            if v.is_empty() {
                out.push_str(&format!("# ::{k}\n"));
            } else {
                out.push_str(&format!("# ::{k} {v}\n"));
            }
        }
        out.push_str(&self.serialize(layout));
        out.push('\n');
        out
    }
}

impl fmt::Display for AmrGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize(Layout::SingleLine))
    }
}
