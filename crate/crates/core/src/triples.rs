//! Conversion of AMR graphs to instance / attribute / relation triples, the
//! substrate SMATCH scores over.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::graph::{AmrGraph, NodeRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TripleKind {
    Instance,
    Attribute,
    Relation,
}

/// One evaluation triple. `arg1` is always a variable; `arg2` is a variable
/// for relation triples and a concept or constant otherwise. Labels carry no
/// leading `:`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triple {
    pub kind: TripleKind,
    pub label: String,
    pub arg1: String,
    pub arg2: String,
}

impl Triple {
    pub fn new(
        kind: TripleKind,
        label: impl Into<String>,
        arg1: impl Into<String>,
        arg2: impl Into<String>,
    ) -> Self {
        Triple {
            kind,
            label: label.into(),
            arg1: arg1.into(),
            arg2: arg2.into(),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.label, self.arg1, self.arg2)
    }
}

/// An ordered multiset of triples.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct TripleSet {
    pub triples: Vec<Triple>,
}

impl TripleSet {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn count(&self, kind: TripleKind) -> usize {
        self.triples.iter().filter(|t| t.kind == kind).count()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Triple> {
        self.triples.iter()
    }

    /// Multiset equality, ignoring order.
    pub fn same_multiset(&self, other: &TripleSet) -> bool {
        let mut counts: HashMap<&Triple, i64> = HashMap::new();
        for t in &self.triples {
            *counts.entry(t).or_default() += 1;
        }
        for t in &other.triples {
            *counts.entry(t).or_default() -= 1;
        }
        counts.values().all(|&n| n == 0)
    }
}

fn push_edge_triples(g: &AmrGraph, invert_of: bool, out: &mut Vec<Triple>) {
    for e in &g.edges {
        let label = e.relation.trim_start_matches(':');
        match &e.target {
            NodeRef::Var(t) => {
                let triple = match label.strip_suffix("-of") {
                    Some(base) if invert_of && !base.is_empty() => {
                        Triple::new(TripleKind::Relation, base, t.clone(), e.source.clone())
                    }
                    _ => Triple::new(TripleKind::Relation, label, e.source.clone(), t.clone()),
                };
                out.push(triple);
            }
            NodeRef::Const { value, .. } => {
                // quotes are already stripped in the stored constant
                out.push(Triple::new(
                    TripleKind::Attribute,
                    label,
                    e.source.clone(),
                    value.clone(),
                ));
            }
        }
    }
}

fn triples_with(g: &AmrGraph, invert_of: bool) -> TripleSet {
    let mut triples = Vec::with_capacity(g.instances.len() + g.edges.len() + 1);
    for (var, concept) in &g.instances {
        triples.push(Triple::new(
            TripleKind::Instance,
            "instance",
            var.clone(),
            concept.clone(),
        ));
    }
    let top_concept = g.concept_of(&g.top).unwrap_or("amr-unknown").to_string();
    triples.push(Triple::new(
        TripleKind::Attribute,
        "TOP",
        g.top.clone(),
        top_concept,
    ));
    push_edge_triples(g, invert_of, &mut triples);
    TripleSet { triples }
}

/// Triples in reporting form: inverse relations (`:rel-of`) are rendered in
/// their direct orientation, e.g. `x :ARG0-of y` becomes `(ARG0, y, x)`.
pub fn to_triples(g: &AmrGraph) -> TripleSet {
    triples_with(g, true)
}

/// Triples with relation labels exactly as written, `-of` suffixes included.
/// This is the default SMATCH substrate.
pub fn to_triples_literal(g: &AmrGraph) -> TripleSet {
    triples_with(g, false)
}
