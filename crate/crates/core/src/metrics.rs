//! Fine-grained evaluation: deterministic triple-set transformations in the
//! style of the AMR-eager breakdown (unlabeled, no-WSD, concepts, named
//! entities, wikification, negations, reentrancy, SRL).

use std::collections::{HashMap, HashSet};
use std::str::FromStr;

use crate::graph::AmrGraph;
use crate::smatch::{score_triple_sets, substrate, ScoreOptions, ScoreReport};
use crate::triples::{Triple, TripleKind, TripleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Smatch,
    Unlabeled,
    NoWsd,
    Concepts,
    NamedEntities,
    Wikification,
    Negations,
    Reentrancy,
    Srl,
}

impl MetricKind {
    pub const ALL: [MetricKind; 9] = [
        MetricKind::Smatch,
        MetricKind::Unlabeled,
        MetricKind::NoWsd,
        MetricKind::Concepts,
        MetricKind::NamedEntities,
        MetricKind::Wikification,
        MetricKind::Negations,
        MetricKind::Reentrancy,
        MetricKind::Srl,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Smatch => "smatch",
            MetricKind::Unlabeled => "unlabeled",
            MetricKind::NoWsd => "no-wsd",
            MetricKind::Concepts => "concepts",
            MetricKind::NamedEntities => "named-entities",
            MetricKind::Wikification => "wikification",
            MetricKind::Negations => "negations",
            MetricKind::Reentrancy => "reentrancy",
            MetricKind::Srl => "srl",
        }
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "smatch" => Ok(MetricKind::Smatch),
            "unlabeled" => Ok(MetricKind::Unlabeled),
            "nowsd" | "no-wsd" | "no_wsd" => Ok(MetricKind::NoWsd),
            "concepts" => Ok(MetricKind::Concepts),
            "namedentities" | "named-entities" | "named_entities" | "ner" => {
                Ok(MetricKind::NamedEntities)
            }
            "wikification" | "wiki" => Ok(MetricKind::Wikification),
            "negations" | "negation" => Ok(MetricKind::Negations),
            "reentrancy" | "reentrancies" => Ok(MetricKind::Reentrancy),
            "srl" => Ok(MetricKind::Srl),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

/// Strips a trailing word-sense suffix (`-01`, `-912`, ...: a dash followed
/// by two or more digits) from a concept label.
fn strip_sense(concept: &str) -> &str {
    if let Some(idx) = concept.rfind('-') {
        let digits = &concept[idx + 1..];
        if digits.len() >= 2 && digits.chars().all(|c| c.is_ascii_digit()) {
            return &concept[..idx];
        }
    }
    concept
}

fn is_op_label(label: &str) -> bool {
    label
        .strip_prefix("op")
        .is_some_and(|n| !n.is_empty() && n.chars().all(|c| c.is_ascii_digit()))
}

fn is_srl_label(label: &str) -> bool {
    let base = label.strip_suffix("-of").unwrap_or(label);
    base.strip_prefix("ARG")
        .is_some_and(|n| !n.is_empty() && n.chars().all(|c| c.is_ascii_digit()))
}

/// Bag-F over two multisets of items: matched is the multiset intersection.
fn bag_f(pred: &[String], gold: &[String]) -> ScoreReport {
    let mut counts: HashMap<&str, i64> = HashMap::new();
    for item in gold {
        *counts.entry(item).or_default() += 1;
    }
    let mut matched = 0;
    for item in pred {
        let n = counts.entry(item).or_default();
        if *n > 0 {
            *n -= 1;
            matched += 1;
        }
    }
    ScoreReport::from_counts(matched, pred.len(), gold.len())
}

fn relabel_unlabeled(ts: &TripleSet) -> TripleSet {
    let triples = ts
        .iter()
        .map(|t| {
            if t.kind == TripleKind::Instance || t.label == "TOP" {
                t.clone()
            } else {
                Triple::new(t.kind, "rel", t.arg1.clone(), t.arg2.clone())
            }
        })
        .collect();
    TripleSet { triples }
}

fn strip_wsd(ts: &TripleSet) -> TripleSet {
    let triples = ts
        .iter()
        .map(|t| {
            // concept-valued positions: instance triples and the TOP triple
            if t.kind == TripleKind::Instance || t.label == "TOP" {
                Triple::new(
                    t.kind,
                    t.label.clone(),
                    t.arg1.clone(),
                    strip_sense(&t.arg2),
                )
            } else {
                t.clone()
            }
        })
        .collect();
    TripleSet { triples }
}

fn concept_bag(ts: &TripleSet) -> Vec<String> {
    ts.iter()
        .filter(|t| t.kind == TripleKind::Instance)
        .map(|t| t.arg2.clone())
        .collect()
}

fn wiki_bag(ts: &TripleSet) -> Vec<String> {
    ts.iter()
        .filter(|t| t.kind == TripleKind::Attribute && t.label == "wiki")
        .map(|t| t.arg2.clone())
        .collect()
}

/// Negation items: the concept of each node carrying `:polarity -`.
fn negation_bag(ts: &TripleSet) -> Vec<String> {
    let concepts: HashMap<&str, &str> = ts
        .iter()
        .filter(|t| t.kind == TripleKind::Instance)
        .map(|t| (t.arg1.as_str(), t.arg2.as_str()))
        .collect();
    ts.iter()
        .filter(|t| t.kind == TripleKind::Attribute && t.label == "polarity" && t.arg2 == "-")
        .map(|t| {
            concepts
                .get(t.arg1.as_str())
                .copied()
                .unwrap_or("")
                .to_string()
        })
        .collect()
}

/// Instance triples of nodes with an outgoing `name` edge, plus the `opN`
/// attribute triples of the name nodes they point to.
fn named_entity_slice(ts: &TripleSet) -> TripleSet {
    let mut named_sources = HashSet::new();
    let mut name_nodes = HashSet::new();
    for t in ts.iter() {
        if t.kind == TripleKind::Relation && t.label.trim_end_matches("-of") == "name" {
            if t.label == "name" {
                named_sources.insert(t.arg1.as_str());
                name_nodes.insert(t.arg2.as_str());
            } else {
                // name-of points the other way
                named_sources.insert(t.arg2.as_str());
                name_nodes.insert(t.arg1.as_str());
            }
        }
    }
    let triples = ts
        .iter()
        .filter(|t| {
            (t.kind == TripleKind::Instance && named_sources.contains(t.arg1.as_str()))
                || (t.kind == TripleKind::Attribute
                    && is_op_label(&t.label)
                    && name_nodes.contains(t.arg1.as_str()))
        })
        .cloned()
        .collect();
    TripleSet { triples }
}

/// Relation triples whose target has in-degree >= 2, plus the instance
/// triples of every variable incident to one of them.
fn reentrancy_slice(ts: &TripleSet) -> TripleSet {
    let mut indeg: HashMap<&str, usize> = HashMap::new();
    for t in ts.iter() {
        if t.kind == TripleKind::Relation {
            *indeg.entry(t.arg2.as_str()).or_default() += 1;
        }
    }
    let kept: Vec<&Triple> = ts
        .iter()
        .filter(|t| t.kind == TripleKind::Relation && indeg[t.arg2.as_str()] >= 2)
        .collect();
    let mut incident = HashSet::new();
    for t in &kept {
        incident.insert(t.arg1.as_str());
        incident.insert(t.arg2.as_str());
    }
    let triples = ts
        .iter()
        .filter(|t| {
            (t.kind == TripleKind::Relation && indeg[t.arg2.as_str()] >= 2)
                || (t.kind == TripleKind::Instance && incident.contains(t.arg1.as_str()))
        })
        .cloned()
        .collect();
    TripleSet { triples }
}

fn srl_slice(ts: &TripleSet) -> TripleSet {
    let mut incident = HashSet::new();
    for t in ts.iter() {
        if t.kind == TripleKind::Relation && is_srl_label(&t.label) {
            incident.insert(t.arg1.as_str());
            incident.insert(t.arg2.as_str());
        }
    }
    let triples = ts
        .iter()
        .filter(|t| {
            (t.kind == TripleKind::Relation && is_srl_label(&t.label))
                || (t.kind == TripleKind::Instance && incident.contains(t.arg1.as_str()))
        })
        .cloned()
        .collect();
    TripleSet { triples }
}

/// Scores one metric between two graphs: mapping search where variables are
/// still in play, bag-F for the variable-free slices.
pub fn fine_grained(
    pred: &AmrGraph,
    gold: &AmrGraph,
    metric: MetricKind,
    opts: &ScoreOptions,
) -> ScoreReport {
    let pred_ts = substrate(pred, opts.invert_of);
    let gold_ts = substrate(gold, opts.invert_of);
    match metric {
        MetricKind::Smatch => score_triple_sets(&pred_ts, &gold_ts, opts).0,
        MetricKind::Unlabeled => {
            score_triple_sets(
                &relabel_unlabeled(&pred_ts),
                &relabel_unlabeled(&gold_ts),
                opts,
            )
            .0
        }
        MetricKind::NoWsd => score_triple_sets(&strip_wsd(&pred_ts), &strip_wsd(&gold_ts), opts).0,
        MetricKind::Concepts => bag_f(&concept_bag(&pred_ts), &concept_bag(&gold_ts)),
        MetricKind::NamedEntities => {
            score_triple_sets(
                &named_entity_slice(&pred_ts),
                &named_entity_slice(&gold_ts),
                opts,
            )
            .0
        }
        MetricKind::Wikification => bag_f(&wiki_bag(&pred_ts), &wiki_bag(&gold_ts)),
        MetricKind::Negations => bag_f(&negation_bag(&pred_ts), &negation_bag(&gold_ts)),
        MetricKind::Reentrancy => {
            score_triple_sets(
                &reentrancy_slice(&pred_ts),
                &reentrancy_slice(&gold_ts),
                opts,
            )
            .0
        }
        MetricKind::Srl => score_triple_sets(&srl_slice(&pred_ts), &srl_slice(&gold_ts), opts).0,
    }
}
