//! Exhaustive SMATCH optimum for small graphs, used to certify the
//! hill-climber. Kept deliberately independent of the scorer: its own
//! variable collection, its own mapping application, its own counting.

use std::collections::HashMap;

use crate::graph::AmrGraph;
use crate::smatch::ScoreReport;
use crate::triples::{to_triples_literal, TripleKind, TripleSet};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("too large for exhaustive search: {pred} x {gold} variables (limit {limit})")]
    TooLarge {
        pred: usize,
        gold: usize,
        limit: usize,
    },
}

const VAR_LIMIT: usize = 8;

fn vars_in_order(ts: &TripleSet) -> Vec<String> {
    let mut vars: Vec<String> = Vec::new();
    for t in ts.iter() {
        if !vars.iter().any(|v| v == &t.arg1) {
            vars.push(t.arg1.clone());
        }
        if t.kind == TripleKind::Relation && !vars.iter().any(|v| v == &t.arg2) {
            vars.push(t.arg2.clone());
        }
    }
    vars
}

fn matches_under(pred: &TripleSet, gold: &TripleSet, map: &HashMap<&str, &str>) -> usize {
    // multiset of gold triples as stringly keys
    let mut remaining: HashMap<(TripleKind, &str, &str, &str), i64> = HashMap::new();
    for t in gold.iter() {
        *remaining
            .entry((t.kind, &t.label, &t.arg1, &t.arg2))
            .or_default() += 1;
    }
    let mut matched = 0;
    for t in pred.iter() {
        let Some(&a) = map.get(t.arg1.as_str()) else {
            continue;
        };
        let b: &str = if t.kind == TripleKind::Relation {
            match map.get(t.arg2.as_str()) {
                Some(&b) => b,
                None => continue,
            }
        } else {
            &t.arg2
        };
        if let Some(n) = remaining.get_mut(&(t.kind, t.label.as_str(), a, b)) {
            if *n > 0 {
                *n -= 1;
                matched += 1;
            }
        }
    }
    matched
}

/// Exact SMATCH optimum by enumerating every injection of the smaller
/// variable set into the larger one. Partial mappings are dominated by total
/// ones — a triple matches only through the images of its own variables, so
/// extending a mapping never removes a match — which makes this enumeration
/// exhaustive over all injective partial mappings as well.
pub fn smatch_oracle(pred: &AmrGraph, gold: &AmrGraph) -> Result<ScoreReport, OracleError> {
    let pred_ts = to_triples_literal(pred);
    let gold_ts = to_triples_literal(gold);
    oracle_triple_sets(&pred_ts, &gold_ts)
}

pub fn oracle_triple_sets(
    pred_ts: &TripleSet,
    gold_ts: &TripleSet,
) -> Result<ScoreReport, OracleError> {
    let pred_vars = vars_in_order(pred_ts);
    let gold_vars = vars_in_order(gold_ts);
    if pred_vars.len().min(gold_vars.len()) > VAR_LIMIT {
        return Err(OracleError::TooLarge {
            pred: pred_vars.len(),
            gold: gold_vars.len(),
            limit: VAR_LIMIT,
        });
    }

    // enumerate injections of the smaller side into the larger
    let pred_smaller = pred_vars.len() <= gold_vars.len();
    let (small, large) = if pred_smaller {
        (&pred_vars, &gold_vars)
    } else {
        (&gold_vars, &pred_vars)
    };

    let mut best = 0usize;
    let mut assignment: Vec<usize> = Vec::with_capacity(small.len());
    let mut taken = vec![false; large.len()];
    enumerate(
        small.len(),
        large.len(),
        &mut assignment,
        &mut taken,
        &mut |assignment| {
            let mut map: HashMap<&str, &str> = HashMap::new();
            for (i, &j) in assignment.iter().enumerate() {
                if pred_smaller {
                    map.insert(small[i].as_str(), large[j].as_str());
                } else {
                    map.insert(large[j].as_str(), small[i].as_str());
                }
            }
            let m = matches_under(pred_ts, gold_ts, &map);
            if m > best {
                best = m;
            }
        },
    );

    Ok(ScoreReport::from_counts(best, pred_ts.len(), gold_ts.len()))
}

fn enumerate(
    depth: usize,
    n: usize,
    assignment: &mut Vec<usize>,
    taken: &mut [bool],
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == 0 {
        visit(assignment);
        return;
    }
    for j in 0..n {
        if taken[j] {
            continue;
        }
        taken[j] = true;
        assignment.push(j);
        enumerate(depth - 1, n, assignment, taken, visit);
        assignment.pop();
        taken[j] = false;
    }
}
