//! SMATCH: precision/recall/F over matching triples under the best injective
//! variable mapping, found by seeded hill-climbing with restarts.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use serde::Serialize;

use crate::graph::AmrGraph;
use crate::triples::{to_triples, to_triples_literal, TripleKind, TripleSet};

/// Match counts and the derived precision / recall / F.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ScoreReport {
    pub matched: usize,
    pub pred_total: usize,
    pub gold_total: usize,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

impl ScoreReport {
    pub fn from_counts(matched: usize, pred_total: usize, gold_total: usize) -> Self {
        let precision = if pred_total == 0 {
            0.0
        } else {
            matched as f64 / pred_total as f64
        };
        let recall = if gold_total == 0 {
            0.0
        } else {
            matched as f64 / gold_total as f64
        };
        let f = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ScoreReport {
            matched,
            pred_total,
            gold_total,
            precision,
            recall,
            f,
        }
    }
}

impl std::fmt::Display for ScoreReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "P {:.4} R {:.4} F {:.4}",
            self.precision, self.recall, self.f
        )
    }
}

/// The best variable mapping found, as `(pred_var, gold_var)` pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct VariableMapping {
    pub pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreOptions {
    /// Hill-climbing initializations: one concept-seeded plus `restarts - 1`
    /// random ones.
    pub restarts: usize,
    pub seed: u64,
    /// Rewrite `x :rel-of y` as `y :rel x` on both sides before scoring.
    /// Off by default: the reference scorer matches `-of` labels literally.
    pub invert_of: bool,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions {
            restarts: 4,
            seed: 0,
            invert_of: false,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SmatchError {
    #[error("corpora differ in length: {pred} predicted vs {gold} gold")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("empty corpus")]
    EmptyCorpus,
}

// ---------------------------------------------------------------------------
// Matching problem over interned triples
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Arg {
    Var(usize),
    Val(u32),
}

#[derive(Debug, Clone, Copy)]
struct IntTriple {
    kind: u8,
    label: u32,
    a: usize,
    b: Arg,
}

#[derive(Default)]
struct Interner {
    ids: HashMap<String, u32>,
}

impl Interner {
    fn id(&mut self, s: &str) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(s.to_string()).or_insert(next)
    }
}

/// Variables of a triple set, in first-appearance order.
fn collect_vars(ts: &TripleSet) -> Vec<String> {
    let mut vars = Vec::new();
    let mut seen = HashMap::new();
    let mut push = |v: &str, vars: &mut Vec<String>| {
        if !seen.contains_key(v) {
            seen.insert(v.to_string(), vars.len());
            vars.push(v.to_string());
        }
    };
    for t in ts.iter() {
        push(&t.arg1, &mut vars);
        if t.kind == TripleKind::Relation {
            push(&t.arg2, &mut vars);
        }
    }
    vars
}

struct Problem {
    pred_vars: Vec<String>,
    gold_vars: Vec<String>,
    pred: Vec<IntTriple>,
    gold_keys: HashMap<(u8, u32, usize, Arg), u32>,
    pred_total: usize,
    gold_total: usize,
    /// instance concept id per variable (u32::MAX when none)
    pred_concept: Vec<u32>,
    gold_concept: Vec<u32>,
}

impl Problem {
    fn new(pred: &TripleSet, gold: &TripleSet) -> Self {
        let pred_vars = collect_vars(pred);
        let gold_vars = collect_vars(gold);
        let mut interner = Interner::default();
        let index_of = |vars: &[String]| -> HashMap<String, usize> {
            vars.iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i))
                .collect()
        };
        let pred_idx = index_of(&pred_vars);
        let gold_idx = index_of(&gold_vars);

        let kind_tag = |k: TripleKind| match k {
            TripleKind::Instance => 0u8,
            TripleKind::Attribute => 1,
            TripleKind::Relation => 2,
        };
        let mut intern_triples = |ts: &TripleSet, idx: &HashMap<String, usize>| -> Vec<IntTriple> {
            ts.iter()
                .map(|t| IntTriple {
                    kind: kind_tag(t.kind),
                    label: interner.id(&t.label),
                    a: idx[&t.arg1],
                    b: if t.kind == TripleKind::Relation {
                        Arg::Var(idx[&t.arg2])
                    } else {
                        Arg::Val(interner.id(&t.arg2))
                    },
                })
                .collect()
        };
        let pred_int = intern_triples(pred, &pred_idx);
        let gold_int = intern_triples(gold, &gold_idx);

        let mut gold_keys: HashMap<(u8, u32, usize, Arg), u32> = HashMap::new();
        for t in &gold_int {
            *gold_keys.entry((t.kind, t.label, t.a, t.b)).or_default() += 1;
        }

        let mut concept_of = |ts: &TripleSet, idx: &HashMap<String, usize>, n: usize| -> Vec<u32> {
            let mut concepts = vec![u32::MAX; n];
            for t in ts.iter() {
                if t.kind == TripleKind::Instance {
                    concepts[idx[&t.arg1]] = interner.id(&t.arg2);
                }
            }
            concepts
        };
        let pred_concept = concept_of(pred, &pred_idx, pred_vars.len());
        let gold_concept = concept_of(gold, &gold_idx, gold_vars.len());

        Problem {
            pred_vars,
            gold_vars,
            pred: pred_int,
            gold_keys,
            pred_total: pred.len(),
            gold_total: gold.len(),
            pred_concept,
            gold_concept,
        }
    }

    /// Matched triples under `mapping` (pred var index -> gold var index),
    /// with multiset semantics: each gold triple is consumed at most once.
    fn matched(&self, mapping: &[Option<usize>]) -> usize {
        let mut mapped: HashMap<(u8, u32, usize, Arg), u32> = HashMap::new();
        for t in &self.pred {
            let Some(a) = mapping[t.a] else { continue };
            let b = match t.b {
                Arg::Var(v) => match mapping[v] {
                    Some(g) => Arg::Var(g),
                    None => continue,
                },
                Arg::Val(val) => Arg::Val(val),
            };
            *mapped.entry((t.kind, t.label, a, b)).or_default() += 1;
        }
        mapped
            .iter()
            .map(|(key, &n)| n.min(self.gold_keys.get(key).copied().unwrap_or(0)) as usize)
            .sum()
    }

    /// Greedy seed: pair variables with equal concepts first-fit, then extend
    /// with arbitrary unused gold variables (extending a mapping never lowers
    /// the match count).
    fn concept_seed(&self) -> Vec<Option<usize>> {
        let mut mapping = vec![None; self.pred_vars.len()];
        let mut used = vec![false; self.gold_vars.len()];
        for (i, &c) in self.pred_concept.iter().enumerate() {
            if c == u32::MAX {
                continue;
            }
            if let Some(j) =
                (0..self.gold_vars.len()).find(|&j| !used[j] && self.gold_concept[j] == c)
            {
                mapping[i] = Some(j);
                used[j] = true;
            }
        }
        for slot in mapping.iter_mut() {
            if slot.is_none() {
                if let Some(j) = (0..self.gold_vars.len()).find(|&j| !used[j]) {
                    *slot = Some(j);
                    used[j] = true;
                }
            }
        }
        mapping
    }

    fn random_seed(&self, rng: &mut ChaCha8Rng) -> Vec<Option<usize>> {
        let mut pred_order: Vec<usize> = (0..self.pred_vars.len()).collect();
        let mut gold_order: Vec<usize> = (0..self.gold_vars.len()).collect();
        pred_order.shuffle(rng);
        gold_order.shuffle(rng);
        let mut mapping = vec![None; self.pred_vars.len()];
        for (p, g) in pred_order.into_iter().zip(gold_order) {
            mapping[p] = Some(g);
        }
        mapping
    }

    /// Steepest-ascent hill-climbing: single-variable reassignments to unused
    /// gold targets plus pairwise swaps, until no move improves the score.
    fn climb(&self, mut mapping: Vec<Option<usize>>) -> (usize, Vec<Option<usize>>) {
        enum Move {
            Reassign { var: usize, target: usize },
            Swap { a: usize, b: usize },
        }
        let mut used = vec![false; self.gold_vars.len()];
        for target in mapping.iter().flatten() {
            used[*target] = true;
        }
        let mut score = self.matched(&mapping);
        loop {
            let mut best = score;
            let mut best_move: Option<Move> = None;
            // reassign one variable to an unused gold target
            for i in 0..mapping.len() {
                let old = mapping[i];
                for (g, &in_use) in used.iter().enumerate() {
                    if in_use {
                        continue;
                    }
                    mapping[i] = Some(g);
                    let s = self.matched(&mapping);
                    if s > best {
                        best = s;
                        best_move = Some(Move::Reassign { var: i, target: g });
                    }
                }
                mapping[i] = old;
            }
            // swap the targets of two variables
            for i in 0..mapping.len() {
                for j in i + 1..mapping.len() {
                    if mapping[i] == mapping[j] {
                        continue;
                    }
                    mapping.swap(i, j);
                    let s = self.matched(&mapping);
                    mapping.swap(i, j);
                    if s > best {
                        best = s;
                        best_move = Some(Move::Swap { a: i, b: j });
                    }
                }
            }
            match best_move {
                None => return (score, mapping),
                Some(Move::Reassign { var, target }) => {
                    if let Some(old) = mapping[var] {
                        used[old] = false;
                    }
                    mapping[var] = Some(target);
                    used[target] = true;
                    score = best;
                }
                Some(Move::Swap { a, b }) => {
                    // a swap exchanges two targets, `used` is unchanged
                    mapping.swap(a, b);
                    score = best;
                }
            }
        }
    }
}

/// Scores two triple sets directly. This is what every metric variant and the
/// graph-level entry points go through.
pub fn score_triple_sets(
    pred: &TripleSet,
    gold: &TripleSet,
    opts: &ScoreOptions,
) -> (ScoreReport, VariableMapping) {
    let problem = Problem::new(pred, gold);
    let restarts = opts.restarts.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best_score = 0;
    let mut best_mapping: Option<Vec<Option<usize>>> = None;
    for restart in 0..restarts {
        let seed_mapping = if restart == 0 {
            problem.concept_seed()
        } else {
            problem.random_seed(&mut rng)
        };
        let (score, mapping) = problem.climb(seed_mapping);
        if best_mapping.is_none() || score > best_score {
            best_score = score;
            best_mapping = Some(mapping);
        }
    }
    let mapping = best_mapping.unwrap_or_default();
    let pairs = mapping
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            g.map(|g| (problem.pred_vars[i].clone(), problem.gold_vars[g].clone()))
        })
        .collect();
    (
        ScoreReport::from_counts(best_score, problem.pred_total, problem.gold_total),
        VariableMapping { pairs },
    )
}

pub(crate) fn substrate(g: &AmrGraph, invert_of: bool) -> TripleSet {
    if invert_of {
        to_triples(g)
    } else {
        to_triples_literal(g)
    }
}

/// SMATCH between two graphs with default options (4 restarts, seed 0).
pub fn smatch(pred: &AmrGraph, gold: &AmrGraph) -> (ScoreReport, VariableMapping) {
    smatch_with(pred, gold, &ScoreOptions::default())
}

pub fn smatch_with(
    pred: &AmrGraph,
    gold: &AmrGraph,
    opts: &ScoreOptions,
) -> (ScoreReport, VariableMapping) {
    score_triple_sets(
        &substrate(pred, opts.invert_of),
        &substrate(gold, opts.invert_of),
        opts,
    )
}

/// Deterministic per-pair seed, stable under any parallel schedule.
pub fn pair_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Micro-average: counts are summed over pairs, then P/R/F computed once.
pub fn micro_average(reports: &[ScoreReport]) -> ScoreReport {
    let matched = reports.iter().map(|r| r.matched).sum();
    let pred_total = reports.iter().map(|r| r.pred_total).sum();
    let gold_total = reports.iter().map(|r| r.gold_total).sum();
    ScoreReport::from_counts(matched, pred_total, gold_total)
}

/// Scores aligned corpora pairwise and micro-averages the counts.
pub fn corpus_smatch(
    preds: &[AmrGraph],
    golds: &[AmrGraph],
    opts: &ScoreOptions,
) -> Result<(ScoreReport, Vec<ScoreReport>), SmatchError> {
    if preds.len() != golds.len() {
        return Err(SmatchError::LengthMismatch {
            pred: preds.len(),
            gold: golds.len(),
        });
    }
    if preds.is_empty() {
        return Err(SmatchError::EmptyCorpus);
    }
    let per_pair: Vec<ScoreReport> = preds
        .iter()
        .zip(golds)
        .enumerate()
        .map(|(i, (p, g))| {
            let pair_opts = ScoreOptions {
                seed: pair_seed(opts.seed, i),
                ..*opts
            };
            smatch_with(p, g, &pair_opts).0
        })
        .collect();
    Ok((micro_average(&per_pair), per_pair))
}
