//! Acceptance suite: exact reproductions of the worked examples plus the
//! property checks, one criterion per test, one PASS/FAIL line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

// `ensure!` negates arbitrary conditions, including float comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use amrsmith_core::graph::Layout;
use amrsmith_core::metrics::{fine_grained, MetricKind};
use amrsmith_core::oracle::oracle_triple_sets;
use amrsmith_core::postprocess::{
    pipeline, prune, repair, restore_coreference, restore_variables, PipelineOptions, PruneMethod,
};
use amrsmith_core::preprocess::{
    best_reordering, double_data, parse_alignments, remove_variables, Alignment, AlignmentFormat,
    SentenceRecord,
};
use amrsmith_core::silver::{agreement_filter, mix, MixSpec, SilverCandidate, Source};
use amrsmith_core::smatch::{pair_seed, score_triple_sets, smatch_with, ScoreOptions};
use amrsmith_core::synth::{
    perturb, random_alignment, random_graph, random_junk_line, random_text_line, random_tree,
    rename_vars, GraphConfig,
};
use amrsmith_core::tokenize::{decode_amr, encode_amr, encode_sentence, AmrEncodeOptions};
use amrsmith_core::tree::VariableFreeTree;
use amrsmith_core::{
    parse_amr, to_triples, to_triples_literal, AmrGraph, Triple, TripleKind, TripleSet,
};

fn criterion<T>(number: u32, name: &str, check: impl FnOnce() -> Result<T, String>) -> T {
    match check() {
        Ok(value) => {
            println!("criterion {number} ({name}): PASS");
            value
        }
        Err(msg) => {
            println!("criterion {number} ({name}): FAIL - {msg}");
            panic!("criterion {number} ({name}) failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

const HEAT_WAVE: &str = r#"(a / affect-01
   :ARG0 (w / wave-04
            :ARG1 (h2 / heat)
            :location (c / country :wiki "France" :name (n / name :op1 "France")))
   :ARG1 (p / person
            :ARG0-of (s / strike-02
                        :mod (h / hunger-01
                                :ARG0 p))))"#;

const OPIUM: &str = r#"(m / material
   :mod (r / raw)
   :domain (o / opium)
   :ARG1-of (u / use-01
               :ARG2 (p / make-01
                        :ARG1 (h / heroin)
                        :ARG2 o)))"#;

const OPIUM_VARIABLE_FREE: &str = "(material :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))";

#[test]
fn criterion_1_triple_fidelity() {
    criterion(1, "triple fidelity", || {
        use TripleKind::*;
        let g = parse_amr(HEAT_WAVE).map_err(|e| e.to_string())?;
        let ts = to_triples(&g);
        let t = |kind, label: &str, a1: &str, a2: &str| Triple::new(kind, label, a1, a2);
        let expected = TripleSet {
            triples: vec![
                t(Instance, "instance", "a", "affect-01"),
                t(Instance, "instance", "w", "wave-04"),
                t(Instance, "instance", "h2", "heat"),
                t(Instance, "instance", "c", "country"),
                t(Instance, "instance", "n", "name"),
                t(Instance, "instance", "p", "person"),
                t(Instance, "instance", "s", "strike-02"),
                t(Instance, "instance", "h", "hunger-01"),
                t(Attribute, "TOP", "a", "affect-01"),
                t(Attribute, "wiki", "c", "France"),
                t(Attribute, "op1", "n", "France"),
                t(Relation, "ARG0", "a", "w"),
                t(Relation, "ARG1", "a", "p"),
                t(Relation, "location", "w", "c"),
                t(Relation, "ARG1", "w", "h2"),
                t(Relation, "name", "c", "n"),
                t(Relation, "ARG0", "s", "p"),
                t(Relation, "mod", "s", "h"),
                t(Relation, "ARG0", "h", "p"),
            ],
        };
        ensure!(ts.len() == 19, "expected 19 triples, got {}", ts.len());
        ensure!(ts.count(Instance) == 8, "expected 8 instance triples");
        ensure!(ts.count(Attribute) == 3, "expected 3 attribute triples");
        ensure!(ts.count(Relation) == 8, "expected 8 relation triples");
        ensure!(
            ts.same_multiset(&expected),
            "triples differ from the expected set: {:?}",
            ts.triples
        );
        Ok(())
    });
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

/// Re-entrancy pattern: for every variable with in-degree >= 2, the multiset
/// of (incoming relation, target concept) pairs.
fn reentrancy_pattern(g: &AmrGraph) -> Vec<(String, String)> {
    let mut indeg: HashMap<&str, usize> = HashMap::new();
    for e in &g.edges {
        if let amrsmith_core::NodeRef::Var(t) = &e.target {
            *indeg.entry(t.as_str()).or_default() += 1;
        }
    }
    let mut pattern: Vec<(String, String)> = g
        .edges
        .iter()
        .filter_map(|e| match &e.target {
            amrsmith_core::NodeRef::Var(t) if indeg[t.as_str()] >= 2 => Some((
                e.relation.clone(),
                g.concept_of(t).unwrap_or_default().to_string(),
            )),
            _ => None,
        })
        .collect();
    pattern.sort();
    pattern
}

#[test]
fn criterion_2_preprocessing_fidelity() {
    criterion(2, "preprocessing fidelity", || {
        let g = parse_amr(OPIUM).map_err(|e| e.to_string())?;
        let (tree, warnings) = remove_variables(&g);
        ensure!(warnings.is_empty(), "unexpected cycle warnings");
        ensure!(
            tree.serialize(Layout::SingleLine) == OPIUM_VARIABLE_FREE,
            "variable-free form differs: {tree}"
        );
        // the verbatim multi-line rendering parses to the same tree
        let verbatim = "(material\n   :mod (raw)\n   :domain (opium)\n   :ARG1-of (use-01\n               :ARG2 (make-01\n                         :ARG1 (heroin)\n                         :ARG2 (opium))))";
        let (expected_tree, repairs) = repair(verbatim);
        ensure!(repairs.is_empty(), "reference text needed repairs");
        ensure!(
            tree == expected_tree,
            "tree differs from the reference rendering"
        );

        let copies_graph = parse_amr(OPIUM_WITH_COPIES).map_err(|e| e.to_string())?;
        let (copies_tree, _) = remove_variables(&copies_graph);
        let restored = restore_variables(&copies_tree);
        let (merged, _) = restore_coreference(&restored);
        let expected = parse_amr(OPIUM_COREFERENT).map_err(|e| e.to_string())?;
        let (report, _) = smatch_with(&merged, &expected, &ScoreOptions::default());
        ensure!(
            report.f == 1.0,
            "SMATCH vs the coref-restored form is {}",
            report.f
        );
        ensure!(
            reentrancy_pattern(&merged) == reentrancy_pattern(&expected),
            "re-entrancy patterns differ: {:?} vs {:?}",
            reentrancy_pattern(&merged),
            reentrancy_pattern(&expected)
        );
        ensure!(
            merged.serialize(Layout::SingleLine) == expected.serialize(Layout::SingleLine),
            "restored graph text differs: {merged}"
        );
        Ok(())
    });
}

fn dup_same_parent() -> VariableFreeTree {
    repair("(material :mod (raw) :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))").0
}

fn dup_distinct_parents() -> VariableFreeTree {
    repair("(material :mod (raw) :domain (opium :mod (raw)) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :mod (raw) :ARG2 (opium))))").0
}

#[test]
fn criterion_3_pruning_fidelity() {
    criterion(3, "pruning fidelity", || {
        let base = "(material :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))";
        let left_pruned = "(material :mod (raw) :domain (opium) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))";
        let right_m4 = "(material :mod (raw) :domain (opium :mod (raw)) :ARG1-of (use-01 :ARG2 (make-01 :ARG1 (heroin) :ARG2 (opium))))";

        // the struck-through branch on the left is the second :mod (raw)
        let (got, actions) = prune(&dup_same_parent(), PruneMethod::Combined);
        ensure!(got.to_string() == left_pruned, "left/method 4: {got}");
        ensure!(
            actions.len() == 1,
            "left/method 4 should remove exactly one leaf"
        );
        // on the right only the third occurrence goes
        let (got, actions) = prune(&dup_distinct_parents(), PruneMethod::Combined);
        ensure!(got.to_string() == right_m4, "right/method 4: {got}");
        ensure!(
            actions.len() == 1,
            "right/method 4 should remove exactly one leaf"
        );

        // hand-derived methods 1-3
        let (m1, _) = prune(&dup_distinct_parents(), PruneMethod::Reoccurring);
        ensure!(m1.to_string() == base, "right/method 1: {m1}");
        let (m2, _) = prune(&dup_distinct_parents(), PruneMethod::SameParent);
        ensure!(
            m2 == dup_distinct_parents(),
            "right/method 2 must not change the tree"
        );
        let (m3, _) = prune(&dup_distinct_parents(), PruneMethod::Frequent);
        ensure!(m3.to_string() == right_m4, "right/method 3: {m3}");
        let (m1l, _) = prune(&dup_same_parent(), PruneMethod::Reoccurring);
        ensure!(m1l.to_string() == left_pruned, "left/method 1: {m1l}");
        let (m2l, _) = prune(&dup_same_parent(), PruneMethod::SameParent);
        ensure!(m2l.to_string() == left_pruned, "left/method 2: {m2l}");
        let (m3l, _) = prune(&dup_same_parent(), PruneMethod::Frequent);
        ensure!(
            m3l == dup_same_parent(),
            "left/method 3 must not change the tree"
        );

        // subset laws on 1,000 random trees
        let mut rng = ChaCha8Rng::seed_from_u64(301);
        for i in 0..1000 {
            let tree = random_tree(&mut rng, 14);
            let removals = |m: PruneMethod| -> Vec<(Vec<usize>, usize)> {
                prune(&tree, m)
                    .1
                    .into_iter()
                    .map(|a| (a.parent_path, a.child_index))
                    .collect()
            };
            let m1 = removals(PruneMethod::Reoccurring);
            let m2 = removals(PruneMethod::SameParent);
            let m3 = removals(PruneMethod::Frequent);
            let m4 = removals(PruneMethod::Combined);
            for r in m2.iter().chain(&m3) {
                ensure!(m4.contains(r), "tree {i}: method 4 misses a removal of 2/3");
            }
            for r in &m3 {
                ensure!(m1.contains(r), "tree {i}: method 1 misses a removal of 3");
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_4_tokenization_fidelity() {
    criterion(4, "tokenization fidelity", || {
        let super_row = encode_amr(
            "(thing :quant 1 :polarity -)",
            &AmrEncodeOptions {
                super_relations: true,
                depth_parens: false,
            },
        );
        let expected: Vec<&str> = vec![
            "(",
            "t",
            "h",
            "i",
            "n",
            "g",
            "+",
            ":quant",
            "+",
            "1",
            "+",
            ":polarity",
            "+",
            "-",
            ")",
        ];
        ensure!(
            super_row == expected,
            "super-character row differs: {super_row:?}"
        );

        let mut record = SentenceRecord::default();
        record.cleaned = "I am not that rich .".into();
        record.tokens = record.cleaned.split(' ').map(str::to_string).collect();
        record.tags = Some(
            ["PRP", "VBP", "RB", "IN", "JJ", ""]
                .iter()
                .map(|t| t.to_string())
                .collect(),
        );
        let pos_row = encode_sentence(&record, true);
        let expected_pos: Vec<&str> = vec![
            "I", "PRP", "+", "a", "m", "VBP", "+", "n", "o", "t", "RB", "+", "t", "h", "a", "t",
            "IN", "+", "r", "i", "c", "h", "JJ", "+", ".",
        ];
        ensure!(pos_row == expected_pos, "POS row differs: {pos_row:?}");

        let mut rng = ChaCha8Rng::seed_from_u64(401);
        for i in 0..10_000 {
            let line = random_text_line(&mut rng, 50);
            let opts = AmrEncodeOptions {
                super_relations: i % 2 == 0,
                depth_parens: i % 4 >= 2,
            };
            let decoded = decode_amr(&encode_amr(&line, &opts));
            ensure!(decoded == line, "line {i} failed round-trip: {line:?}");
        }
        Ok(())
    });
}

#[test]
fn criterion_5_smatch_correctness() {
    criterion(5, "smatch vs exhaustive oracle", || {
        let mut rng = ChaCha8Rng::seed_from_u64(501);
        let cfg = GraphConfig {
            max_vars: 7,
            ..Default::default()
        };
        let mut agree = 0usize;
        let total = 250usize;
        for i in 0..total {
            let gold = random_graph(&mut rng, &cfg);
            let pred = perturb(&mut rng, &gold);
            let pred_ts = to_triples_literal(&pred);
            let gold_ts = to_triples_literal(&gold);
            let exact = oracle_triple_sets(&pred_ts, &gold_ts).map_err(|e| e.to_string())?;
            let opts = ScoreOptions {
                restarts: 8,
                seed: pair_seed(500, i),
                ..Default::default()
            };
            let (heuristic, _) = score_triple_sets(&pred_ts, &gold_ts, &opts);
            ensure!(
                heuristic.matched <= exact.matched,
                "pair {i}: hill-climbing exceeded the oracle ({} > {})",
                heuristic.matched,
                exact.matched
            );
            if heuristic.matched == exact.matched {
                agree += 1;
            }
        }
        let rate = agree as f64 / total as f64;
        ensure!(
            rate >= 0.99,
            "hill-climbing matched the oracle on only {agree}/{total} pairs"
        );

        for i in 0..1000 {
            let cfg = GraphConfig {
                max_vars: 9,
                max_reentrancies: 2,
                ..Default::default()
            };
            let g = random_graph(&mut rng, &cfg);
            let renamed = rename_vars(&g, "q");
            let (report, _) = smatch_with(&renamed, &g, &ScoreOptions::default());
            ensure!(report.f == 1.0, "renamed graph {i} scored {}", report.f);
        }
        Ok(())
    });
}

fn opium_tree() -> VariableFreeTree {
    remove_variables(&parse_amr(OPIUM).unwrap()).0
}

/// Token indices over "Opium is the raw material used to make heroin":
/// opium 0, raw 3, material 4, use 5, make 7, heroin 8. Both opium mentions
/// carry the graph node's alignment.
fn opium_alignment() -> Alignment {
    parse_alignments(
        "4-5|0 3-4|0.0 0-1|0.1+0.2.0.1 5-6|0.2 7-8|0.2.0 8-9|0.2.0.0",
        AlignmentFormat::Jamr,
    )
    .unwrap()
}

/// Independent recomputation of the reordering key: a node's own minimum
/// aligned token, else the minimum over its children's keys.
fn reorder_key(tree: &VariableFreeTree, path: &[usize], align: &Alignment) -> Option<usize> {
    let own = align
        .entries
        .iter()
        .filter(|e| e.path == path)
        .map(|e| e.start)
        .min();
    if own.is_some() {
        return own;
    }
    let node = tree.at_path(path)?;
    (0..node.children.len())
        .filter_map(|i| {
            let mut p = path.to_vec();
            p.push(i);
            reorder_key(tree, &p, align)
        })
        .min()
}

fn check_monotone(
    node: &VariableFreeTree,
    path: &mut Vec<usize>,
    root: &VariableFreeTree,
    align: &Alignment,
) -> Result<(), String> {
    let mut last: Option<usize> = None;
    for (i, (_, child)) in node.children.iter().enumerate() {
        path.push(i);
        if let Some(k) = reorder_key(root, path, align) {
            if let Some(prev) = last {
                if prev > k {
                    return Err(format!("sibling keys decrease: {prev} then {k}"));
                }
            }
            last = Some(k);
        }
        check_monotone(child, path, root, align)?;
        path.pop();
    }
    Ok(())
}

#[test]
fn criterion_6_reordering_contract() {
    criterion(6, "reordering contract", || {
        let (reordered, _) = best_reordering(&opium_tree(), &opium_alignment());
        let expected = "(material :domain (opium) :mod (raw) :ARG1-of (use-01 :ARG2 (make-01 :ARG2 (opium) :ARG1 (heroin))))";
        ensure!(
            reordered.serialize(Layout::SingleLine) == expected,
            "reordered form differs: {reordered}"
        );

        let mut rng = ChaCha8Rng::seed_from_u64(601);
        for i in 0..1000 {
            let tree = random_tree(&mut rng, 10);
            let align = random_alignment(&mut rng, &tree, 12);
            let (once, remapped) = best_reordering(&tree, &align);
            let (twice, remapped2) = best_reordering(&once, &remapped);
            ensure!(
                once == twice && remapped == remapped2,
                "case {i}: not idempotent"
            );
            let before = restore_variables(&tree);
            let after = restore_variables(&once);
            let opts = ScoreOptions {
                restarts: 8,
                seed: pair_seed(600, i),
                ..Default::default()
            };
            let (report, _) = smatch_with(&after, &before, &opts);
            ensure!(
                report.f == 1.0,
                "case {i}: semantics changed, F = {}",
                report.f
            );
            check_monotone(&once, &mut Vec::new(), &once, &remapped)
                .map_err(|e| format!("case {i}: {e}"))?;
        }

        // doubling
        let records = vec![
            (SentenceRecord::default(), opium_tree(), opium_alignment()),
            (
                SentenceRecord::default(),
                opium_tree(),
                Alignment::default(),
            ),
            (
                SentenceRecord::default(),
                VariableFreeTree::concept("x"),
                Alignment::default(),
            ),
        ];
        ensure!(
            double_data(&records).len() == 6,
            "doubling must yield 2N records"
        );
        ensure!(double_data(&[]).is_empty(), "doubling an empty corpus");
        Ok(())
    });
}

/// Builds a star-shaped AMR over `n` child concepts; `junk` of them get
/// unique unmatched concepts. With all relation labels distinct the optimum
/// is exactly 2 + (n - junk) matched triples out of 2n + 2.
fn star(concept_prefix: &str, n: usize, junk: usize, junk_tag: &str) -> String {
    let mut out = format!("# ::snt the {concept_prefix} sentence\n(r / root-concept");
    for i in 0..n {
        let concept = if i < junk {
            format!("{junk_tag}-{i:02}")
        } else {
            format!("{concept_prefix}-{i:02}")
        };
        out.push_str(&format!(" :op{} (c{i} / {concept})", i + 1));
    }
    out.push(')');
    out
}

#[test]
fn criterion_7_silver_curation() {
    criterion(7, "silver curation", || {
        // 10 pairs: 8 in full agreement, one at exactly F = 55.0 (11 of 20
        // triples match), one clearly below
        let mut camr = Vec::new();
        let mut jamr = Vec::new();
        for i in 0..8 {
            camr.push(star(&format!("same{i}"), 4, 0, "x"));
            jamr.push(star(&format!("same{i}"), 4, 0, "x"));
        }
        camr.push(star("edge", 9, 0, "x"));
        jamr.push(star("edge", 9, 9, "junk"));
        camr.push(star("low", 9, 0, "x"));
        jamr.push("(z / zebra :mod (q / quiet))".to_string());

        let opts = ScoreOptions::default();
        let mut kept = Vec::new();
        let mut agreements = Vec::new();
        for (c, j) in camr.iter().zip(&jamr) {
            let mut candidate = SilverCandidate::from_texts(c, j);
            ensure!(
                amrsmith_core::silver::validity_filter(&candidate).is_none(),
                "toy corpus should pass validity"
            );
            let keep = agreement_filter(&mut candidate, 55.0, false, &opts);
            agreements.push(candidate.agreement.unwrap());
            if keep {
                kept.push(candidate);
            }
        }
        ensure!(
            (agreements[8] - 55.0).abs() < 1e-9,
            "edge pair must score exactly 55.0, got {}",
            agreements[8]
        );
        ensure!(agreements[9] < 55.0, "low pair must score below 55.0");
        ensure!(
            kept.len() == 8,
            "strict-exceed set has 8 pairs, kept {}",
            kept.len()
        );
        // inclusive flip admits the edge pair
        let mut edge = SilverCandidate::from_texts(&camr[8], &jamr[8]);
        ensure!(
            agreement_filter(&mut edge, 55.0, true, &opts),
            "inclusive mode must keep the 55.0 pair"
        );

        let spec = MixSpec {
            total: 8,
            camr_fraction: 0.75,
            seed: 7,
        };
        let first = mix(&kept, &spec).map_err(|e| e.to_string())?;
        let camr_count = first.iter().filter(|(_, _, s)| *s == Source::Camr).count();
        ensure!(camr_count == 6, "expected 6 CAMR picks, got {camr_count}");
        ensure!(first.len() - camr_count == 2, "expected 2 JAMR picks");
        let again = mix(&kept, &spec).map_err(|e| e.to_string())?;
        let key = |v: &[(String, AmrGraph, Source)]| -> Vec<(String, Source)> {
            v.iter().map(|(s, _, src)| (s.clone(), *src)).collect()
        };
        ensure!(
            key(&first) == key(&again),
            "mix must be reproducible under a fixed seed"
        );
        Ok(())
    });
}

#[test]
fn criterion_8_pipeline_totality() {
    criterion(8, "postprocess totality", || {
        let mut rng = ChaCha8Rng::seed_from_u64(801);
        let opts = PipelineOptions::default();
        for i in 0..10_000 {
            let line = if i % 2 == 0 {
                random_junk_line(&mut rng, 30)
            } else {
                let len = rng.random_range(0..60);
                let bytes: Vec<u8> = (0..len).map(|_| rng.random::<u8>()).collect();
                String::from_utf8_lossy(&bytes).into_owned()
            };
            let (graph, _) = pipeline(&line, &opts, None);
            graph
                .validate()
                .map_err(|e| format!("line {i} ({line:?}): invalid graph: {e}"))?;
            for (var, _) in &graph.instances {
                let mut chars = var.chars();
                let ok = chars.next().is_some_and(|c| c.is_ascii_lowercase())
                    && chars.all(|c| c.is_ascii_digit());
                ensure!(ok, "line {i}: bad variable {var}");
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_9_end_to_end_identity() {
    criterion(9, "end-to-end identity", || {
        let eval = |cfg: &GraphConfig, seed: u64| -> Result<f64, String> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut reports = Vec::new();
            for i in 0..60 {
                let gold = random_graph(&mut rng, cfg);
                let raw = remove_variables(&gold).0.serialize(Layout::SingleLine);
                let (pred, _) = pipeline(&raw, &PipelineOptions::default(), None);
                pred.validate().map_err(|e| format!("record {i}: {e}"))?;
                let opts = ScoreOptions {
                    restarts: 8,
                    seed: pair_seed(900, i),
                    ..Default::default()
                };
                reports.push(smatch_with(&pred, &gold, &opts).0);
            }
            Ok(amrsmith_core::smatch::micro_average(&reports).f)
        };

        let plain = GraphConfig {
            max_vars: 8,
            distinct_concepts: true,
            max_reentrancies: 0,
            attribute_prob: 0.4,
        };
        let f = eval(&plain, 901)?;
        ensure!(f == 1.0, "re-entrancy-free corpus scored {f}");

        let reentrant = GraphConfig {
            max_vars: 8,
            distinct_concepts: true,
            max_reentrancies: 2,
            attribute_prob: 0.4,
        };
        let f = eval(&reentrant, 902)?;
        ensure!(f >= 0.95, "re-entrant corpus scored {f}");

        // a metric sanity pass over one identical pair: every breakdown is
        // perfect when prediction equals gold
        let g = parse_amr(HEAT_WAVE).map_err(|e| e.to_string())?;
        for metric in MetricKind::ALL {
            let r = fine_grained(&g, &g, metric, &ScoreOptions::default());
            if r.gold_total > 0 {
                ensure!(r.f == 1.0, "{} not perfect on identity", metric.name());
            }
        }
        Ok(())
    });
}
