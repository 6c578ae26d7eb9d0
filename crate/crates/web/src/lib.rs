//! Browser demo: three interactive views over the toolkit, exported through
//! wasm-bindgen and returning JSON strings the static page renders.

use wasm_bindgen::prelude::*;

use amrsmith_core::graph::Layout;
use amrsmith_core::metrics::{fine_grained, MetricKind};
use amrsmith_core::postprocess::{
    prune, repair, restore_coreference, restore_variables, wikify, Gazetteer, PruneMethod, StageLog,
};
use amrsmith_core::preprocess::remove_variables;
use amrsmith_core::smatch::{smatch_with, ScoreOptions};
use amrsmith_core::tokenize::{build_vocab, encode_amr, tokens_to_line, AmrEncodeOptions};
use amrsmith_core::{parse_amr, to_triples, ParseError};

fn error_json(e: &ParseError) -> serde_json::Value {
    let pos = e.pos();
    serde_json::json!({
        "message": e.to_string(),
        "line": pos.line,
        "col": pos.col,
    })
}

fn triples_json(g: &amrsmith_core::AmrGraph) -> serde_json::Value {
    let ts = to_triples(g);
    serde_json::json!({
        "instances": ts.count(amrsmith_core::TripleKind::Instance),
        "attributes": ts.count(amrsmith_core::TripleKind::Attribute),
        "relations": ts.count(amrsmith_core::TripleKind::Relation),
        "rows": ts
            .iter()
            .map(|t| {
                serde_json::json!([
                    format!("{:?}", t.kind).to_lowercase(),
                    t.label,
                    t.arg1,
                    t.arg2
                ])
            })
            .collect::<Vec<_>>(),
    })
}

/// Parse an AMR and show every derived form: triples, the variable-free
/// tree, and the character/super-character token line.
#[wasm_bindgen]
pub fn analyze(text: &str, super_relations: bool, depth_parens: bool) -> String {
    let graph = match parse_amr(text) {
        Ok(g) => g,
        Err(e) => return serde_json::json!({ "ok": false, "error": error_json(&e) }).to_string(),
    };
    let (tree, cycles) = remove_variables(&graph);
    let single = tree.serialize(Layout::SingleLine);
    let tokens = encode_amr(
        &single,
        &AmrEncodeOptions {
            super_relations,
            depth_parens,
        },
    );
    let vocab = build_vocab(std::slice::from_ref(&tokens));
    serde_json::json!({
        "ok": true,
        "indented": graph.serialize(Layout::Indented),
        "single_line": graph.serialize(Layout::SingleLine),
        "variable_free": tree.serialize(Layout::Indented),
        "variable_free_single": single,
        "cycles_cut": cycles.len(),
        "triples": triples_json(&graph),
        "token_line": tokens_to_line(&tokens),
        "token_count": tokens.len(),
        "vocab_size": vocab.size(),
    })
    .to_string()
}

/// SMATCH and the full fine-grained breakdown between two AMRs.
#[wasm_bindgen]
pub fn compare(pred: &str, gold: &str, restarts: u32, seed: u32) -> String {
    let pred = match parse_amr(pred) {
        Ok(g) => g,
        Err(e) => {
            return serde_json::json!({ "ok": false, "side": "pred", "error": error_json(&e) })
                .to_string()
        }
    };
    let gold = match parse_amr(gold) {
        Ok(g) => g,
        Err(e) => {
            return serde_json::json!({ "ok": false, "side": "gold", "error": error_json(&e) })
                .to_string()
        }
    };
    let opts = ScoreOptions {
        restarts: restarts.max(1) as usize,
        seed: seed as u64,
        invert_of: false,
    };
    let (report, mapping) = smatch_with(&pred, &gold, &opts);
    let metrics: Vec<serde_json::Value> = MetricKind::ALL
        .iter()
        .map(|&metric| {
            let r = fine_grained(&pred, &gold, metric, &opts);
            serde_json::json!({
                "metric": metric.name(),
                "precision": r.precision,
                "recall": r.recall,
                "f": r.f,
                "matched": r.matched,
                "pred_total": r.pred_total,
                "gold_total": r.gold_total,
            })
        })
        .collect();
    serde_json::json!({
        "ok": true,
        "precision": report.precision,
        "recall": report.recall,
        "f": report.f,
        "matched": report.matched,
        "pred_total": report.pred_total,
        "gold_total": report.gold_total,
        "mapping": mapping.pairs,
        "metrics": metrics,
    })
    .to_string()
}

fn logs_json(logs: &[StageLog]) -> Vec<serde_json::Value> {
    logs.iter()
        .map(|l| serde_json::json!([l.stage, l.action, l.detail]))
        .collect()
}

/// Run raw model output through the restoration pipeline stage by stage.
#[wasm_bindgen]
pub fn postprocess_line(raw: &str, prune_method: u8, coref: bool, gazetteer_tsv: &str) -> String {
    let mut logs = Vec::new();
    let (tree, repair_logs) = repair(raw);
    logs.extend(repair_logs);
    let repaired = tree.serialize(Layout::SingleLine);

    let tree = match PruneMethod::from_number(prune_method) {
        Some(method) => {
            let (pruned, actions) = prune(&tree, method);
            for a in &actions {
                logs.push(StageLog {
                    stage: "prune",
                    action: "removed",
                    detail: format!("{} {}", a.relation, a.label),
                });
            }
            pruned
        }
        None => tree,
    };
    let pruned = tree.serialize(Layout::SingleLine);

    let graph = restore_variables(&tree);
    let with_variables = graph.serialize(Layout::SingleLine);

    let graph = if coref {
        let (merged, coref_logs) = restore_coreference(&graph);
        logs.extend(coref_logs);
        merged
    } else {
        graph
    };
    let with_coref = graph.serialize(Layout::SingleLine);

    let gazetteer = Gazetteer::from_tsv_reader(gazetteer_tsv.as_bytes()).unwrap_or_default();
    let graph = if gazetteer.is_empty() {
        graph
    } else {
        let (wikified, wiki_logs) = wikify(&graph, &gazetteer);
        logs.extend(wiki_logs);
        wikified
    };

    serde_json::json!({
        "ok": true,
        "repaired": repaired,
        "pruned": pruned,
        "variables": with_variables,
        "coref": with_coref,
        "final": graph.serialize(Layout::Indented),
        "final_single": graph.serialize(Layout::SingleLine),
        "triples": triples_json(&graph),
        "logs": logs_json(&logs),
    })
    .to_string()
}
