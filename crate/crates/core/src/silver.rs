//! Silver-standard data curation: two external parsers' outputs are filtered
//! for validity, checked against each other with SMATCH, and mixed in a
//! configurable ratio. Exactly one parse per sentence makes it to the output.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::AmrGraph;
use crate::parse::{parse_amr, ParseError};
use crate::smatch::{pair_seed, smatch_with, ScoreOptions};

#[derive(Debug, Clone)]
pub struct SilverCandidate {
    pub sentence: String,
    pub camr_text: String,
    pub jamr_text: String,
    pub camr: Result<AmrGraph, ParseError>,
    pub jamr: Result<AmrGraph, ParseError>,
    /// Pairwise SMATCH F on the 0-100 scale; present iff both parses are valid.
    pub agreement: Option<f64>,
}

impl SilverCandidate {
    /// Builds a candidate from two aligned corpus blocks. The sentence comes
    /// from the CAMR block's `::snt` metadata (authoritative), falling back
    /// to the JAMR block.
    pub fn from_texts(camr_text: &str, jamr_text: &str) -> Self {
        let camr = parse_amr(camr_text);
        let jamr = parse_amr(jamr_text);
        let sentence = camr
            .as_ref()
            .ok()
            .and_then(|g| g.meta("snt"))
            .or_else(|| jamr.as_ref().ok().and_then(|g| g.meta("snt")))
            .unwrap_or_default()
            .to_string();
        SilverCandidate {
            sentence,
            camr_text: camr_text.to_string(),
            jamr_text: jamr_text.to_string(),
            camr,
            jamr,
            agreement: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DropReason {
    Invalid,
    NullTag,
    NullEdge,
    LowAgreement,
}

/// `null-tag` / `null-edge` as standalone tokens (CAMR emits these when it
/// cannot find a candidate parse).
fn contains_marker(text: &str, marker: &str) -> bool {
    text.split(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
        .any(|tok| tok == marker)
}

/// Keep (None) or drop with the first matching reason.
pub fn validity_filter(candidate: &SilverCandidate) -> Option<DropReason> {
    for text in [&candidate.camr_text, &candidate.jamr_text] {
        if contains_marker(text, "null-tag") {
            return Some(DropReason::NullTag);
        }
        if contains_marker(text, "null-edge") {
            return Some(DropReason::NullEdge);
        }
    }
    if candidate.camr.is_err() || candidate.jamr.is_err() {
        return Some(DropReason::Invalid);
    }
    None
}

/// Computes the pairwise agreement and keeps the candidate iff it exceeds
/// the threshold (strictly by default; `inclusive` flips to `>=`).
///
/// F equals `2·matched / (pred_total + gold_total)`, so the comparison is
/// done on that form; a pair whose score is mathematically equal to the
/// threshold is never kept by rounding noise.
pub fn agreement_filter(
    candidate: &mut SilverCandidate,
    threshold: f64,
    inclusive: bool,
    opts: &ScoreOptions,
) -> bool {
    let (Ok(camr), Ok(jamr)) = (&candidate.camr, &candidate.jamr) else {
        return false;
    };
    let report = smatch_with(camr, jamr, opts).0;
    let total = (report.pred_total + report.gold_total) as f64;
    let f = if total == 0.0 {
        0.0
    } else {
        200.0 * report.matched as f64 / total
    };
    candidate.agreement = Some(f);
    let scaled = 200.0 * report.matched as f64;
    if inclusive {
        scaled >= threshold * total
    } else {
        scaled > threshold * total
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixSpec {
    pub total: usize,
    pub camr_fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Source {
    Camr,
    Jamr,
}

impl Source {
    pub fn name(&self) -> &'static str {
        match self {
            Source::Camr => "camr",
            Source::Jamr => "jamr",
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SilverError {
    #[error("not enough candidates: need {needed}, have {available}")]
    InsufficientCandidates { needed: usize, available: usize },
    #[error("parser outputs differ in length: {camr} CAMR vs {jamr} JAMR blocks")]
    AlignmentMismatch { camr: usize, jamr: usize },
}

fn round_half_even(x: f64) -> usize {
    let floor = x.floor();
    let frac = x - floor;
    let floor = floor as usize;
    match frac.partial_cmp(&0.5) {
        Some(std::cmp::Ordering::Greater) => floor + 1,
        Some(std::cmp::Ordering::Equal) if !floor.is_multiple_of(2) => floor + 1,
        _ => floor,
    }
}

/// One curated record: the sentence, the chosen parse, which parser it came
/// from.
pub type SilverSelection = Vec<(String, AmrGraph, Source)>;

/// Draws a deterministic sample of `spec.total` sentences; the first
/// `round(camr_fraction * total)` (banker's rounding) contribute their CAMR
/// parse, the rest their JAMR parse. The output order is itself a seeded
/// shuffle.
pub fn mix(kept: &[SilverCandidate], spec: &MixSpec) -> Result<SilverSelection, SilverError> {
    if kept.len() < spec.total {
        return Err(SilverError::InsufficientCandidates {
            needed: spec.total,
            available: kept.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.shuffle(&mut rng);
    order.truncate(spec.total);
    let camr_count = round_half_even(spec.camr_fraction * spec.total as f64).min(spec.total);
    let mut out: SilverSelection = order
        .iter()
        .enumerate()
        .map(|(rank, &idx)| {
            let candidate = &kept[idx];
            let (graph, source) = if rank < camr_count {
                (
                    candidate.camr.clone().expect("kept implies valid"),
                    Source::Camr,
                )
            } else {
                (
                    candidate.jamr.clone().expect("kept implies valid"),
                    Source::Jamr,
                )
            };
            (candidate.sentence.clone(), graph, source)
        })
        .collect();
    out.shuffle(&mut rng);
    Ok(out)
}

pub const AGREEMENT_BINS: usize = 20;

/// Drop counts and the agreement histogram of one curation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurationReport {
    pub total_pairs: usize,
    pub dropped_invalid: usize,
    pub dropped_null_tag: usize,
    pub dropped_null_edge: usize,
    pub dropped_low_agreement: usize,
    pub kept: usize,
    pub selected_camr: usize,
    pub selected_jamr: usize,
    pub threshold: f64,
    pub inclusive: bool,
    pub seed: u64,
    /// 20 bins of width 5 over the 0-100 agreement scale, filled for every
    /// pair that reached the agreement check.
    pub agreement_histogram: Vec<u64>,
}

/// The full pipeline over aligned parser-output blocks: validity filter,
/// agreement filter, ratio mix.
pub fn curate(
    camr_blocks: &[String],
    jamr_blocks: &[String],
    spec: &MixSpec,
    threshold: f64,
    inclusive: bool,
    score_opts: &ScoreOptions,
) -> Result<(SilverSelection, CurationReport), SilverError> {
    if camr_blocks.len() != jamr_blocks.len() {
        return Err(SilverError::AlignmentMismatch {
            camr: camr_blocks.len(),
            jamr: jamr_blocks.len(),
        });
    }
    let mut report = CurationReport {
        total_pairs: camr_blocks.len(),
        dropped_invalid: 0,
        dropped_null_tag: 0,
        dropped_null_edge: 0,
        dropped_low_agreement: 0,
        kept: 0,
        selected_camr: 0,
        selected_jamr: 0,
        threshold,
        inclusive,
        seed: spec.seed,
        agreement_histogram: vec![0; AGREEMENT_BINS],
    };
    let mut kept = Vec::new();
    for (i, (camr, jamr)) in camr_blocks.iter().zip(jamr_blocks).enumerate() {
        let mut candidate = SilverCandidate::from_texts(camr, jamr);
        match validity_filter(&candidate) {
            Some(DropReason::Invalid) => report.dropped_invalid += 1,
            Some(DropReason::NullTag) => report.dropped_null_tag += 1,
            Some(DropReason::NullEdge) => report.dropped_null_edge += 1,
            Some(DropReason::LowAgreement) => unreachable!("not produced by validity_filter"),
            None => {
                let pair_opts = ScoreOptions {
                    seed: pair_seed(score_opts.seed, i),
                    ..*score_opts
                };
                let keep = agreement_filter(&mut candidate, threshold, inclusive, &pair_opts);
                if let Some(f) = candidate.agreement {
                    let bin = ((f / 5.0) as usize).min(AGREEMENT_BINS - 1);
                    report.agreement_histogram[bin] += 1;
                }
                if keep {
                    kept.push(candidate);
                } else {
                    report.dropped_low_agreement += 1;
                }
            }
        }
    }
    report.kept = kept.len();
    let selected = mix(&kept, spec)?;
    report.selected_camr = selected
        .iter()
        .filter(|(_, _, s)| *s == Source::Camr)
        .count();
    report.selected_jamr = selected.len() - report.selected_camr;
    Ok((selected, report))
}
