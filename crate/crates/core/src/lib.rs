//! Non-neural machinery around a character-level seq2seq AMR parser: PENMAN
//! parsing and serialization, triple extraction, SMATCH scoring with
//! fine-grained breakdowns, pre-/postprocessing pipelines, tokenization into
//! character and super-character sequences, and silver-data curation.
//!
//! The translation model itself is external; this crate defines and produces
//! its exact input/output text formats and scores its output.

pub mod corpus;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod parse;
pub mod postprocess;
pub mod preprocess;
pub mod silver;
pub mod smatch;
pub mod synth;
pub mod tokenize;
pub mod tree;
pub mod triples;

pub use graph::{AmrGraph, ConstKind, Edge, Layout, NodeRef};
pub use parse::{parse_amr, ParseError};
pub use smatch::{smatch, smatch_with, ScoreOptions, ScoreReport, VariableMapping};
pub use tree::VariableFreeTree;
pub use triples::{to_triples, to_triples_literal, Triple, TripleKind, TripleSet};
