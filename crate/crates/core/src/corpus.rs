//! Streaming corpus IO: blank-line separated records of metadata plus AMR.

use std::io::BufRead;

use crate::graph::AmrGraph;
use crate::parse::{parse_amr, ParseError};

/// A record that failed to parse; reading continues past it.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockError {
    pub block_index: usize,
    pub error: ParseError,
    pub text: String,
}

impl std::fmt::Display for BlockError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "block {}: {}", self.block_index, self.error)
    }
}

/// Iterates over raw blocks (consecutive non-blank lines) of a corpus stream.
/// Yields `(block_index, text)`; IO errors end the stream after being yielded.
pub struct BlockReader<R> {
    reader: R,
    index: usize,
    done: bool,
}

impl<R: BufRead> BlockReader<R> {
    pub fn new(reader: R) -> Self {
        BlockReader {
            reader,
            index: 0,
            done: false,
        }
    }
}

impl<R: BufRead> Iterator for BlockReader<R> {
    type Item = std::io::Result<(usize, String)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut block = String::new();
        let mut line = String::new();
        loop {
            line.clear();
            match self.reader.read_line(&mut line) {
                Ok(0) => {
                    self.done = true;
                    break;
                }
                Ok(_) => {
                    if line.trim().is_empty() {
                        if block.is_empty() {
                            continue; // skip runs of blank lines
                        }
                        break;
                    }
                    block.push_str(&line);
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
        if block.is_empty() {
            return None;
        }
        let idx = self.index;
        self.index += 1;
        Some(Ok((idx, block)))
    }
}

/// One item of [`read_corpus`]: a parsed graph or a recorded per-block error.
pub type CorpusItem = Result<AmrGraph, BlockError>;

/// Streams AMRs out of a corpus. Blocks made only of `#` comment lines (the
/// release-file headers) are skipped; malformed blocks become error records.
pub fn read_corpus<R: BufRead>(reader: R) -> impl Iterator<Item = std::io::Result<CorpusItem>> {
    BlockReader::new(reader).filter_map(|block| match block {
        Err(e) => Some(Err(e)),
        Ok((index, text)) => {
            if text.lines().all(|l| l.trim_start().starts_with('#')) {
                return None;
            }
            match parse_amr(&text) {
                Ok(g) => Some(Ok(Ok(g))),
                Err(error) => Some(Ok(Err(BlockError {
                    block_index: index,
                    error,
                    text,
                }))),
            }
        }
    })
}

/// Collects a whole corpus, splitting parses from error records.
pub fn collect_corpus<R: BufRead>(reader: R) -> std::io::Result<(Vec<AmrGraph>, Vec<BlockError>)> {
    let mut graphs = Vec::new();
    let mut errors = Vec::new();
    for item in read_corpus(reader) {
        match item? {
            Ok(g) => graphs.push(g),
            Err(e) => errors.push(e),
        }
    }
    Ok((graphs, errors))
}
