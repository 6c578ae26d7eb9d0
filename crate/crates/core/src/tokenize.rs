//! Character-level encoding for the external seq2seq model. Spaces become
//! `+`, relation labels and POS tags can be conflated into single
//! super-character tokens, and everything decodes back to the original text.

use std::collections::BTreeMap;

use crate::preprocess::SentenceRecord;

/// Atomic symbols forming one NMT input/output line.
pub type TokenSequence = Vec<String>;

#[derive(Debug, Clone, Copy, Default)]
pub struct AmrEncodeOptions {
    /// Emit each `:relation` as one token instead of single characters.
    pub super_relations: bool,
    /// Replace parens with depth-annotated tokens: `(` at nesting level 5
    /// becomes `*5*(`. Kept reproducible although it scored below baseline.
    pub depth_parens: bool,
}

fn is_relation_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '-'
}

/// Encodes one single-line variable-free AMR. Literal `+` is escaped as `\+`
/// so that the space marker stays unambiguous and decoding is exact.
pub fn encode_amr(line: &str, opts: &AmrEncodeOptions) -> TokenSequence {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut depth: i64 = 0;
    let mut in_quote = false;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' => tokens.push("+".to_string()),
            '+' => tokens.push("\\+".to_string()),
            '"' => {
                in_quote = !in_quote;
                tokens.push("\"".to_string());
            }
            '(' if !in_quote => {
                depth += 1;
                if opts.depth_parens {
                    tokens.push(format!("*{depth}*("));
                } else {
                    tokens.push("(".to_string());
                }
            }
            ')' if !in_quote => {
                if opts.depth_parens {
                    tokens.push(format!("*{depth}*)"));
                } else {
                    tokens.push(")".to_string());
                }
                depth -= 1;
            }
            ':' if !in_quote
                && opts.super_relations
                && chars.get(i + 1).copied().is_some_and(is_relation_char) =>
            {
                let mut rel = String::from(":");
                i += 1;
                while i < chars.len() && is_relation_char(chars[i]) {
                    rel.push(chars[i]);
                    i += 1;
                }
                tokens.push(rel);
                continue;
            }
            other => tokens.push(other.to_string()),
        }
        i += 1;
    }
    tokens
}

/// Encodes a cleaned sentence, words separated by `+`. With `with_pos`, each
/// word's tag is inserted as one super character right after the word's last
/// character; words with empty tags get none.
pub fn encode_sentence(record: &SentenceRecord, with_pos: bool) -> TokenSequence {
    let empty = Vec::new();
    let tags = match (&record.tags, with_pos) {
        (Some(tags), true) => tags,
        _ => &empty,
    };
    let mut tokens = Vec::new();
    for (i, word) in record.tokens.iter().enumerate() {
        if i > 0 {
            tokens.push("+".to_string());
        }
        for c in word.chars() {
            if c == '+' {
                tokens.push("\\+".to_string());
            } else {
                tokens.push(c.to_string());
            }
        }
        if let Some(tag) = tags.get(i) {
            if !tag.is_empty() {
                tokens.push(tag.clone());
            }
        }
    }
    tokens
}

fn depth_paren(token: &str) -> Option<char> {
    let rest = token.strip_prefix('*')?;
    let paren = if rest.ends_with("*(") {
        '('
    } else if rest.ends_with("*)") {
        ')'
    } else {
        return None;
    };
    let depth = &rest[..rest.len() - 2];
    if !depth.is_empty() && depth.parse::<i64>().is_ok() {
        Some(paren)
    } else {
        None
    }
}

/// Inverse of the encoders: `+` back to space, `\+` to a literal plus, depth
/// tokens to plain parens, everything else concatenated.
pub fn decode_amr(tokens: &[String]) -> String {
    let mut out = String::new();
    for token in tokens {
        match token.as_str() {
            "+" => out.push(' '),
            "\\+" => out.push('+'),
            t => match depth_paren(t) {
                Some(paren) => out.push(paren),
                None => out.push_str(t),
            },
        }
    }
    out
}

/// Space-joined file form of a token sequence, one sequence per line; this is
/// the interchange format with the NMT toolkit.
pub fn tokens_to_line(tokens: &[String]) -> String {
    tokens.join(" ")
}

pub fn line_to_tokens(line: &str) -> TokenSequence {
    line.split_whitespace().map(str::to_string).collect()
}

/// Symbol frequencies accumulated over a corpus of token sequences.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct Vocab {
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl Vocab {
    pub fn size(&self) -> usize {
        self.counts.len()
    }

    pub fn observe(&mut self, tokens: &[String]) {
        for t in tokens {
            *self.counts.entry(t.clone()).or_default() += 1;
        }
        self.total += tokens.len() as u64;
    }

    /// Symbols ordered by descending frequency, ties alphabetical.
    pub fn by_frequency(&self) -> Vec<(&str, u64)> {
        let mut items: Vec<(&str, u64)> =
            self.counts.iter().map(|(s, &n)| (s.as_str(), n)).collect();
        items.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        items
    }
}

pub fn build_vocab<'a>(corpus: impl IntoIterator<Item = &'a TokenSequence>) -> Vocab {
    let mut vocab = Vocab::default();
    for seq in corpus {
        vocab.observe(seq);
    }
    vocab
}

/// Parses the POS sidecar format: `token<TAB>tag` lines, a blank line between
/// sentences. A missing tag field means untagged.
pub fn parse_tag_sidecar(text: &str) -> Vec<Vec<(String, String)>> {
    let mut sentences = Vec::new();
    let mut current: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        match line.split_once('\t') {
            Some((token, tag)) => current.push((token.to_string(), tag.trim().to_string())),
            None => current.push((line.trim().to_string(), String::new())),
        }
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    sentences
}
