//! Parser for PENMAN-notation AMR text, with `# ::key value` metadata.

use std::collections::HashSet;

use crate::graph::{AmrGraph, ConstKind, Edge, NodeRef};

/// 1-based position of a token in the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("{pos}: unbalanced parentheses")]
    UnbalancedParens { pos: Pos },
    #[error("{pos}: variable `{var}` defined more than once")]
    DuplicateVariableDefinition { var: String, pos: Pos },
    #[error("{pos}: relation `{relation}` has no value")]
    DanglingRelation { relation: String, pos: Pos },
    #[error("{pos}: reference to variable `{var}` before its definition")]
    UndefinedVariableReference { var: String, pos: Pos },
    #[error("{pos}: {msg}")]
    Syntax { msg: String, pos: Pos },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::UnbalancedParens { pos }
            | ParseError::DuplicateVariableDefinition { pos, .. }
            | ParseError::DanglingRelation { pos, .. }
            | ParseError::UndefinedVariableReference { pos, .. }
            | ParseError::Syntax { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Slash,
    /// `:label`, label stored with the colon.
    Rel(String),
    /// `"..."` with the quotes stripped.
    Str(String),
    Word(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let pos = Pos {
                line: self.line,
                col: self.col,
            };
            match c {
                c if c.is_whitespace() => {
                    self.bump();
                }
                '(' => {
                    self.bump();
                    out.push((Tok::LParen, pos));
                }
                ')' => {
                    self.bump();
                    out.push((Tok::RParen, pos));
                }
                '/' => {
                    self.bump();
                    out.push((Tok::Slash, pos));
                }
                '"' => {
                    self.bump();
                    let mut s = String::new();
                    let mut closed = false;
                    while let Some(c) = self.bump() {
                        if c == '\\' {
                            // keep the escape verbatim; `\"` must not terminate
                            s.push(c);
                            if let Some(next) = self.bump() {
                                s.push(next);
                            }
                        } else if c == '"' {
                            closed = true;
                            break;
                        } else {
                            s.push(c);
                        }
                    }
                    if !closed {
                        return Err(ParseError::Syntax {
                            msg: "unterminated string literal".into(),
                            pos,
                        });
                    }
                    out.push((Tok::Str(s), pos));
                }
                ':' => {
                    self.bump();
                    let mut s = String::from(":");
                    while let Some(&c) = self.chars.peek() {
                        if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                            break;
                        }
                        s.push(c);
                        self.bump();
                    }
                    if s.len() == 1 {
                        return Err(ParseError::Syntax {
                            msg: "empty relation label".into(),
                            pos,
                        });
                    }
                    out.push((Tok::Rel(s), pos));
                }
                _ => {
                    let mut s = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                            break;
                        }
                        s.push(c);
                        self.bump();
                    }
                    out.push((Tok::Word(s), pos));
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn looks_like_number(s: &str) -> bool {
    let body = s
        .strip_prefix('-')
        .or_else(|| s.strip_prefix('+'))
        .unwrap_or(s);
    if body.is_empty() {
        return false;
    }
    let mut parts = body.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next();
    if int.is_empty() || !int.chars().all(|c| c.is_ascii_digit()) {
        return false;
    }
    match frac {
        None => true,
        Some(f) => !f.is_empty() && f.chars().all(|c| c.is_ascii_digit()),
    }
}

const SYMBOL_CONSTANTS: &[&str] = &["-", "+", "imperative", "expressive", "interrogative"];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    /// Every variable defined anywhere in the text (pre-scanned), used to
    /// flag forward references.
    all_vars: HashSet<String>,
    defined: HashSet<String>,
    graph: AmrGraph,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.at)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn end_pos(&self) -> Pos {
        self.toks
            .last()
            .map(|(_, p)| Pos {
                line: p.line,
                col: p.col + 1,
            })
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    /// Consumes `( var / concept`, registers the instance, returns the variable.
    fn parse_header(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Some((Tok::LParen, _)) => {}
            Some((_, pos)) => {
                return Err(ParseError::Syntax {
                    msg: "expected `(`".into(),
                    pos,
                })
            }
            None => {
                return Err(ParseError::UnbalancedParens {
                    pos: self.end_pos(),
                })
            }
        }
        let (var, vpos) = match self.next() {
            Some((Tok::Word(w), p)) => (w, p),
            Some((_, pos)) => {
                return Err(ParseError::Syntax {
                    msg: "expected a variable after `(`".into(),
                    pos,
                })
            }
            None => {
                return Err(ParseError::UnbalancedParens {
                    pos: self.end_pos(),
                })
            }
        };
        match self.next() {
            Some((Tok::Slash, _)) => {}
            Some((_, pos)) => {
                return Err(ParseError::Syntax {
                    msg: format!("expected `/` after variable `{var}`"),
                    pos,
                })
            }
            None => {
                return Err(ParseError::UnbalancedParens {
                    pos: self.end_pos(),
                })
            }
        }
        let concept = match self.next() {
            Some((Tok::Word(w), _)) => w,
            Some((Tok::Str(s), _)) => s,
            Some((_, pos)) => {
                return Err(ParseError::Syntax {
                    msg: "expected a concept after `/`".into(),
                    pos,
                })
            }
            None => {
                return Err(ParseError::UnbalancedParens {
                    pos: self.end_pos(),
                })
            }
        };
        if !self.defined.insert(var.clone()) {
            return Err(ParseError::DuplicateVariableDefinition { var, pos: vpos });
        }
        self.graph.instances.push((var.clone(), concept));
        Ok(var)
    }

    /// Relations of `source` up to and including the closing paren.
    fn parse_body(&mut self, source: &str) -> Result<(), ParseError> {
        loop {
            match self.next() {
                Some((Tok::RParen, _)) => return Ok(()),
                Some((Tok::Rel(relation), rpos)) => {
                    let target = match self.peek() {
                        Some((Tok::LParen, _)) => {
                            let child = self.parse_header()?;
                            self.graph.edges.push(Edge::new(
                                source,
                                relation.clone(),
                                NodeRef::var(child.clone()),
                            ));
                            self.parse_body(&child)?;
                            continue;
                        }
                        Some((Tok::Str(_), _)) => {
                            let (tok, _) = self.next().unwrap();
                            match tok {
                                Tok::Str(s) => NodeRef::constant(s, ConstKind::Quoted),
                                _ => unreachable!(),
                            }
                        }
                        Some((Tok::Word(_), _)) => {
                            let (tok, wpos) = self.next().unwrap();
                            let w = match tok {
                                Tok::Word(w) => w,
                                _ => unreachable!(),
                            };
                            self.classify_word(w, wpos)?
                        }
                        Some((Tok::RParen, _)) | Some((Tok::Rel(_), _)) | None => {
                            return Err(ParseError::DanglingRelation {
                                relation,
                                pos: rpos,
                            })
                        }
                        Some((Tok::Slash, pos)) => {
                            return Err(ParseError::Syntax {
                                msg: "unexpected `/`".into(),
                                pos: *pos,
                            })
                        }
                    };
                    self.graph.edges.push(Edge::new(source, relation, target));
                }
                Some((Tok::LParen, pos)) => {
                    return Err(ParseError::Syntax {
                        msg: "expected a relation or `)`".into(),
                        pos,
                    })
                }
                Some((_, pos)) => {
                    return Err(ParseError::Syntax {
                        msg: "expected a relation or `)`".into(),
                        pos,
                    })
                }
                None => {
                    return Err(ParseError::UnbalancedParens {
                        pos: self.end_pos(),
                    })
                }
            }
        }
    }

    /// Bare (unquoted, unparenthesized) relation value. A token naming an
    /// already-defined variable is a re-entrant reference; numbers and the
    /// fixed symbol set are constants; a reference to a variable only defined
    /// later in the text is an error; everything else is a symbol constant.
    fn classify_word(&self, w: String, pos: Pos) -> Result<NodeRef, ParseError> {
        if looks_like_number(&w) {
            return Ok(NodeRef::constant(w, ConstKind::Number));
        }
        if SYMBOL_CONSTANTS.contains(&w.as_str()) {
            return Ok(NodeRef::constant(w, ConstKind::Symbol));
        }
        if self.defined.contains(&w) {
            return Ok(NodeRef::var(w));
        }
        if self.all_vars.contains(&w) {
            return Err(ParseError::UndefinedVariableReference { var: w, pos });
        }
        Ok(NodeRef::constant(w, ConstKind::Symbol))
    }
}

/// Splits leading `# ...` lines from the AMR body. Only `# ::key value` lines
/// contribute metadata; a single line may carry several ` ::key` fields.
fn split_metadata(text: &str) -> (Vec<(String, String)>, String) {
    let mut meta = Vec::new();
    let mut body = String::new();
    let mut in_body = false;
    for line in text.lines() {
        let trimmed = line.trim_start();
        if !in_body && trimmed.starts_with('#') {
            let rest = trimmed.trim_start_matches('#').trim_start();
            if let Some(stripped) = rest.strip_prefix("::") {
                for field in stripped.split(" ::") {
                    let field = field.trim();
                    if field.is_empty() {
                        continue;
                    }
                    match field.split_once(char::is_whitespace) {
                        Some((k, v)) => meta.push((k.to_string(), v.trim().to_string())),
                        None => meta.push((field.to_string(), String::new())),
                    }
                }
            }
            continue;
        }
        if !trimmed.is_empty() {
            in_body = true;
        }
        if in_body {
            body.push_str(line);
            body.push('\n');
        }
    }
    (meta, body)
}

/// Parses one AMR, optionally preceded by `# ::key value` metadata lines.
pub fn parse_amr(text: &str) -> Result<AmrGraph, ParseError> {
    let (metadata, body) = split_metadata(text);
    let toks = Lexer::new(&body).tokens()?;
    if toks.is_empty() {
        return Err(ParseError::Syntax {
            msg: "empty input".into(),
            pos: Pos { line: 1, col: 1 },
        });
    }

    // Pre-scan for `( word /` so forward references can be told apart from
    // symbol constants.
    let mut all_vars = HashSet::new();
    for w in toks.windows(3) {
        if let [(Tok::LParen, _), (Tok::Word(v), _), (Tok::Slash, _)] = w {
            all_vars.insert(v.clone());
        }
    }

    let mut parser = Parser {
        toks,
        at: 0,
        all_vars,
        defined: HashSet::new(),
        graph: AmrGraph::default(),
    };
    let top = parser.parse_header()?;
    parser.graph.top = top;
    let body_result = parser.parse_body(&parser.graph.top.clone());
    body_result?;
    if let Some((tok, pos)) = parser.peek() {
        return Err(match tok {
            Tok::RParen => ParseError::UnbalancedParens { pos: *pos },
            _ => ParseError::Syntax {
                msg: "trailing text after the AMR".into(),
                pos: *pos,
            },
        });
    }
    parser.graph.metadata = metadata;
    Ok(parser.graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Layout;

    pub(crate) const HEAT_WAVE: &str = r#"(a / affect-01
   :ARG0 (w / wave-04
            :ARG1 (h2 / heat)
            :location (c / country :wiki "France" :name (n / name :op1 "France")))
   :ARG1 (p / person
            :ARG0-of (s / strike-02
                        :mod (h / hunger-01
                                :ARG0 p))))"#;

    #[test]
    fn parses_heat_wave_shape() {
        let g = parse_amr(HEAT_WAVE).unwrap();
        assert_eq!(g.num_vars(), 8);
        assert_eq!(g.concept_of(&g.top), Some("affect-01"));
        // p is referenced twice: once as ARG1 of a, once as ARG0 of h
        let p_refs = g
            .edges
            .iter()
            .filter(|e| e.target == NodeRef::var("p"))
            .count();
        assert_eq!(p_refs, 2);
        g.validate().unwrap();
    }

    #[test]
    fn trivial_single_node() {
        let g = parse_amr("(a / alpha)").unwrap();
        assert_eq!(g.num_vars(), 1);
        assert!(g.edges.is_empty());
        assert_eq!(g.top, "a");
    }

    #[test]
    fn duplicate_variable_definition() {
        let err = parse_amr("(a / alpha :mod (a / beta))").unwrap_err();
        match err {
            ParseError::DuplicateVariableDefinition { var, pos } => {
                assert_eq!(var, "a");
                assert_eq!(pos.line, 1);
                assert_eq!(pos.col, 18);
            }
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn dangling_relation() {
        let err = parse_amr("(a / alpha :mod )").unwrap_err();
        assert!(matches!(err, ParseError::DanglingRelation { .. }));
        let err = parse_amr("(a / alpha :mod :quant 1)").unwrap_err();
        assert!(matches!(err, ParseError::DanglingRelation { .. }));
    }

    #[test]
    fn unbalanced_parens() {
        assert!(matches!(
            parse_amr("(a / alpha"),
            Err(ParseError::UnbalancedParens { .. })
        ));
        assert!(matches!(
            parse_amr("(a / alpha))"),
            Err(ParseError::UnbalancedParens { .. })
        ));
    }

    #[test]
    fn forward_reference_is_an_error() {
        let err = parse_amr("(a / alpha :mod b :arg (b / beta))").unwrap_err();
        assert!(matches!(err, ParseError::UndefinedVariableReference { .. }));
    }

    #[test]
    fn constant_classification() {
        let g = parse_amr(
            "(a / alpha :quant 5 :value -1.5 :polarity - :mode imperative :op1 \"New York\" :mod dog)",
        )
        .unwrap();
        let kinds: Vec<_> = g
            .edges
            .iter()
            .map(|e| match &e.target {
                NodeRef::Const { kind, .. } => *kind,
                NodeRef::Var(_) => panic!("no vars here"),
            })
            .collect();
        assert_eq!(
            kinds,
            vec![
                ConstKind::Number,
                ConstKind::Number,
                ConstKind::Symbol,
                ConstKind::Symbol,
                ConstKind::Quoted,
                ConstKind::Symbol,
            ]
        );
    }

    #[test]
    fn reentrant_reference_to_defined_variable() {
        let g = parse_amr("(a / alpha :ARG0 (b / beta) :ARG1 b)").unwrap();
        assert_eq!(g.edges[1].target, NodeRef::var("b"));
    }

    #[test]
    fn metadata_captured_and_echoed() {
        let text = "# ::id test.1 ::date 2017\n# ::snt Hunger strikers.\n(a / alpha)";
        let g = parse_amr(text).unwrap();
        assert_eq!(g.meta("id"), Some("test.1"));
        assert_eq!(g.meta("date"), Some("2017"));
        assert_eq!(g.meta("snt"), Some("Hunger strikers."));
        let block = g.to_corpus_block(Layout::SingleLine);
        assert!(block.contains("# ::id test.1\n"));
        assert!(block.contains("# ::snt Hunger strikers.\n"));
    }

    #[test]
    fn quoted_strings_keep_inner_form() {
        let g = parse_amr(r#"(c / country :wiki "San Jos\"e" :name (n / name))"#).unwrap();
        match &g.edges[0].target {
            NodeRef::Const { value, kind } => {
                assert_eq!(kind, &ConstKind::Quoted);
                assert_eq!(value, "San Jos\\\"e");
            }
            _ => panic!(),
        }
        // surface form restores the quotes verbatim
        assert!(g
            .serialize(Layout::SingleLine)
            .contains(r#":wiki "San Jos\"e""#));
    }

    #[test]
    fn error_positions_are_line_and_column() {
        let err = parse_amr("(a / alpha\n   :mod )").unwrap_err();
        let pos = err.pos();
        assert_eq!(pos.line, 2);
        assert_eq!(pos.col, 4);
    }
}
