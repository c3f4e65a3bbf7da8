//! Base-segmented data: primary text with subscripted markables.
//!
//! `word_{id,wN}` marks a single token; `[multi word]_{id,wN-M}` marks a
//! bracketed group. A subscript on the last token of an unbracketed phrase
//! may declare a span that reaches back over preceding tokens
//! (`picked up_{e1,w2-3}`). Tokens are numbered from `w1`; sentence
//! punctuation forms its own tokens. A line whose first non-blank character
//! is `#` is a comment.

use crate::diagnostic::{Diagnostic, Location, Parsed, Stage};
use crate::model::{AnnotationDocument, Interval, Markable, Span};

use super::parse_interval;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Segmentation {
    pub tokens: Vec<String>,
    pub markables: Vec<Markable>,
}

impl From<Segmentation> for AnnotationDocument {
    fn from(s: Segmentation) -> Self {
        let mut doc = AnnotationDocument::new();
        doc.tokens = s.tokens;
        doc.markables = s.markables;
        doc
    }
}

const PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', '"', '(', ')'];

struct Scanner<'a> {
    chars: Vec<(usize, char)>,
    text: &'a str,
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.i + 1).map(|&(_, c)| c)
    }

    fn advance(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn loc(&self) -> Location {
        Location::new(self.line, self.col)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.i)
            .map(|&(o, _)| o)
            .unwrap_or(self.text.len())
    }

    fn at_subscript(&self) -> bool {
        self.peek() == Some('_') && self.peek2() == Some('{')
    }
}

/// Split a whitespace-free chunk into word and punctuation tokens.
fn split_chunk(chunk: &str) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in chunk.chars() {
        if PUNCT.contains(&c) {
            if !word.is_empty() {
                out.push((std::mem::take(&mut word), false));
            }
            out.push((c.to_string(), true));
        } else {
            word.push(c);
        }
    }
    if !word.is_empty() {
        out.push((word, false));
    }
    out
}

pub fn parse_base_segmentation(text: &str) -> Parsed<Segmentation> {
    let mut sc = Scanner {
        chars: text.char_indices().collect(),
        text,
        i: 0,
        line: 1,
        col: 1,
    };
    let mut seg = Segmentation::default();
    let mut diagnostics = Vec::new();
    // Tokens (1-based indices) produced by the most recent chunk or group.
    let mut last_group: Option<(u32, u32, bool)> = None;
    let mut at_line_start = true;

    while let Some(c) = sc.peek() {
        if c.is_whitespace() {
            if c == '\n' {
                at_line_start = true;
            }
            sc.advance();
            last_group = None;
            continue;
        }
        if c == '#' && at_line_start {
            while sc.peek().is_some_and(|c| c != '\n') {
                sc.advance();
            }
            continue;
        }
        at_line_start = false;
        if sc.at_subscript() {
            let loc = sc.loc();
            sc.advance();
            sc.advance();
            let start = sc.offset();
            while sc.peek().is_some_and(|c| c != '}' && c != '\n') {
                sc.advance();
            }
            let body = text[start..sc.offset()].to_string();
            if sc.peek() != Some('}') {
                diagnostics.push(
                    Diagnostic::error("VXS002", "unterminated subscript: missing `}`")
                        .at(loc)
                        .in_stage(Stage::Parse),
                );
                continue;
            }
            sc.advance();
            match last_group.take() {
                None => diagnostics.push(
                    Diagnostic::error("VXS003", "subscript does not follow a word")
                        .at(loc)
                        .in_stage(Stage::Parse),
                ),
                Some(group) => {
                    if let Some(m) = subscript_markable(&body, group, &loc, &mut diagnostics) {
                        if seg.markables.iter().any(|x| x.id == m.id) {
                            diagnostics.push(
                                Diagnostic::error(
                                    "VXS004",
                                    format!("duplicate markable `{}`", m.id),
                                )
                                .at(loc)
                                .in_stage(Stage::Parse),
                            );
                        } else {
                            seg.markables.push(m);
                        }
                    }
                }
            }
            continue;
        }
        if c == '[' {
            let loc = sc.loc();
            sc.advance();
            let start = sc.offset();
            while sc.peek().is_some_and(|c| c != ']') {
                sc.advance();
            }
            if sc.peek() != Some(']') {
                diagnostics.push(
                    Diagnostic::error("VXS002", "unterminated `[` group")
                        .at(loc)
                        .in_stage(Stage::Parse),
                );
                break;
            }
            let inner = &text[start..sc.offset()];
            sc.advance();
            let first = seg.tokens.len() as u32 + 1;
            for chunk in inner.split_whitespace() {
                seg.tokens
                    .extend(split_chunk(chunk).into_iter().map(|(t, _)| t));
            }
            let last = seg.tokens.len() as u32;
            last_group = (last >= first).then_some((first, last, true));
            continue;
        }
        let start = sc.offset();
        while let Some(c) = sc.peek() {
            if c.is_whitespace() || c == '[' || sc.at_subscript() {
                break;
            }
            sc.advance();
        }
        let chunk = &text[start..sc.offset()];
        let pieces = split_chunk(chunk);
        let base = seg.tokens.len() as u32;
        let words: Vec<u32> = pieces
            .iter()
            .enumerate()
            .filter(|(_, (_, punct))| !punct)
            .map(|(n, _)| base + n as u32 + 1)
            .collect();
        seg.tokens.extend(pieces.into_iter().map(|(t, _)| t));
        let last = seg.tokens.len() as u32;
        last_group = match (words.first(), words.last()) {
            (Some(&a), Some(&b)) => Some((a, b, false)),
            _ if last > base => Some((base + 1, last, false)),
            _ => None,
        };
    }

    Parsed {
        value: seg,
        diagnostics,
    }
}

fn subscript_markable(
    body: &str,
    (first, last, bracketed): (u32, u32, bool),
    loc: &Location,
    diagnostics: &mut Vec<Diagnostic>,
) -> Option<Markable> {
    let mut parts = body.split(',').map(str::trim);
    let id = parts.next().filter(|s| !s.is_empty());
    let span_items: Vec<&str> = parts.collect();
    let Some(id) = id else {
        diagnostics.push(
            Diagnostic::error("VXS002", "subscript without identifier")
                .at(loc.clone())
                .in_stage(Stage::Parse),
        );
        return None;
    };
    if span_items.is_empty() {
        diagnostics.push(
            Diagnostic::error(
                "VXS002",
                format!("subscript for `{}` without word span", id),
            )
            .at(loc.clone())
            .in_stage(Stage::Parse),
        );
        return None;
    }
    let mut intervals = Vec::new();
    for item in &span_items {
        match parse_interval(item) {
            Some(iv) => intervals.push(iv),
            None => {
                diagnostics.push(
                    Diagnostic::error("VXS002", format!("bad span `{}` in subscript", item))
                        .at(loc.clone())
                        .in_stage(Stage::Parse),
                );
                return None;
            }
        }
    }
    let span = Span(intervals);
    let actual = Span(vec![Interval::new(first, last)]);
    let consistent = if bracketed {
        span == actual
    } else {
        // trailing subscript: the declared span must end on the marked token
        span.max_index() == Some(last) && span.min_index().is_some_and(|m| m >= 1)
    };
    if !consistent {
        diagnostics.push(
            Diagnostic::error(
                "VXS001",
                format!("`{}` declares {} but is written at {}", id, span, actual),
            )
            .at(loc.clone())
            .about(id)
            .in_stage(Stage::Parse),
        );
        return None;
    }
    Some(Markable {
        id: id.to_string(),
        span,
    })
}

/// Render tokens and markables back into subscripted text.
pub fn serialize_base_segmentation(tokens: &[String], markables: &[Markable]) -> String {
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    let mut covered = vec![false; tokens.len() + 1];
    let mut opens: Vec<Vec<usize>> = vec![Vec::new(); tokens.len() + 2];
    let mut trailing: Vec<Vec<&Markable>> = vec![Vec::new(); tokens.len() + 2];

    for (n, m) in markables.iter().enumerate() {
        let Some(end) = m.span.max_index().map(|e| e as usize) else {
            continue;
        };
        if end == 0 || end > tokens.len() {
            continue;
        }
        let iv = m.span.intervals();
        let simple = iv.len() == 1 && (iv[0].start..=iv[0].end).all(|i| !covered[i as usize]);
        if simple && iv[0].start != iv[0].end {
            for i in iv[0].start..=iv[0].end {
                covered[i as usize] = true;
            }
            opens[iv[0].start as usize].push(n);
        } else {
            trailing[end].push(m);
        }
    }

    let mut group: Option<(usize, usize, Vec<String>)> = None;
    for (k, token) in tokens.iter().enumerate() {
        let index = k + 1;
        if let Some(&n) = opens[index].first() {
            let end = markables[n].span.max_index().unwrap() as usize;
            group = Some((n, end, Vec::new()));
        }
        if let Some((n, end, words)) = group.as_mut() {
            words.push(token.clone());
            if *end == index {
                let m = &markables[*n];
                out.push(format!("[{}]_{{{},{}}}", words.join(" "), m.id, m.span));
                group = None;
            }
            continue;
        }
        let mut text = token.clone();
        for m in &trailing[index] {
            text.push_str(&format!("_{{{},{}}}", m.id, m.span));
        }
        out.push(text);
    }
    out.join(" ")
}
