//! pFormat concrete syntax.
//!
//! ```text
//! record := CATEGORY "(" id ("," positional)* ("," attr "=" quoted-value)* ")"
//! ```
//!
//! Commas between items are optional. For base categories the positional
//! items form the span (`w5`, `w2-3`, or several of them for a non-contiguous
//! markable); for `anaLink` they are anaphor, antecedent and relation type.
//! A `#` as the first non-blank character of a line starts a comment.

mod lexer;
mod segment;

pub use segment::{parse_base_segmentation, serialize_base_segmentation, Segmentation};

use crate::diagnostic::{Diagnostic, Location, Parsed, Stage};
use crate::model::{
    Annotation, AnnotationDocument, Category, EntityAnnotation, Interval, LinkAnnotation, Origin,
    Span, Value,
};

use lexer::{Lexer, Tok, Token};

/// Parse a single span item such as `w5` or `w2-3`.
pub fn parse_interval(text: &str) -> Option<Interval> {
    let body = text.strip_prefix('w')?;
    let (start, end) = match body.split_once('-') {
        Some((a, b)) => (a, b.strip_prefix('w').unwrap_or(b)),
        None => (body, body),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(start) || !digits(end) {
        return None;
    }
    let (start, end) = (start.parse().ok()?, end.parse().ok()?);
    (start >= 1 && start <= end).then_some(Interval::new(start, end))
}

enum Item {
    Positional(String, Location),
    Attribute(String, String, Location),
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    diagnostics: Vec<Diagnostic>,
    known: &'static [&'static str],
}

/// Content-attribute names declared by the default schema.
const KNOWN_ATTRIBUTES: &[&str] = &[
    "agent",
    "anaphor",
    "antecedent",
    "eventID",
    "physObj",
    "pred",
    "relType",
    "relatedTo",
    "relatedToEventID",
    "source",
    "theme",
    "type",
];

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token<'a>> {
        self.tokens.get(self.pos + offset)
    }

    fn bump(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn at_record_start(&self) -> bool {
        matches!(self.peek().map(|t| &t.tok), Some(Tok::Word(_)))
            && matches!(self.peek_at(1).map(|t| &t.tok), Some(Tok::Open))
    }

    fn error(&mut self, code: &'static str, loc: Location, msg: impl Into<String>) {
        self.diagnostics
            .push(Diagnostic::error(code, msg).at(loc).in_stage(Stage::Parse));
    }

    fn warn(&mut self, code: &'static str, loc: Location, msg: impl Into<String>) {
        self.diagnostics.push(
            Diagnostic::warning(code, msg)
                .at(loc)
                .in_stage(Stage::Parse),
        );
    }

    /// Skip to just after the next `)` or to the start of the next record.
    fn recover(&mut self) {
        while let Some(t) = self.peek() {
            if matches!(t.tok, Tok::Close) {
                self.pos += 1;
                return;
            }
            if self.at_record_start() {
                return;
            }
            self.pos += 1;
        }
    }

    fn parse_items(&mut self, start: &Location) -> Option<Vec<Item>> {
        let mut items = Vec::new();
        loop {
            let Some(tok) = self.peek().cloned() else {
                self.error("VXP001", start.clone(), "unterminated record: missing `)`");
                return None;
            };
            match tok.tok {
                Tok::Close => {
                    self.pos += 1;
                    return Some(items);
                }
                Tok::Comma => {
                    self.pos += 1;
                }
                Tok::Open => {
                    self.error("VXP001", tok.loc, "unbalanced `(` inside record");
                    self.recover();
                    return None;
                }
                Tok::Equals => {
                    self.error("VXP007", tok.loc, "`=` without attribute name");
                    self.recover();
                    return None;
                }
                Tok::Str(_) => {
                    self.error("VXP007", tok.loc, "quoted value without attribute name");
                    self.recover();
                    return None;
                }
                Tok::Unterminated => {
                    self.error("VXP008", tok.loc, "unterminated quoted value");
                    self.recover();
                    return None;
                }
                Tok::Word(w) => {
                    if self.at_record_start() {
                        self.error("VXP001", start.clone(), "unterminated record: missing `)`");
                        return None;
                    }
                    self.pos += 1;
                    if matches!(self.peek().map(|t| &t.tok), Some(Tok::Equals)) {
                        self.pos += 1;
                        match self.bump() {
                            Some(Token {
                                tok: Tok::Str(v), ..
                            }) => {
                                items.push(Item::Attribute(w.to_string(), v, tok.loc));
                            }
                            Some(Token {
                                tok: Tok::Word(v),
                                loc,
                            }) => {
                                self.warn("VXP009", loc, format!("unquoted value for `{}`", w));
                                items.push(Item::Attribute(w.to_string(), v.to_string(), tok.loc));
                            }
                            Some(Token {
                                tok: Tok::Unterminated,
                                loc,
                            }) => {
                                self.error("VXP008", loc, "unterminated quoted value");
                                self.recover();
                                return None;
                            }
                            other => {
                                let loc = other.map(|t| t.loc).unwrap_or(tok.loc);
                                self.error("VXP007", loc, format!("missing value for `{}`", w));
                                self.recover();
                                return None;
                            }
                        }
                    } else {
                        items.push(Item::Positional(w.to_string(), tok.loc));
                    }
                }
            }
        }
    }

    fn parse_record(&mut self) -> Option<Annotation> {
        let head = self.bump()?;
        let Tok::Word(keyword) = head.tok else {
            unreachable!("record start checked by caller")
        };
        self.pos += 1; // `(`
        let items = self.parse_items(&head.loc)?;

        let Some(category) = Category::from_keyword(keyword) else {
            self.error(
                "VXP006",
                head.loc,
                format!("unknown record category `{}`", keyword),
            );
            return None;
        };

        let mut items = items.into_iter();
        let id = match items.next() {
            Some(Item::Positional(id, _)) => id,
            _ => {
                self.error(
                    "VXP002",
                    head.loc,
                    format!("`{}` record without identifier", keyword),
                );
                return None;
            }
        };

        let origin = Origin(Some(head.loc.clone()));
        let mut positional = Vec::new();
        let mut attributes: Vec<(String, String, Location)> = Vec::new();
        for item in items {
            match item {
                Item::Positional(p, loc) => positional.push((p, loc)),
                Item::Attribute(name, value, loc) => {
                    if !self.known.contains(&name.as_str()) {
                        self.warn(
                            "VXP005",
                            loc.clone(),
                            format!("unknown attribute `{}`", name),
                        );
                    }
                    if attributes.iter().any(|(n, _, _)| *n == name) {
                        self.warn(
                            "VXP010",
                            loc,
                            format!("repeated attribute `{}` ignored", name),
                        );
                        continue;
                    }
                    attributes.push((name, value, loc));
                }
            }
        }

        if category.is_link() {
            let mut link = LinkAnnotation::new(id, category);
            link.origin = origin;
            if !positional.is_empty() {
                if category != Category::AnaLink || positional.len() > 3 {
                    let loc = positional[0].1.clone();
                    self.error(
                        "VXP004",
                        loc,
                        format!("unexpected positional arguments in `{}`", keyword),
                    );
                    return None;
                }
                link.positional = true;
                let names = ["anaphor", "antecedent", "relType"];
                for ((arg, _), name) in positional.into_iter().zip(names) {
                    let value = if name == "relType" {
                        Value::Literal(arg)
                    } else {
                        Value::Ref(arg.strip_prefix('#').unwrap_or(&arg).to_string())
                    };
                    link.attributes.push((name.to_string(), value));
                }
            }
            for (name, raw, _) in attributes {
                if link.attr(&name).is_some() {
                    continue;
                }
                link.attributes.push((name, Value::parse(&raw)));
            }
            return Some(link.into());
        }

        let mut intervals = Vec::new();
        for (p, loc) in positional {
            match parse_interval(&p) {
                Some(iv) => intervals.push(iv),
                None => {
                    self.error(
                        "VXP004",
                        loc,
                        format!("bad span `{}`: expected wN or wN-M", p),
                    );
                    return None;
                }
            }
        }
        let mut entity = EntityAnnotation::new(id, category, Span(intervals));
        entity.origin = origin;
        for (name, raw, _) in attributes {
            match name.as_str() {
                "type" => entity.kind = Some(raw),
                "pred" => entity.pred = Some(raw),
                _ => entity.attributes.push((name, Value::parse(&raw))),
            }
        }
        Some(entity.into())
    }

    fn run(mut self) -> Parsed<AnnotationDocument> {
        let mut doc = AnnotationDocument::new();
        while let Some(tok) = self.peek().cloned() {
            if self.at_record_start() {
                if let Some(annotation) = self.parse_record() {
                    let loc = annotation.origin().cloned().unwrap_or(tok.loc);
                    let id = annotation.id().to_string();
                    if doc.push(annotation).is_err() {
                        self.error("VXP003", loc, format!("duplicate annotation id `{}`", id));
                    }
                }
                continue;
            }
            match tok.tok {
                Tok::Close => self.error("VXP001", tok.loc, "unbalanced `)`"),
                Tok::Unterminated => self.error("VXP008", tok.loc, "unterminated quoted value"),
                _ => self.error(
                    "VXP011",
                    tok.loc,
                    "expected a record such as `object(x1, w1, ...)`",
                ),
            }
            self.pos += 1;
            self.recover_top();
        }
        Parsed {
            value: doc,
            diagnostics: self.diagnostics,
        }
    }

    fn recover_top(&mut self) {
        while self.peek().is_some() && !self.at_record_start() {
            self.pos += 1;
        }
    }
}

/// Parse pFormat text into a document. Records with errors are dropped and
/// reported; everything else is kept in source order.
pub fn parse_pformat(text: &str) -> Parsed<AnnotationDocument> {
    Parser {
        tokens: Lexer::new(text).tokenize(),
        pos: 0,
        diagnostics: Vec::new(),
        known: KNOWN_ATTRIBUTES,
    }
    .run()
}

fn quote(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn is_bare(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('#')
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | '=' | '"'))
}

fn positional_ana_args(link: &LinkAnnotation) -> Option<[&str; 3]> {
    if !link.positional || link.kind != Category::AnaLink || link.attributes.len() != 3 {
        return None;
    }
    match (
        link.attr("anaphor")?,
        link.attr("antecedent")?,
        link.attr("relType")?,
    ) {
        (Value::Ref(a), Value::Ref(b), Value::Literal(r))
            if is_bare(a) && is_bare(b) && is_bare(r) =>
        {
            Some([a, b, r])
        }
        _ => None,
    }
}

/// Render one annotation as a canonical pFormat record.
pub fn serialize_annotation(annotation: &Annotation) -> String {
    let mut parts: Vec<String> = vec![annotation.id().to_string()];
    match annotation {
        Annotation::Entity(e) => {
            if !e.span.is_null() {
                parts.push(e.span.to_string());
            }
            if let Some(t) = &e.kind {
                parts.push(format!("type={}", quote(t)));
            }
            if let Some(p) = &e.pred {
                parts.push(format!("pred={}", quote(p)));
            }
            for (name, value) in &e.attributes {
                parts.push(format!("{}={}", name, quote(&value.to_string())));
            }
        }
        Annotation::Link(l) => match positional_ana_args(l) {
            Some(args) => parts.extend(args.iter().map(|a| a.to_string())),
            None => {
                for (name, value) in &l.attributes {
                    parts.push(format!("{}={}", name, quote(&value.to_string())));
                }
            }
        },
    }
    format!("{}({})", annotation.category(), parts.join(", "))
}

/// Canonical text: one record per line.
pub fn serialize_pformat(doc: &AnnotationDocument) -> String {
    let mut out = String::new();
    for a in doc.annotations() {
        out.push_str(&serialize_annotation(a));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_ok(text: &str) -> AnnotationDocument {
        let parsed = parse_pformat(text);
        assert!(parsed.diagnostics.is_empty(), "{:?}", parsed.diagnostics);
        parsed.value
    }

    #[test]
    fn known_attributes_match_default_schema() {
        assert_eq!(
            crate::schema::default_schema().known_attributes(),
            KNOWN_ATTRIBUTES
        );
    }

    #[test]
    fn object_record() {
        let doc = parse_ok(r#"object(x1, w1, type="human", pred="mary")"#);
        let x1 = doc.entity("x1").unwrap();
        assert_eq!(x1.category, Category::Object);
        assert_eq!(x1.span, Span::single(1));
        assert_eq!(x1.kind.as_deref(), Some("human"));
        assert_eq!(x1.pred.as_deref(), Some("mary"));
        assert!(x1.attributes.is_empty());
    }

    #[test]
    fn action_record_with_references() {
        let doc = parse_ok(
            r##"action(e1, w2-3, type="transition", pred="pickUp", agent="#x1", physObj="#x2")"##,
        );
        let e1 = doc.entity("e1").unwrap();
        assert_eq!(e1.span, Span(vec![Interval::new(2, 3)]));
        assert_eq!(e1.attr("agent"), Some(&Value::Ref("x1".into())));
        assert_eq!(e1.attr("physObj"), Some(&Value::Ref("x2".into())));
    }

    #[test]
    fn unterminated_record_is_an_error() {
        let parsed = parse_pformat(r#"object(x1, w1, type="human""#);
        assert!(parsed.value.annotations().is_empty());
        assert_eq!(parsed.diagnostics.len(), 1);
        assert_eq!(parsed.diagnostics[0].code, "VXP001");
        assert_eq!(parsed.diagnostics[0].location, Some(Location::new(1, 1)));
    }

    #[test]
    fn missing_commas_are_accepted() {
        let doc = parse_ok(
            "action(e2, w10\ntype=\"transition\", pred=\"put\"\nagent=\"#x1\", relatedTo=\"#x4\")",
        );
        let e2 = doc.entity("e2").unwrap();
        assert_eq!(e2.pred.as_deref(), Some("put"));
        assert_eq!(e2.attr("relatedTo"), Some(&Value::Ref("x4".into())));
    }

    #[test]
    fn positional_analink() {
        let doc = parse_ok("anaLink(aL1, x4, x2, identity)");
        let l = doc.links().next().unwrap();
        assert_eq!(l.attr("anaphor"), Some(&Value::Ref("x4".into())));
        assert_eq!(l.attr("antecedent"), Some(&Value::Ref("x2".into())));
        assert_eq!(l.rel_type(), Some("identity"));
        assert_eq!(
            serialize_annotation(&doc.annotations()[0]),
            "anaLink(aL1, x4, x2, identity)"
        );
    }

    #[test]
    fn reference_sets_keep_braces() {
        let text = r##"sLink(sL1, eventID="#e2", relatedTo="{#e3,#e4}", relType="purpose")"##;
        let doc = parse_ok(text);
        assert_eq!(serialize_pformat(&doc), format!("{}\n", text));
    }

    #[test]
    fn empty_document_serializes_to_nothing() {
        assert_eq!(serialize_pformat(&AnnotationDocument::new()), "");
        assert!(parse_ok("# just a comment\n\n").annotations().is_empty());
    }

    #[test]
    fn error_codes() {
        let cases = [
            ("object()", "VXP002"),
            ("object(x1, w1) object(x1, w2)", "VXP003"),
            ("object(x1, wx)", "VXP004"),
            ("object(x1, w3-1)", "VXP004"),
            ("widget(x1, w1)", "VXP006"),
            ("object(x1, w1))", "VXP001"),
            ("object(x1, type=\"a)", "VXP008"),
        ];
        for (text, code) in cases {
            let parsed = parse_pformat(text);
            assert!(
                parsed
                    .diagnostics
                    .iter()
                    .any(|d| d.code == code && d.is_error() && d.location.is_some()),
                "{text}: {:?}",
                parsed.diagnostics
            );
        }
    }

    #[test]
    fn unknown_attribute_warns() {
        let parsed = parse_pformat(r#"object(x1, w1, type="human", colour="red")"#);
        assert_eq!(parsed.value.annotations().len(), 1);
        assert_eq!(parsed.diagnostics.len(), 1);
        assert_eq!(parsed.diagnostics[0].code, "VXP005");
        assert!(!parsed.diagnostics[0].is_error());
    }

    #[test]
    fn recovery_continues_with_next_record() {
        let parsed =
            parse_pformat("object(x1, w1, type=\"human\"\nobject(x2, w5, type=\"physobj\")");
        assert_eq!(parsed.value.annotations().len(), 1);
        assert_eq!(parsed.value.annotations()[0].id(), "x2");
        assert_eq!(parsed.diagnostics[0].code, "VXP001");
    }

    #[test]
    fn escaped_quotes_round_trip() {
        let mut e = EntityAnnotation::new("x1", Category::Object, Span::null())
            .with_type(r#"say "hi" \ bye"#);
        e.pred = Some("q".into());
        let doc = AnnotationDocument::from_annotations([e.into()]).unwrap();
        let text = serialize_pformat(&doc);
        assert_eq!(parse_ok(&text), doc);
    }

    #[test]
    fn non_contiguous_span() {
        let doc = parse_ok(r#"object(x1, w1, w3-4, type="t")"#);
        let x1 = doc.entity("x1").unwrap();
        assert_eq!(x1.span.intervals().len(), 2);
        assert_eq!(serialize_pformat(&doc), "object(x1, w1,w3-4, type=\"t\")\n");
        assert_eq!(parse_ok(&serialize_pformat(&doc)), doc);
    }
}
