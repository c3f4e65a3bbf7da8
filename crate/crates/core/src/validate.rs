//! Abstract-syntax validation of annotation documents.
//!
//! | code   | check |
//! |--------|-------|
//! | VXL001 | reference names no annotation |
//! | VXL002 | identifier prefix unknown or disagrees with the record category |
//! | VXL003 | required attribute missing |
//! | VXL004 | value outside the attribute's domain |
//! | VXL005 | reference points at an annotation of the wrong category |
//! | VXL006 | reference set where a single reference is expected |
//! | VXL007 | span malformed or beyond the token count |
//! | VXL008 | span disagrees with the base-segmentation markable |
//! | VXL010 | relation without `pred` (warning) |
//! | VXL011 | pronoun without an anaphoric link (note) |
//! | VXE001 | bare numeric reference such as `#5` |

use std::fmt::Write as _;

use crate::diagnostic::{Diagnostic, Stage};
use crate::model::{Annotation, AnnotationDocument, Category, Value};
use crate::schema::{CategorySchema, ValueDomain};

pub use crate::schema::default_schema;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
    pub ok: bool,
}

impl ValidationReport {
    pub fn from_diagnostics(diagnostics: Vec<Diagnostic>) -> Self {
        let ok = !diagnostics.iter().any(Diagnostic::is_error);
        ValidationReport { diagnostics, ok }
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    pub fn extend(&mut self, more: impl IntoIterator<Item = Diagnostic>) {
        self.diagnostics.extend(more);
        self.ok = !self.diagnostics.iter().any(Diagnostic::is_error);
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            let _ = writeln!(out, "{}", d);
        }
        let errors = self.errors().count();
        let _ = writeln!(
            out,
            "{}: {} error(s), {} other diagnostic(s)",
            if self.ok { "ok" } else { "invalid" },
            errors,
            self.diagnostics.len() - errors
        );
        out
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            let _ = writeln!(out, "{}", d.to_record());
        }
        let _ = writeln!(out, "ok\t{}", self.ok);
        out
    }
}

/// True for references such as `#5` that lost their category prefix.
pub fn is_bare_numeric(target: &str) -> bool {
    !target.is_empty() && target.bytes().all(|b| b.is_ascii_digit())
}

struct Checker<'a> {
    doc: &'a AnnotationDocument,
    schema: &'a CategorySchema,
    out: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn push(&mut self, a: &Annotation, d: Diagnostic) {
        let mut d = d.about(a.id()).in_stage(Stage::Validate);
        if let Some(loc) = a.origin() {
            d = d.at(loc.clone());
        }
        self.out.push(d);
    }

    fn prefixes(&mut self) {
        for a in self.doc.annotations() {
            let record = a.category();
            match self.schema.category_of(a.id()) {
                None => self.push(
                    a,
                    Diagnostic::error(
                        "VXL002",
                        format!("identifier `{}` has no registered category prefix", a.id()),
                    ),
                ),
                Some(c) if !(c.is_a(record) || record.is_a(c)) => self.push(
                    a,
                    Diagnostic::error(
                        "VXL002",
                        format!(
                            "identifier `{}` names a {} but the record is `{}`",
                            a.id(),
                            c,
                            record
                        ),
                    ),
                ),
                Some(_) => {}
            }
        }
    }

    fn required(&mut self) {
        for a in self.doc.annotations() {
            for spec in self.schema.assignment(a.category()) {
                if !spec.required {
                    continue;
                }
                let present = match (a, spec.name.as_str()) {
                    (_, "identifier") | (Annotation::Entity(_), "target") => true,
                    (Annotation::Entity(e), "type") => e.kind.is_some(),
                    (Annotation::Entity(e), "pred") => e.pred.is_some(),
                    (Annotation::Entity(e), name) => e.attr(name).is_some(),
                    (Annotation::Link(l), name) => l.attr(name).is_some(),
                };
                if !present {
                    self.push(
                        a,
                        Diagnostic::error(
                            "VXL003",
                            format!("missing required attribute `{}`", spec.name),
                        ),
                    );
                }
            }
        }
    }

    fn domains(&mut self) {
        for a in self.doc.annotations() {
            let mut values: Vec<(&str, Value)> = Vec::new();
            if let Annotation::Entity(e) = a {
                if let Some(k) = &e.kind {
                    values.push(("type", Value::Literal(k.clone())));
                }
            }
            values.extend(a.attributes().iter().map(|(n, v)| (n.as_str(), v.clone())));
            for (name, value) in values {
                let Some(spec) = self.schema.attribute(a.category(), name) else {
                    continue;
                };
                match (&spec.domain, &value) {
                    (ValueDomain::OneOf(allowed), Value::Literal(s)) => {
                        if !allowed.iter().any(|x| x == s) {
                            self.push(
                                a,
                                Diagnostic::error(
                                    "VXL004",
                                    format!(
                                        "{}=\"{}\" is not one of {{{}}}",
                                        name,
                                        s,
                                        allowed.join(", ")
                                    ),
                                ),
                            );
                        }
                    }
                    (ValueDomain::OneOf(_), _) => self.push(
                        a,
                        Diagnostic::error(
                            "VXL004",
                            format!("`{}` takes a literal, not a reference", name),
                        ),
                    ),
                    (ValueDomain::Reference { .. }, Value::Literal(s)) => self.push(
                        a,
                        Diagnostic::error(
                            "VXL004",
                            format!("`{}` takes a `#id` reference, found \"{}\"", name, s),
                        ),
                    ),
                    (ValueDomain::Reference { multi: false, .. }, Value::RefSet(_)) => self.push(
                        a,
                        Diagnostic::error(
                            "VXL006",
                            format!("`{}` takes a single reference, not a set", name),
                        ),
                    ),
                    _ => {}
                }
            }
        }
    }

    fn resolution(&mut self) {
        for a in self.doc.annotations() {
            for (name, target) in a.references() {
                if is_bare_numeric(target) {
                    self.push(
                        a,
                        Diagnostic::error(
                            "VXE001",
                            format!(
                                "{}=\"#{}\" is a bare numeric reference without a category prefix",
                                name, target
                            ),
                        ),
                    );
                } else if self.doc.get(target).is_none() {
                    self.push(
                        a,
                        Diagnostic::error(
                            "VXL001",
                            format!("{}=\"#{}\" is a dangling reference", name, target),
                        ),
                    );
                }
            }
        }
    }

    fn reference_categories(&mut self) {
        for a in self.doc.annotations() {
            for (name, target) in a.references() {
                let Some(spec) = self.schema.attribute(a.category(), name) else {
                    continue;
                };
                let ValueDomain::Reference { targets, .. } = &spec.domain else {
                    continue;
                };
                let Some(referent) = self.doc.get(target) else {
                    continue;
                };
                let actual = referent.category();
                if !targets.iter().any(|t| actual.is_a(*t)) {
                    let wanted: Vec<&str> = targets.iter().map(|t| t.keyword()).collect();
                    self.push(
                        a,
                        Diagnostic::error(
                            "VXL005",
                            format!(
                                "`{}` must point at {}, but #{} is {}",
                                name,
                                wanted.join("/"),
                                target,
                                actual
                            ),
                        ),
                    );
                }
            }
        }
    }

    fn spans(&mut self) {
        for e in self.doc.entities() {
            let a = Annotation::Entity(e.clone());
            if !e.span.is_well_formed() {
                self.push(
                    &a,
                    Diagnostic::error("VXL007", format!("malformed span {}", e.span)),
                );
                continue;
            }
            if !self.doc.tokens.is_empty() {
                if let Some(max) = e.span.max_index() {
                    if max as usize > self.doc.tokens.len() {
                        self.push(
                            &a,
                            Diagnostic::error(
                                "VXL007",
                                format!(
                                    "span {} exceeds the {} tokens of the primary data",
                                    e.span,
                                    self.doc.tokens.len()
                                ),
                            ),
                        );
                        continue;
                    }
                }
            }
            if let Some(m) = self.doc.markable(&e.id) {
                if m.span != e.span {
                    self.push(
                        &a,
                        Diagnostic::error(
                            "VXL008",
                            format!(
                                "span {} disagrees with base segmentation {}",
                                e.span, m.span
                            ),
                        ),
                    );
                }
            }
        }
    }

    fn advisories(&mut self) {
        let anaphors: Vec<&str> = self
            .doc
            .links()
            .filter(|l| l.kind == Category::AnaLink)
            .flat_map(|l| l.attr("anaphor").map(|v| v.refs()).unwrap_or_default())
            .collect();
        for e in self.doc.entities() {
            let a = Annotation::Entity(e.clone());
            if e.category.is_a(Category::Relation) && e.pred.is_none() {
                self.push(&a, Diagnostic::warning("VXL010", "relation without `pred`"));
            }
            if e.kind.as_deref() == Some("unknown")
                && e.pred.as_deref() == Some("pro")
                && !anaphors.contains(&e.id.as_str())
            {
                self.push(
                    &a,
                    Diagnostic::note(
                        "VXL011",
                        "pronoun has no anaLink; add anaLink(aLn, anaphor, antecedent, identity)",
                    ),
                );
            }
        }
    }
}

/// Check a document against a schema. The checks run in a fixed order and
/// diagnostics are reported in that order, then in document order.
pub fn validate_document(doc: &AnnotationDocument, schema: &CategorySchema) -> ValidationReport {
    let mut c = Checker {
        doc,
        schema,
        out: Vec::new(),
    };
    c.prefixes();
    c.required();
    c.domains();
    c.resolution();
    c.reference_categories();
    c.spans();
    c.advisories();
    ValidationReport::from_diagnostics(c.out)
}
