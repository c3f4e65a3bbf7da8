//! Known defects in the reference transcription of the dishwasher narrative,
//! and the autocorrections applied to them.
//!
//! * `VXE001`: the wash action's agent is written `#5`. Normalization gives a
//!   bare numeric reference the prefix of the nearest preceding reference to
//!   an object (`#5` becomes `#x5`).
//! * `VXE002`: the printed identity form for `aL2` reads `x6=x1` while the
//!   annotation and the unified form have `x6=x2`. The annotation is
//!   authoritative, so nothing is rewritten; strict mode reports it.

use crate::diagnostic::{Diagnostic, Stage};
use crate::model::{AnnotationDocument, Category, LinkAnnotation, Value};
use crate::schema::CategorySchema;
use crate::validate::is_bare_numeric;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erratum {
    pub code: &'static str,
    pub summary: &'static str,
    pub printed: &'static str,
    pub corrected: &'static str,
}

pub const KNOWN_ERRATA: [Erratum; 2] = [
    Erratum {
        code: "VXE001",
        summary: "bare numeric reference in the wash action's agent",
        printed: "agent=\"#5\"",
        corrected: "agent=\"#x5\"",
    },
    Erratum {
        code: "VXE002",
        summary: "printed identity form for aL2 names the wrong antecedent",
        printed: "σ(aL2) := [x6=x1]",
        corrected: "σ(aL2) := [x6=x2]",
    },
];

fn identity_erratum_applies(link: &LinkAnnotation) -> bool {
    link.kind == Category::AnaLink
        && link.id == "aL2"
        && link.attr("anaphor") == Some(&Value::Ref("x6".into()))
        && link.attr("antecedent") == Some(&Value::Ref("x2".into()))
}

/// Rewrite bare numeric references, returning the corrected document and one
/// note per correction.
pub fn normalize(
    doc: &AnnotationDocument,
    schema: &CategorySchema,
) -> (AnnotationDocument, Vec<Diagnostic>) {
    let mut fixed = doc.clone();
    let mut notes = Vec::new();
    let default_prefix = schema
        .prefix_for(Category::Object)
        .unwrap_or("x")
        .to_string();
    let mut last_object_prefix: Option<String> = None;

    for a in fixed.annotations_mut() {
        let id = a.id().to_string();
        let origin = a.origin().cloned();
        for (name, value) in a.attributes_mut() {
            let targets: Vec<&mut String> = match value {
                Value::Ref(r) => vec![r],
                Value::RefSet(rs) => rs.iter_mut().collect(),
                Value::Literal(_) => Vec::new(),
            };
            for target in targets {
                if is_bare_numeric(target) {
                    let prefix = last_object_prefix
                        .clone()
                        .unwrap_or_else(|| default_prefix.clone());
                    let corrected = format!("{}{}", prefix, target);
                    let mut note = Diagnostic::note(
                        "VXN001",
                        format!(
                            "autocorrected {}=\"#{}\" to \"#{}\"",
                            name, target, corrected
                        ),
                    )
                    .about(id.clone())
                    .in_stage(Stage::Validate);
                    if let Some(loc) = &origin {
                        note = note.at(loc.clone());
                    }
                    notes.push(note);
                    *target = corrected;
                } else if schema.category_of(target) == Some(Category::Object) {
                    let cut = target
                        .find(|c: char| c.is_ascii_digit())
                        .unwrap_or(target.len());
                    last_object_prefix = Some(target[..cut].to_string());
                }
            }
        }
    }

    for link in fixed.links() {
        if identity_erratum_applies(link) {
            let mut note = Diagnostic::note(
                "VXN002",
                format!(
                    "known erratum: printed `{}`, using `{}`",
                    KNOWN_ERRATA[1].printed, KNOWN_ERRATA[1].corrected
                ),
            )
            .about(link.id.clone())
            .in_stage(Stage::Validate);
            if let Some(loc) = &link.origin.0 {
                note = note.at(loc.clone());
            }
            notes.push(note);
        }
    }
    (fixed, notes)
}

/// Document-level errata that validation cannot see on its own. Bare numeric
/// references are reported by validation itself (code `VXE001`).
pub fn check(doc: &AnnotationDocument) -> Vec<Diagnostic> {
    doc.links()
        .filter(|l| identity_erratum_applies(l))
        .map(|l| {
            let mut d = Diagnostic::warning(
                "VXE002",
                format!(
                    "{}: printed `{}`, annotation gives `{}`",
                    KNOWN_ERRATA[1].summary, KNOWN_ERRATA[1].printed, KNOWN_ERRATA[1].corrected
                ),
            )
            .about(l.id.clone())
            .in_stage(Stage::Validate);
            if let Some(loc) = &l.origin.0 {
                d = d.at(loc.clone());
            }
            d
        })
        .collect()
}
