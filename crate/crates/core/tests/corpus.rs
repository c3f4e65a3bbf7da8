//! The dishwasher narrative end to end: translation, composition, identity,
//! temporal order and interpretation against the bundled voxicon.

use std::collections::BTreeSet;

use voxml_core::errata;
use voxml_core::interpreter::interpret_document;
use voxml_core::pformat::{parse_base_segmentation, parse_pformat};
use voxml_core::semantics::{
    apply_identities, compose, sigma, temporal_order, translate_document, SemanticForm,
};
use voxml_core::{default_schema, validate_document, AnnotationDocument, Voxicon};

const SEGMENTATION: &str = include_str!("../../../corpus/narrative1.vxs");
const ANNOTATIONS: &str = include_str!("../../../corpus/narrative1.vxa");
const CYCLE: &str = include_str!("../../../corpus/cycle.vxa");

fn raw_document(extra: &[&str]) -> AnnotationDocument {
    let seg = parse_base_segmentation(SEGMENTATION);
    assert!(seg.diagnostics.is_empty(), "{:?}", seg.diagnostics);
    let mut doc: AnnotationDocument = seg.value.into();
    for text in std::iter::once(&ANNOTATIONS).chain(extra) {
        let parsed = parse_pformat(text);
        assert!(!parsed.has_errors(), "{:?}", parsed.diagnostics);
        doc.merge(parsed.value).unwrap();
    }
    doc
}

fn document(extra: &[&str]) -> AnnotationDocument {
    errata::normalize(&raw_document(extra), &default_schema()).0
}

fn sigma_of(doc: &AnnotationDocument, id: &str) -> SemanticForm {
    sigma(doc.get(id).unwrap()).unwrap()
}

/// Condition strings of a form, compared as a set.
fn conds(f: &SemanticForm) -> BTreeSet<String> {
    f.conditions.iter().map(|c| c.to_string()).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[test]
fn corpus_validates_after_normalization() {
    let report = validate_document(&document(&[]), &default_schema());
    assert!(report.ok, "{}", report.to_text());
}

#[test]
fn strict_reports_exactly_the_two_known_defects() {
    let doc = raw_document(&[]);
    let mut report = validate_document(&doc, &default_schema());
    report.extend(errata::check(&doc));
    let defects: Vec<&str> = report
        .diagnostics
        .iter()
        .map(|d| d.code)
        .filter(|c| c.starts_with("VXE"))
        .collect();
    assert_eq!(defects, ["VXE001", "VXE002"]);
    assert!(!report.ok);
}

#[test]
fn base_forms_of_the_first_sentence() {
    let doc = document(&[]);
    assert_eq!(
        sigma_of(&doc, "x1").to_string(),
        "{x1}[human(x1), mary(x1)]"
    );
    assert_eq!(
        sigma_of(&doc, "x3").to_string(),
        "{x3}[physObj(x3), table(x3)]"
    );
    assert_eq!(
        sigma_of(&doc, "e1").to_string(),
        "{e1}[action(e1), agent(e1,x1), pickUp(e1), theme(e1,x2), transition(e1)]"
    );
    assert_eq!(
        sigma_of(&doc, "r1").to_string(),
        "{r1}[relation(r1), source(r1,x3)]"
    );
    // x2 carries both of its type annotations; the printed form lists two of them.
    let x2 = conds(&sigma_of(&doc, "x2"));
    assert!(x2.is_superset(&set(&["physObj(x2)", "glass(x2)"])));
}

#[test]
fn composition_of_the_first_sentence() {
    let doc = document(&[]);
    let forms: Vec<SemanticForm> = ["x1", "x2", "x3", "e1", "r1"]
        .iter()
        .map(|id| sigma_of(&doc, id))
        .collect();
    let a1 = compose(&forms);
    let referents: Vec<String> = a1.referents.iter().map(|v| v.to_string()).collect();
    assert_eq!(referents, ["e1", "r1", "x1", "x2", "x3"]);
    let expected = set(&[
        "human(x1)",
        "mary(x1)",
        "physObj(x2)",
        "glass(x2)",
        "physObj(x3)",
        "table(x3)",
        "action(e1)",
        "transition(e1)",
        "pickUp(e1)",
        "agent(e1,x1)",
        "theme(e1,x2)",
        "relation(r1)",
        "source(r1,x3)",
    ]);
    assert_eq!(expected.len(), 13);
    assert!(conds(&a1).is_superset(&expected));
    let extra: Vec<String> = conds(&a1).difference(&expected).cloned().collect();
    assert_eq!(extra, ["artifact(x2)"]);
}

#[test]
fn temporal_links_give_a_chain() {
    let form = translate_document(&document(&[])).unwrap();
    for c in [
        "τ(e1)≺τ(e2)",
        "τ(e2)≺τ(e3)",
        "τ(e3)≺τ(e4)",
        "pickUp(e1)",
        "put(e2)",
        "wash(e3)",
        "dry(e4)",
    ] {
        assert!(conds(&form).contains(c), "{}", c);
    }
    let order = temporal_order(&form).unwrap();
    assert_eq!(order.to_string(), "τ(e1)≺τ(e2)≺τ(e3)≺τ(e4)");
    assert!(order.is_total());
}

#[test]
fn purpose_link() {
    let form = translate_document(&document(&[])).unwrap();
    assert!(conds(&form).contains("purpose(e2,{e3,e4})"));
}

#[test]
fn identity_closure() {
    let form = apply_identities(&translate_document(&document(&[])).unwrap()).unwrap();
    let c = conds(&form);
    assert!(c.is_superset(&set(&["glass(x2)", "x4=x2", "x6=x2"])));
    assert!(c.contains("theme(e2,x2)"));
    assert!(!c
        .iter()
        .any(|s| s.contains("theme(e2,x4)") || s.contains("x6=x1")));
    assert!(form.undeclared().is_empty());
}

#[test]
fn interpretation() {
    let vx = Voxicon::bundled();
    let result = interpret_document(&document(&[]), &vx, None);
    assert!(result.consistent, "{}", result.to_text());
    assert_eq!(result.programs.len(), 4);
    assert_eq!(
        result.program("e1").unwrap().to_string(),
        "grasp(x1,x2); while(hold(x1,x2), move(x1,x2,vec(E_Y)))"
    );
    assert_eq!(result.program("e3").unwrap().to_string(), "wash(x5,x2)");
    let e1 = result.path("e1").unwrap();
    assert_eq!(e1.start().unwrap().to_string(), "loc(x3)");
    assert_eq!(e1.end().unwrap().to_string(), "hand(x1)");
    let e2 = result.path("e2").unwrap();
    assert_eq!(e2.end().unwrap().to_string(), "in(loc(x5))");
    assert!(result.paths.iter().all(|p| p.is_strictly_increasing()));
    assert_eq!(result.purposes().len(), 1);
    let x2 = result.bindings.get(&"x2".into()).unwrap();
    assert_eq!(x2.pred(), Some("glass"));
    assert!(x2.details().contains(&"rotatSym=[Y]".to_string()));
    assert!(x2.details().contains(&"reflSym=[XY,YZ]".to_string()));
}

#[test]
fn interpretation_is_deterministic() {
    let vx = Voxicon::bundled();
    let a = interpret_document(&document(&[]), &vx, None).to_machine();
    let b = interpret_document(&document(&[]), &vx, None).to_machine();
    assert_eq!(a, b);
}

#[test]
fn injected_cycle() {
    let result = interpret_document(&document(&[CYCLE]), &Voxicon::bundled(), None);
    assert!(!result.consistent);
    let cycle = result.cycle.unwrap();
    assert_eq!(cycle.cycle.len(), 4);
    assert!(result.diagnostics.iter().any(|d| d.code == "VXI010"));
}
