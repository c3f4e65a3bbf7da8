use std::collections::BTreeSet;

use crate::model::{Annotation, Category, EntityAnnotation, LinkAnnotation, Value};
use crate::validate::is_bare_numeric;

use super::{Condition, SemanticForm, SemanticsError, Var};

/// Type names whose predicate spelling differs from the annotation literal.
const TYPE_PREDICATES: &[(&str, &str)] = &[("physobj", "physObj")];

/// `pick up` → `pickUp`. Words after the first are capitalized; the first
/// word is kept as written.
pub fn camel_case(text: &str) -> String {
    let mut out = String::new();
    for (n, word) in text
        .split(|c: char| c.is_whitespace() || c == '-')
        .filter(|w| !w.is_empty())
        .enumerate()
    {
        if n == 0 {
            out.push_str(word);
        } else {
            let mut chars = word.chars();
            if let Some(first) = chars.next() {
                out.extend(first.to_uppercase());
                out.push_str(chars.as_str());
            }
        }
    }
    out
}

/// Predicate name for a `type` component or `pred` value.
pub fn predicate_name(text: &str) -> String {
    let trimmed = text.trim();
    TYPE_PREDICATES
        .iter()
        .find(|(lit, _)| *lit == trimmed)
        .map(|(_, p)| p.to_string())
        .unwrap_or_else(|| camel_case(trimmed))
}

fn role_for(category: Category, attribute: &str) -> String {
    match (category, attribute) {
        (c, "physObj" | "relatedTo" | "theme") if c.is_a(Category::Event) => "theme".into(),
        (_, other) => other.to_string(),
    }
}

fn target_var(annotation: &str, attribute: &str, target: &str) -> Result<Var, SemanticsError> {
    let var = Var::new(target);
    if target.is_empty() || is_bare_numeric(target) || var.sort() == super::Sort::Other {
        return Err(SemanticsError::BadReference {
            annotation: annotation.into(),
            attribute: attribute.into(),
            target: target.into(),
        });
    }
    Ok(var)
}

/// σ of an object, action or relation annotation.
///
/// One referent named after the id. Actions and relations contribute their
/// category as a predicate (`action(e1)`, `relation(r1)`); objects and
/// actions contribute each `type` component; `pred` contributes its
/// camel-cased name; reference attributes become role conditions, with
/// `physObj`/`relatedTo`/`theme` on events all mapping to `theme`.
pub fn sigma_entity(a: &EntityAnnotation) -> Result<SemanticForm, SemanticsError> {
    let v = Var::new(a.id.as_str());
    let mut form = SemanticForm::new().with_referent(v.clone());
    let relational = a.category.is_a(Category::Relation);

    if a.category.is_a(Category::Event) || relational {
        form.conditions
            .insert(Condition::pred(a.category.keyword(), v.clone()));
    }
    if !relational {
        for t in a.type_components() {
            form.conditions
                .insert(Condition::pred(predicate_name(t), v.clone()));
        }
    }
    if let Some(p) = a.pred.as_deref().filter(|p| !p.trim().is_empty()) {
        form.conditions
            .insert(Condition::pred(predicate_name(p), v.clone()));
    }
    for (name, value) in &a.attributes {
        for target in value.refs() {
            let arg = target_var(&a.id, name, target)?;
            form.conditions
                .insert(Condition::role(role_for(a.category, name), v.clone(), arg));
        }
    }
    Ok(form)
}

fn single_ref(l: &LinkAnnotation, attribute: &str) -> Result<Var, SemanticsError> {
    match l.attr(attribute) {
        Some(Value::Ref(r)) => target_var(&l.id, attribute, r),
        Some(Value::RefSet(rs)) if rs.len() == 1 => target_var(&l.id, attribute, &rs[0]),
        _ => Err(SemanticsError::MissingArgument {
            annotation: l.id.clone(),
            attribute: attribute.into(),
        }),
    }
}

/// σ of a link. Links add conditions only, never referents.
///
/// `tLink(eventID=e, relatedToEventID=e′, after)` gives `τ(e′)≺τ(e)`;
/// `before` the mirror image; `simultaneous` gives `τ(e)=τ(e′)`.
pub fn sigma_link(l: &LinkAnnotation) -> Result<SemanticForm, SemanticsError> {
    let rel = l.rel_type().unwrap_or("");
    let unknown = || SemanticsError::UnknownRelType {
        annotation: l.id.clone(),
        kind: l.kind.to_string(),
        rel_type: rel.to_string(),
    };
    let condition = match l.kind {
        Category::TLink => {
            let event = single_ref(l, "eventID")?;
            let related = single_ref(l, "relatedToEventID")?;
            match rel {
                "after" => Condition::Precedes(related, event),
                "before" => Condition::Precedes(event, related),
                "simultaneous" => {
                    let (a, b) = if event <= related {
                        (event, related)
                    } else {
                        (related, event)
                    };
                    Condition::Simultaneous(a, b)
                }
                _ => return Err(unknown()),
            }
        }
        Category::SLink => {
            let event = single_ref(l, "eventID")?;
            let goals = match l.attr("relatedTo") {
                Some(v) if !v.refs().is_empty() => v
                    .refs()
                    .into_iter()
                    .map(|t| target_var(&l.id, "relatedTo", t))
                    .collect::<Result<BTreeSet<_>, _>>()?,
                _ => {
                    return Err(SemanticsError::MissingArgument {
                        annotation: l.id.clone(),
                        attribute: "relatedTo".into(),
                    })
                }
            };
            match rel {
                "purpose" => Condition::Purpose { event, goals },
                _ => return Err(unknown()),
            }
        }
        Category::AnaLink => {
            let anaphor = single_ref(l, "anaphor")?;
            let antecedent = single_ref(l, "antecedent")?;
            match rel {
                "identity" => Condition::Equal(anaphor, antecedent),
                _ => return Err(unknown()),
            }
        }
        _ => return Err(unknown()),
    };
    Ok(SemanticForm::new().with(condition))
}

pub fn sigma(a: &Annotation) -> Result<SemanticForm, SemanticsError> {
    match a {
        Annotation::Entity(e) => sigma_entity(e),
        Annotation::Link(l) => sigma_link(l),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pformat::parse_pformat;

    fn sigma_of(record: &str) -> String {
        let doc = parse_pformat(record).value;
        sigma(&doc.annotations()[0]).unwrap().to_string()
    }

    #[test]
    fn objects() {
        assert_eq!(
            sigma_of(r#"object(x2, w5, type="physobj", pred="glass")"#),
            "{x2}[glass(x2), physObj(x2)]"
        );
        assert_eq!(
            sigma_of(r#"object(x1, w1, type="human", pred="mary")"#),
            "{x1}[human(x1), mary(x1)]"
        );
        assert_eq!(
            sigma_of(r#"object(x4, w11, type="unknown", pred="pro")"#),
            "{x4}[pro(x4), unknown(x4)]"
        );
        assert_eq!(
            sigma_of(r#"object(x5, w14, type="physobj, artifact", pred="dishwasher")"#),
            "{x5}[artifact(x5), dishwasher(x5), physObj(x5)]"
        );
    }

    #[test]
    fn actions_map_physobj_to_theme() {
        assert_eq!(
            sigma_of(
                r##"action(e1, w2-3, type="transition", pred="pickUp", agent="#x1", physObj="#x2")"##
            ),
            "{e1}[action(e1), agent(e1,x1), pickUp(e1), theme(e1,x2), transition(e1)]"
        );
        assert_eq!(
            sigma_of(
                r##"action(e2, w10, type="transition", pred="put", agent="#x1", relatedTo="#x4")"##
            ),
            "{e2}[action(e2), agent(e2,x1), put(e2), theme(e2,x4), transition(e2)]"
        );
    }

    #[test]
    fn relations() {
        assert_eq!(
            sigma_of(r##"relation(r1, w6, type="spatial", source="#x3")"##),
            "{r1}[relation(r1), source(r1,x3)]"
        );
        assert_eq!(
            sigma_of(r#"relation(r2, w12, type="spatial", pred="in")"#),
            "{r2}[in(r2), relation(r2)]"
        );
    }

    #[test]
    fn multiword_pred_is_camel_cased() {
        assert_eq!(camel_case("pick up"), "pickUp");
        assert_eq!(predicate_name(" physobj "), "physObj");
        assert_eq!(predicate_name("pickUP"), "pickUP");
    }

    #[test]
    fn links() {
        assert_eq!(
            sigma_of(r##"tLink(tL1, eventID="#e2", relatedToEventID="#e1", relType="after")"##),
            "{}[τ(e1)≺τ(e2)]"
        );
        assert_eq!(
            sigma_of(r##"tLink(tL1, eventID="#e2", relatedToEventID="#e1", relType="before")"##),
            "{}[τ(e2)≺τ(e1)]"
        );
        assert_eq!(
            sigma_of(
                r##"tLink(tL1, eventID="#e2", relatedToEventID="#e1", relType="simultaneous")"##
            ),
            "{}[τ(e1)=τ(e2)]"
        );
        assert_eq!(
            sigma_of(r##"sLink(sL1, eventID="#e2", relatedTo="{#e3,#e4}", relType="purpose")"##),
            "{}[purpose(e2,{e3,e4})]"
        );
        assert_eq!(sigma_of("anaLink(aL1, x4, x2, identity)"), "{}[x4=x2]");
    }

    #[test]
    fn unknown_rel_type() {
        let doc = parse_pformat(
            r##"tLink(tL1, eventID="#e2", relatedToEventID="#e1", relType="during")"##,
        )
        .value;
        assert!(matches!(
            sigma(&doc.annotations()[0]),
            Err(SemanticsError::UnknownRelType { .. })
        ));
    }

    #[test]
    fn bare_numeric_reference_is_rejected() {
        let doc = parse_pformat(r##"action(e3, w16, type="process", agent="#5")"##).value;
        assert!(matches!(
            sigma(&doc.annotations()[0]),
            Err(SemanticsError::BadReference { .. })
        ));
    }
}
