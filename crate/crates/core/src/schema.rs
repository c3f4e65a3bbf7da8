//! Category schema: identifier prefixes and per-category attribute assignments.

use std::collections::BTreeMap;

use crate::model::{split_id, Category};

/// Allowed values for an attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueDomain {
    /// The record's own identifier (anchoring, positional).
    Identifier,
    /// The record's span (anchoring, positional).
    Target,
    /// Free character data.
    Text,
    /// One literal out of a closed list.
    OneOf(Vec<String>),
    /// A reference to an annotation of one of the listed categories
    /// (subcategories included). `multi` admits `{#a,#b}` sets.
    Reference { targets: Vec<Category>, multi: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSpec {
    pub name: String,
    pub required: bool,
    pub domain: ValueDomain,
}

impl AttributeSpec {
    pub fn required(name: &str, domain: ValueDomain) -> Self {
        AttributeSpec {
            name: name.into(),
            required: true,
            domain,
        }
    }

    pub fn optional(name: &str, domain: ValueDomain) -> Self {
        AttributeSpec {
            name: name.into(),
            required: false,
            domain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategorySchema {
    prefixes: Vec<(String, Category)>,
    assignments: BTreeMap<Category, Vec<AttributeSpec>>,
}

fn reference(targets: &[Category]) -> ValueDomain {
    ValueDomain::Reference {
        targets: targets.to_vec(),
        multi: false,
    }
}

fn one_of(values: &[&str]) -> ValueDomain {
    ValueDomain::OneOf(values.iter().map(|s| s.to_string()).collect())
}

/// The schema of the VoxML annotation scheme.
///
/// Base categories event:action, object and relation:{property, function};
/// link categories tLink, sLink and anaLink. Every base category carries
/// `identifier`, `target`, `type` and a nullable `pred`. Actions are typed
/// `process` or `transition` and take `agent`, `physObj`, `theme` and
/// `relatedTo` object references.
pub fn default_schema() -> CategorySchema {
    use Category::*;

    let base = || {
        vec![
            AttributeSpec::required("identifier", ValueDomain::Identifier),
            AttributeSpec::required("target", ValueDomain::Target),
            AttributeSpec::required("type", ValueDomain::Text),
            AttributeSpec::optional("pred", ValueDomain::Text),
        ]
    };

    let mut assignments = BTreeMap::new();
    for cat in [Event, Object, Property, Function] {
        assignments.insert(cat, base());
    }

    let mut action = base();
    action[2] = AttributeSpec::required("type", one_of(&["process", "transition"]));
    for role in ["agent", "physObj", "theme", "relatedTo"] {
        action.push(AttributeSpec::optional(role, reference(&[Object])));
    }
    assignments.insert(Action, action);

    let mut relation = base();
    relation.push(AttributeSpec::optional("source", reference(&[Object])));
    assignments.insert(Relation, relation);

    assignments.insert(
        TLink,
        vec![
            AttributeSpec::required("identifier", ValueDomain::Identifier),
            AttributeSpec::required("eventID", reference(&[Event])),
            AttributeSpec::required("relatedToEventID", reference(&[Event])),
            AttributeSpec::required("relType", one_of(&["after", "before", "simultaneous"])),
        ],
    );
    assignments.insert(
        SLink,
        vec![
            AttributeSpec::required("identifier", ValueDomain::Identifier),
            AttributeSpec::required("eventID", reference(&[Event])),
            AttributeSpec::required(
                "relatedTo",
                ValueDomain::Reference {
                    targets: vec![Event],
                    multi: true,
                },
            ),
            AttributeSpec::required("relType", one_of(&["purpose"])),
        ],
    );
    assignments.insert(
        AnaLink,
        vec![
            AttributeSpec::required("identifier", ValueDomain::Identifier),
            AttributeSpec::required("anaphor", reference(&[Object])),
            AttributeSpec::required("antecedent", reference(&[Object])),
            AttributeSpec::required("relType", one_of(&["identity"])),
        ],
    );

    let prefixes = [
        ("x", Object),
        ("e", Action),
        ("r", Relation),
        ("tL", TLink),
        ("sL", SLink),
        ("aL", AnaLink),
    ]
    .into_iter()
    .map(|(p, c)| (p.to_string(), c))
    .collect();

    CategorySchema {
        prefixes,
        assignments,
    }
}

impl Default for CategorySchema {
    fn default() -> Self {
        default_schema()
    }
}

impl CategorySchema {
    pub fn base_categories(&self) -> impl Iterator<Item = Category> + '_ {
        self.assignments.keys().copied().filter(|c| !c.is_link())
    }

    pub fn link_categories(&self) -> impl Iterator<Item = Category> + '_ {
        self.assignments.keys().copied().filter(|c| c.is_link())
    }

    /// Register (or re-point) an identifier prefix.
    pub fn with_prefix(mut self, prefix: &str, category: Category) -> Self {
        self.prefixes.retain(|(p, _)| p != prefix);
        self.prefixes.push((prefix.to_string(), category));
        self
    }

    /// Add or replace an attribute definition for a category.
    pub fn with_attribute(mut self, category: Category, spec: AttributeSpec) -> Self {
        let specs = self.assignments.entry(category).or_default();
        specs.retain(|s| s.name != spec.name);
        specs.push(spec);
        self
    }

    pub fn prefixes(&self) -> &[(String, Category)] {
        &self.prefixes
    }

    /// Prefix registered for a category, if any (the first registration wins).
    pub fn prefix_for(&self, category: Category) -> Option<&str> {
        self.prefixes
            .iter()
            .find(|(_, c)| *c == category)
            .map(|(p, _)| p.as_str())
    }

    pub fn assignment(&self, category: Category) -> &[AttributeSpec] {
        self.assignments
            .get(&category)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn attribute(&self, category: Category, name: &str) -> Option<&AttributeSpec> {
        self.assignment(category).iter().find(|s| s.name == name)
    }

    /// Every content-attribute name any category declares.
    pub fn known_attributes(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self
            .assignments
            .values()
            .flatten()
            .filter(|s| !matches!(s.domain, ValueDomain::Identifier | ValueDomain::Target))
            .map(|s| s.name.as_str())
            .collect();
        names.sort_unstable();
        names.dedup();
        names
    }

    /// Category named by an identifier: the longest registered prefix that
    /// leaves a natural-number suffix.
    pub fn category_of(&self, id: &str) -> Option<Category> {
        let (_, _) = split_id(id)?;
        self.prefixes
            .iter()
            .filter(|(p, _)| {
                id.strip_prefix(p.as_str()).is_some_and(|rest| {
                    !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())
                })
            })
            .max_by_key(|(p, _)| p.len())
            .map(|(_, c)| *c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_lookup() {
        let s = default_schema();
        assert_eq!(s.category_of("e1"), Some(Category::Action));
        assert_eq!(s.category_of("tL3"), Some(Category::TLink));
        assert_eq!(s.category_of("x12"), Some(Category::Object));
        assert_eq!(s.category_of("q7"), None);
        assert_eq!(s.category_of("x"), None);
        assert_eq!(s.category_of("x1b"), None);
        assert_eq!(s.category_of(""), None);
    }

    #[test]
    fn longest_prefix_wins() {
        let s = default_schema().with_prefix("xp", Category::Property);
        assert_eq!(s.category_of("xp2"), Some(Category::Property));
        assert_eq!(s.category_of("x2"), Some(Category::Object));
    }

    #[test]
    fn base_categories_and_mandatory_attributes() {
        let s = default_schema();
        let base: Vec<_> = s.base_categories().collect();
        assert_eq!(base.len(), 6);
        for cat in Category::BASE {
            assert!(base.contains(&cat));
            for name in ["identifier", "target", "type", "pred"] {
                assert!(s.attribute(cat, name).is_some(), "{cat} lacks {name}");
            }
            assert!(!s.attribute(cat, "pred").unwrap().required);
        }
        assert_eq!(s.link_categories().count(), 3);
    }

    #[test]
    fn action_type_domain() {
        let s = default_schema();
        assert_eq!(
            s.attribute(Category::Action, "type").unwrap().domain,
            one_of(&["process", "transition"])
        );
    }
}
