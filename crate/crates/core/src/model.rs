//! In-memory model of an annotation document.
//!
//! Every annotation splits into an anchoring part (a categorized identifier
//! plus the span of primary data it targets) and a content part (ordered
//! attribute/value pairs). Documents are immutable once assembled except
//! through the checked [`AnnotationDocument::push`] entry point.

use std::fmt;

use thiserror::Error;

use crate::diagnostic::Location;

/// Base and relational categories of the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Event,
    Action,
    Object,
    Relation,
    Property,
    Function,
    TLink,
    SLink,
    AnaLink,
}

impl Category {
    pub const BASE: [Category; 6] = [
        Category::Event,
        Category::Action,
        Category::Object,
        Category::Relation,
        Category::Property,
        Category::Function,
    ];
    pub const LINKS: [Category; 3] = [Category::TLink, Category::SLink, Category::AnaLink];

    pub fn keyword(self) -> &'static str {
        match self {
            Category::Event => "event",
            Category::Action => "action",
            Category::Object => "object",
            Category::Relation => "relation",
            Category::Property => "property",
            Category::Function => "function",
            Category::TLink => "tLink",
            Category::SLink => "sLink",
            Category::AnaLink => "anaLink",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Category> {
        Self::BASE
            .iter()
            .chain(Self::LINKS.iter())
            .copied()
            .find(|c| c.keyword() == word)
    }

    pub fn is_link(self) -> bool {
        matches!(self, Category::TLink | Category::SLink | Category::AnaLink)
    }

    /// Immediate supercategory: action ⊂ event, property and function ⊂ relation.
    pub fn parent(self) -> Option<Category> {
        match self {
            Category::Action => Some(Category::Event),
            Category::Property | Category::Function => Some(Category::Relation),
            _ => None,
        }
    }

    /// Reflexive-transitive subcategory test.
    pub fn is_a(self, other: Category) -> bool {
        let mut cur = Some(self);
        while let Some(c) = cur {
            if c == other {
                return true;
            }
            cur = c.parent();
        }
        false
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Split a categorized identifier into its alphabetic prefix and natural-number suffix.
pub fn split_id(id: &str) -> Option<(&str, u64)> {
    let cut = id.find(|c: char| c.is_ascii_digit())?;
    let (prefix, digits) = id.split_at(cut);
    if prefix.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((prefix, digits.parse().ok()?))
}

/// A closed 1-based token interval `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub start: u32,
    pub end: u32,
}

impl Interval {
    pub fn new(start: u32, end: u32) -> Self {
        Interval { start, end }
    }

    pub fn single(index: u32) -> Self {
        Interval::new(index, index)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "w{}", self.start)
        } else {
            write!(f, "w{}-{}", self.start, self.end)
        }
    }
}

/// Target of a markable. Empty for null markables; more than one interval
/// for non-contiguous ones.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Span(pub Vec<Interval>);

impl Span {
    pub fn null() -> Self {
        Span(Vec::new())
    }

    pub fn single(index: u32) -> Self {
        Span(vec![Interval::single(index)])
    }

    pub fn is_null(&self) -> bool {
        self.0.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.iter().map(|i| i.end).max()
    }

    pub fn min_index(&self) -> Option<u32> {
        self.0.iter().map(|i| i.start).min()
    }

    pub fn is_well_formed(&self) -> bool {
        self.0.iter().all(|i| i.start >= 1 && i.start <= i.end)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, interval) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", interval)?;
        }
        Ok(())
    }
}

/// Anchoring structure: a categorized identifier and the span it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Markable {
    pub id: String,
    pub span: Span,
}

/// Source position of a record. Never participates in equality, so that
/// parse results compare structurally.
#[derive(Debug, Clone, Default)]
pub struct Origin(pub Option<Location>);

impl PartialEq for Origin {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Origin {}

/// Attribute value: a plain literal, a `#id` reference or a `{#a,#b}` set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Literal(String),
    Ref(String),
    RefSet(Vec<String>),
}

impl Value {
    /// Classify the unquoted text of a value.
    pub fn parse(raw: &str) -> Value {
        if let Some(target) = raw.strip_prefix('#') {
            return Value::Ref(target.to_string());
        }
        if let Some(inner) = raw.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let items: Vec<&str> = inner.split(',').map(str::trim).collect();
            if !inner.trim().is_empty() && items.iter().all(|i| i.len() > 1 && i.starts_with('#')) {
                return Value::RefSet(items.iter().map(|i| i[1..].to_string()).collect());
            }
        }
        Value::Literal(raw.to_string())
    }

    pub fn refs(&self) -> Vec<&str> {
        match self {
            Value::Literal(_) => Vec::new(),
            Value::Ref(r) => vec![r.as_str()],
            Value::RefSet(rs) => rs.iter().map(String::as_str).collect(),
        }
    }

    pub fn as_literal(&self) -> Option<&str> {
        match self {
            Value::Literal(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Literal(s) => f.write_str(s),
            Value::Ref(r) => write!(f, "#{}", r),
            Value::RefSet(rs) => {
                f.write_str("{")?;
                for (n, r) in rs.iter().enumerate() {
                    if n > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "#{}", r)?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityAnnotation {
    pub id: String,
    pub category: Category,
    pub span: Span,
    /// The `type` attribute. `None` only when the record omitted it, which
    /// validation reports.
    pub kind: Option<String>,
    pub pred: Option<String>,
    /// Remaining attributes in source order.
    pub attributes: Vec<(String, Value)>,
    pub origin: Origin,
}

impl EntityAnnotation {
    pub fn new(id: impl Into<String>, category: Category, span: Span) -> Self {
        EntityAnnotation {
            id: id.into(),
            category,
            span,
            kind: None,
            pred: None,
            attributes: Vec::new(),
            origin: Origin::default(),
        }
    }

    pub fn with_type(mut self, kind: impl Into<String>) -> Self {
        self.kind = Some(kind.into());
        self
    }

    pub fn with_pred(mut self, pred: impl Into<String>) -> Self {
        self.pred = Some(pred.into());
        self
    }

    pub fn with_attr(mut self, name: impl Into<String>, value: Value) -> Self {
        self.attributes.push((name.into(), value));
        self
    }

    pub fn attr(&self, name: &str) -> Option<&Value> {
        self.attributes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    /// Comma-separated components of `type`, trimmed.
    pub fn type_components(&self) -> Vec<&str> {
        self.kind
            .as_deref()
            .map(|t| {
                t.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkAnnotation {
    pub id: String,
    pub kind: Category,
    /// Arguments as named attributes. Positional anaLink arguments are stored
    /// under `anaphor`, `antecedent` and `relType`.
    pub attributes: Vec<(String, Value)>,
    /// Whether the record was written with positional arguments.
    pub positional: bool,
    pub origin: Origin,
}

impl LinkAnnotation {
    pub fn new(id: impl Into<String>, kind: Category) -> Self {
        LinkAnnotation {
            id: id.into(),
            kind,
            attributes: Vec::new(),
            positional: false,
            origin: Origin::default(),
        }
    }

    pub fn with_attr(mut self, name: impl Into<String>, value: Value) -> Self {
        self.attributes.push((name.into(), value));
        self
    }

    /// Positional anaLink constructor: `anaLink(id, anaphor, antecedent, relType)`.
    pub fn anaphoric(id: impl Into<String>, anaphor: &str, antecedent: &str, rel: &str) -> Self {
        let mut link = LinkAnnotation::new(id, Category::AnaLink)
            .with_attr("anaphor", Value::Ref(anaphor.into()))
            .with_attr("antecedent", Value::Ref(antecedent.into()))
            .with_attr("relType", Value::Literal(rel.into()));
        link.positional = true;
        link
    }

    pub fn attr(&self, name: &str) -> Option<&Value> {
        self.attributes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    pub fn rel_type(&self) -> Option<&str> {
        self.attr("relType").map(|v| match v {
            Value::Literal(s) => s.as_str(),
            Value::Ref(r) => r.as_str(),
            Value::RefSet(_) => "",
        })
    }

    /// Names of the link's argument attributes, in canonical order.
    pub fn argument_names(&self) -> &'static [&'static str] {
        match self.kind {
            Category::TLink => &["eventID", "relatedToEventID"],
            Category::SLink => &["eventID", "relatedTo"],
            Category::AnaLink => &["anaphor", "antecedent"],
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Annotation {
    Entity(EntityAnnotation),
    Link(LinkAnnotation),
}

impl Annotation {
    pub fn id(&self) -> &str {
        match self {
            Annotation::Entity(e) => &e.id,
            Annotation::Link(l) => &l.id,
        }
    }

    pub fn category(&self) -> Category {
        match self {
            Annotation::Entity(e) => e.category,
            Annotation::Link(l) => l.kind,
        }
    }

    pub fn attributes(&self) -> &[(String, Value)] {
        match self {
            Annotation::Entity(e) => &e.attributes,
            Annotation::Link(l) => &l.attributes,
        }
    }

    pub(crate) fn attributes_mut(&mut self) -> &mut Vec<(String, Value)> {
        match self {
            Annotation::Entity(e) => &mut e.attributes,
            Annotation::Link(l) => &mut l.attributes,
        }
    }

    pub fn origin(&self) -> Option<&Location> {
        match self {
            Annotation::Entity(e) => e.origin.0.as_ref(),
            Annotation::Link(l) => l.origin.0.as_ref(),
        }
    }

    /// Every `(attribute, referenced id)` pair, in attribute order.
    pub fn references(&self) -> Vec<(&str, &str)> {
        self.attributes()
            .iter()
            .flat_map(|(name, v)| v.refs().into_iter().map(move |r| (name.as_str(), r)))
            .collect()
    }
}

impl From<EntityAnnotation> for Annotation {
    fn from(e: EntityAnnotation) -> Self {
        Annotation::Entity(e)
    }
}

impl From<LinkAnnotation> for Annotation {
    fn from(l: LinkAnnotation) -> Self {
        Annotation::Link(l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate annotation id `{0}`")]
    DuplicateId(String),
    #[error("malformed reference `{0}`: references start with `#`")]
    MalformedReference(String),
}

/// Tokens of the primary data, base-segmentation markables, and annotations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationDocument {
    pub tokens: Vec<String>,
    pub markables: Vec<Markable>,
    annotations: Vec<Annotation>,
}

impl AnnotationDocument {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_annotations(
        annotations: impl IntoIterator<Item = Annotation>,
    ) -> Result<Self, ModelError> {
        let mut doc = Self::new();
        for a in annotations {
            doc.push(a)?;
        }
        Ok(doc)
    }

    /// Append an annotation, rejecting ids already present.
    pub fn push(&mut self, annotation: impl Into<Annotation>) -> Result<(), ModelError> {
        let annotation = annotation.into();
        if self.get(annotation.id()).is_some() {
            return Err(ModelError::DuplicateId(annotation.id().to_string()));
        }
        self.annotations.push(annotation);
        Ok(())
    }

    /// Record `file` as the source of every annotation with a known position.
    pub fn set_source_file(&mut self, file: &str) {
        for a in &mut self.annotations {
            let origin = match a {
                Annotation::Entity(e) => &mut e.origin,
                Annotation::Link(l) => &mut l.origin,
            };
            if let Some(loc) = &mut origin.0 {
                loc.file = Some(file.to_string());
            }
        }
    }

    /// Fold another document into this one: tokens are taken from whichever
    /// side has them, markables and annotations are appended.
    pub fn merge(&mut self, other: AnnotationDocument) -> Result<(), ModelError> {
        if self.tokens.is_empty() {
            self.tokens = other.tokens;
        }
        self.markables.extend(other.markables);
        for a in other.annotations {
            self.push(a)?;
        }
        Ok(())
    }

    pub fn annotations(&self) -> &[Annotation] {
        &self.annotations
    }

    pub(crate) fn annotations_mut(&mut self) -> &mut [Annotation] {
        &mut self.annotations
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityAnnotation> {
        self.annotations.iter().filter_map(|a| match a {
            Annotation::Entity(e) => Some(e),
            _ => None,
        })
    }

    pub fn links(&self) -> impl Iterator<Item = &LinkAnnotation> {
        self.annotations.iter().filter_map(|a| match a {
            Annotation::Link(l) => Some(l),
            _ => None,
        })
    }

    pub fn get(&self, id: &str) -> Option<&Annotation> {
        self.annotations.iter().find(|a| a.id() == id)
    }

    pub fn entity(&self, id: &str) -> Option<&EntityAnnotation> {
        self.entities().find(|e| e.id == id)
    }

    pub fn markable(&self, id: &str) -> Option<&Markable> {
        self.markables.iter().find(|m| m.id == id)
    }

    pub fn is_empty(&self) -> bool {
        self.annotations.is_empty() && self.tokens.is_empty() && self.markables.is_empty()
    }

    /// Resolve a `#id` reference literal to the entity annotation it names.
    /// Links are not reference targets, so a link id resolves to `None`.
    pub fn resolve_reference(
        &self,
        reference: &str,
    ) -> Result<Option<&EntityAnnotation>, ModelError> {
        let id = reference
            .strip_prefix('#')
            .ok_or_else(|| ModelError::MalformedReference(reference.to_string()))?;
        Ok(self.entity(id))
    }
}
