//! Semantic forms: a set of typed referents plus a flat conjunction of
//! conditions, rendered `{x1}[human(x1), mary(x1)]`.
//!
//! [`sigma_entity`] and [`sigma_link`] translate single annotations,
//! [`compose`] unifies forms by set union, [`apply_identities`] collapses
//! `x=y` classes onto a representative and [`temporal_order`] builds the
//! precedence order over event times.

mod identity;
mod sigma;
mod temporal;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::AnnotationDocument;
use crate::natural::natural_cmp;

pub use identity::{apply_identities, IdentityClasses};
pub use sigma::{camel_case, predicate_name, sigma, sigma_entity, sigma_link};
pub use temporal::{temporal_order, PrecedenceOrder, TemporalInconsistency};

/// Sort of a discourse referent, read off its identifier prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Entity,
    Event,
    Relation,
    Other,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Entity => "x",
            Sort::Event => "e",
            Sort::Relation => "r",
            Sort::Other => "?",
        })
    }
}

/// A referent variable named after the annotation that introduced it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn sort(&self) -> Sort {
        let prefix: String = self
            .0
            .chars()
            .take_while(|c| c.is_ascii_alphabetic())
            .collect();
        match prefix.as_str() {
            "x" => Sort::Entity,
            "e" => Sort::Event,
            "r" => Sort::Relation,
            _ => Sort::Other,
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

impl From<String> for Var {
    fn from(s: String) -> Self {
        Var(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// `p(v)`
    Pred { name: String, arg: Var },
    /// `role(e,x)`: a binary condition from a reference attribute.
    Role { role: String, head: Var, arg: Var },
    /// `v=v′`
    Equal(Var, Var),
    /// `τ(e)≺τ(e′)`
    Precedes(Var, Var),
    /// `τ(e)=τ(e′)`
    Simultaneous(Var, Var),
    /// `purpose(e,{e′,…})`
    Purpose { event: Var, goals: BTreeSet<Var> },
}

impl Condition {
    pub fn pred(name: impl Into<String>, arg: impl Into<Var>) -> Self {
        Condition::Pred {
            name: name.into(),
            arg: arg.into(),
        }
    }

    pub fn role(role: impl Into<String>, head: impl Into<Var>, arg: impl Into<Var>) -> Self {
        Condition::Role {
            role: role.into(),
            head: head.into(),
            arg: arg.into(),
        }
    }

    pub fn vars(&self) -> Vec<&Var> {
        match self {
            Condition::Pred { arg, .. } => vec![arg],
            Condition::Role { head, arg, .. } => vec![head, arg],
            Condition::Equal(a, b) | Condition::Precedes(a, b) | Condition::Simultaneous(a, b) => {
                vec![a, b]
            }
            Condition::Purpose { event, goals } => {
                std::iter::once(event).chain(goals.iter()).collect()
            }
        }
    }

    pub fn is_equality(&self) -> bool {
        matches!(self, Condition::Equal(..))
    }

    pub fn map_vars(&self, f: &impl Fn(&Var) -> Var) -> Condition {
        match self {
            Condition::Pred { name, arg } => Condition::Pred {
                name: name.clone(),
                arg: f(arg),
            },
            Condition::Role { role, head, arg } => Condition::Role {
                role: role.clone(),
                head: f(head),
                arg: f(arg),
            },
            Condition::Equal(a, b) => Condition::Equal(f(a), f(b)),
            Condition::Precedes(a, b) => Condition::Precedes(f(a), f(b)),
            Condition::Simultaneous(a, b) => Condition::Simultaneous(f(a), f(b)),
            Condition::Purpose { event, goals } => Condition::Purpose {
                event: f(event),
                goals: goals.iter().map(f).collect(),
            },
        }
    }

    /// Tab-separated machine record.
    pub fn to_record(&self) -> String {
        match self {
            Condition::Pred { name, arg } => format!("cond\tpred\t{}\t{}", name, arg),
            Condition::Role { role, head, arg } => {
                format!("cond\trole\t{}\t{}\t{}", role, head, arg)
            }
            Condition::Equal(a, b) => format!("cond\teq\t{}\t{}", a, b),
            Condition::Precedes(a, b) => format!("cond\tprecedes\t{}\t{}", a, b),
            Condition::Simultaneous(a, b) => format!("cond\tsimultaneous\t{}\t{}", a, b),
            Condition::Purpose { event, goals } => {
                let goals: Vec<&str> = goals.iter().map(Var::name).collect();
                format!("cond\tpurpose\t{}\t{}", event, goals.join(","))
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Pred { name, arg } => write!(f, "{}({})", name, arg),
            Condition::Role { role, head, arg } => write!(f, "{}({},{})", role, head, arg),
            Condition::Equal(a, b) => write!(f, "{}={}", a, b),
            Condition::Precedes(a, b) => write!(f, "τ({})≺τ({})", a, b),
            Condition::Simultaneous(a, b) => write!(f, "τ({})=τ({})", a, b),
            Condition::Purpose { event, goals } => {
                write!(f, "purpose({},{{", event)?;
                for (n, g) in goals.iter().enumerate() {
                    if n > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", g)?;
                }
                f.write_str("})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SemanticForm {
    pub referents: BTreeSet<Var>,
    pub conditions: BTreeSet<Condition>,
}

impl SemanticForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_referent(mut self, v: impl Into<Var>) -> Self {
        self.referents.insert(v.into());
        self
    }

    pub fn with(mut self, c: Condition) -> Self {
        self.conditions.insert(c);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.referents.is_empty() && self.conditions.is_empty()
    }

    /// Conditions in canonical (natural lexicographic) order of their rendering.
    pub fn sorted_conditions(&self) -> Vec<&Condition> {
        let mut conds: Vec<(String, &Condition)> =
            self.conditions.iter().map(|c| (c.to_string(), c)).collect();
        conds.sort_by(|a, b| natural_cmp(&a.0, &b.0).then_with(|| a.0.cmp(&b.0)));
        conds.into_iter().map(|(_, c)| c).collect()
    }

    /// Unary predicate names holding of `v`, in canonical order.
    pub fn predicates_of(&self, v: &Var) -> Vec<&str> {
        self.sorted_conditions()
            .into_iter()
            .filter_map(|c| match c {
                Condition::Pred { name, arg } if arg == v => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Arguments `x` of `role(head,x)` conditions.
    pub fn role_fillers(&self, head: &Var, role: &str) -> Vec<&Var> {
        self.conditions
            .iter()
            .filter_map(|c| match c {
                Condition::Role {
                    role: r,
                    head: h,
                    arg,
                } if h == head && r == role => Some(arg),
                _ => None,
            })
            .collect()
    }

    /// Variables used in conditions but not declared as referents.
    pub fn undeclared(&self) -> BTreeSet<&Var> {
        self.conditions
            .iter()
            .flat_map(Condition::vars)
            .filter(|v| !self.referents.contains(*v))
            .collect()
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for r in &self.referents {
            out.push_str(&format!("ref\t{}\n", r));
        }
        for c in self.sorted_conditions() {
            out.push_str(&c.to_record());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for SemanticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, r) in self.referents.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", r)?;
        }
        f.write_str("}[")?;
        for (n, c) in self.sorted_conditions().into_iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str("]")
    }
}

/// ⊕: referent union and duplicate-free condition union.
pub fn compose<'a>(forms: impl IntoIterator<Item = &'a SemanticForm>) -> SemanticForm {
    let mut out = SemanticForm::new();
    for f in forms {
        out.referents.extend(f.referents.iter().cloned());
        out.conditions.extend(f.conditions.iter().cloned());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("{annotation}: reference `#{target}` in `{attribute}` cannot name a referent")]
    BadReference {
        annotation: String,
        attribute: String,
        target: String,
    },
    #[error("{annotation}: missing link argument `{attribute}`")]
    MissingArgument {
        annotation: String,
        attribute: String,
    },
    #[error("{annotation}: unsupported relType `{rel_type}` for {kind}")]
    UnknownRelType {
        annotation: String,
        kind: String,
        rel_type: String,
    },
    #[error("unresolved reference: `{0}` is used but no annotation introduces it")]
    Unresolved(String),
    #[error("sort clash: `{0}={1}` equates referents of different sorts")]
    SortClash(Var, Var),
}

/// σ of every annotation, composed. Fails if any condition mentions a
/// variable no annotation declares.
pub fn translate_document(doc: &AnnotationDocument) -> Result<SemanticForm, SemanticsError> {
    let forms = doc
        .annotations()
        .iter()
        .map(sigma)
        .collect::<Result<Vec<_>, _>>()?;
    let form = compose(&forms);
    if let Some(v) = form.undeclared().into_iter().next() {
        return Err(SemanticsError::Unresolved(v.to_string()));
    }
    Ok(form)
}
