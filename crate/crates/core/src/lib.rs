//! Annotation, semantic forms and minimal-model interpretation for VoxML.
//!
//! The pipeline reads pFormat annotation documents ([`pformat`]), checks
//! them against the abstract syntax ([`validate`]), translates each
//! annotation into a first-order semantic form and composes them
//! ([`semantics`]), then interprets the composed form against a voxicon of
//! object, agent, action and relation voxemes ([`voxicon`], [`interpreter`]).

pub mod diagnostic;
pub mod errata;
pub mod interpreter;
pub mod model;
pub mod natural;
pub mod pformat;
pub mod schema;
pub mod semantics;
pub mod term;
pub mod validate;
pub mod voxicon;

pub use diagnostic::{Diagnostic, Location, Parsed, Severity, Stage};
pub use model::{
    Annotation, AnnotationDocument, Category, EntityAnnotation, Interval, LinkAnnotation, Markable,
    Span, Value,
};
pub use schema::{default_schema, CategorySchema};
pub use semantics::{Condition, SemanticForm, Var};
pub use validate::{validate_document, ValidationReport};
pub use voxicon::Voxicon;
