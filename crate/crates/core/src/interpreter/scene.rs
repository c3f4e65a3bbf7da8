//! Scene files (`.vxw`): one ground atom per line, `#` starts a comment line.
//!
//! ```text
//! top(+Y, glass)
//! on(glass, table)
//! ```

use std::collections::BTreeSet;

use crate::diagnostic::{Diagnostic, Location, Parsed, Stage};
use crate::term::Term;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scene {
    facts: BTreeSet<Term>,
}

impl Scene {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_fact(mut self, fact: Term) -> Self {
        self.facts.insert(fact);
        self
    }

    pub fn holds(&self, fact: &Term) -> bool {
        self.facts.contains(fact)
    }

    pub fn facts(&self) -> impl Iterator<Item = &Term> {
        self.facts.iter()
    }

    pub fn parse(text: &str) -> Parsed<Scene> {
        let mut scene = Scene::new();
        let mut diagnostics = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            match Term::parse(trimmed) {
                Ok(t) => {
                    scene.facts.insert(t);
                }
                Err(e) => diagnostics.push(
                    Diagnostic::error("VXW001", format!("malformed scene fact: {}", e.reason))
                        .at(Location::new(
                            n + 1,
                            line.len() - line.trim_start().len() + e.offset + 1,
                        ))
                        .in_stage(Stage::Scene),
                ),
            }
        }
        Parsed {
            value: scene,
            diagnostics,
        }
    }
}
