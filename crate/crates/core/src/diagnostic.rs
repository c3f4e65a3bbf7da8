//! Diagnostics shared by every stage of the pipeline.
//!
//! A diagnostic always carries a stable short code (`VXP001`, `VXL001`, ...)
//! so that machine consumers can key on it independently of the message text.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
    Note,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where in a source file a diagnostic points. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
}

impl Location {
    pub fn new(line: usize, column: usize) -> Self {
        Location {
            file: None,
            line,
            column,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{}:", file)?;
        }
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Pipeline stage that produced a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Parse,
    Validate,
    Semantics,
    Temporal,
    Bind,
    Selectional,
    Habitat,
    Expand,
    Path,
    Voxicon,
    Scene,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Parse => "parse",
            Stage::Validate => "validate",
            Stage::Semantics => "semantics",
            Stage::Temporal => "temporal",
            Stage::Bind => "bind",
            Stage::Selectional => "selectional",
            Stage::Habitat => "habitat",
            Stage::Expand => "expand",
            Stage::Path => "path",
            Stage::Voxicon => "voxicon",
            Stage::Scene => "scene",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub location: Option<Location>,
    /// Annotation id, referent or voxeme key the diagnostic is about.
    pub subject: Option<String>,
    pub stage: Option<Stage>,
}

impl Diagnostic {
    pub fn new(severity: Severity, code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity,
            code,
            message: message.into(),
            location: None,
            subject: None,
            stage: None,
        }
    }

    pub fn error(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, code, message)
    }

    pub fn warning(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code, message)
    }

    pub fn note(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(Severity::Note, code, message)
    }

    pub fn at(mut self, location: Location) -> Self {
        self.location = Some(location);
        self
    }

    pub fn about(mut self, subject: impl Into<String>) -> Self {
        self.subject = Some(subject.into());
        self
    }

    pub fn in_stage(mut self, stage: Stage) -> Self {
        self.stage = Some(stage);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Tab-separated machine record:
    /// `diag <severity> <code> <line:col|-> <stage|-> <subject|-> <message>`.
    pub fn to_record(&self) -> String {
        let loc = self
            .location
            .as_ref()
            .map(|l| format!("{}:{}", l.line, l.column))
            .unwrap_or_else(|| "-".into());
        format!(
            "diag\t{}\t{}\t{}\t{}\t{}\t{}",
            self.severity,
            self.code,
            loc,
            self.stage.map(Stage::as_str).unwrap_or("-"),
            self.subject.as_deref().unwrap_or("-"),
            self.message.replace(['\t', '\n'], " ")
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(loc) = &self.location {
            write!(f, "{}: ", loc)?;
        }
        write!(f, "{}[{}]", self.severity, self.code)?;
        if let Some(stage) = self.stage {
            write!(f, " ({})", stage)?;
        }
        if let Some(subject) = &self.subject {
            write!(f, " {}:", subject)?;
        }
        write!(f, " {}", self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// A value produced together with the diagnostics found while producing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub diagnostics: Vec<Diagnostic>,
}

impl<T> Parsed<T> {
    pub fn has_errors(&self) -> bool {
        has_errors(&self.diagnostics)
    }

    /// Stamp every located diagnostic with a file name.
    pub fn with_file(mut self, file: &str) -> Self {
        for d in &mut self.diagnostics {
            if let Some(loc) = &mut d.location {
                loc.file = Some(file.to_string());
            }
        }
        self
    }
}
