//! Python bindings: documents, validation, semantic forms, voxicons and
//! interpretation.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use voxml_core::interpreter::{interpret_document, InterpretationResult, Scene};
use voxml_core::pformat::{parse_base_segmentation, parse_pformat, serialize_pformat};
use voxml_core::semantics::{
    apply_identities, compose as compose_forms, temporal_order, translate_document, SemanticForm,
};
use voxml_core::{
    default_schema, errata, validate_document, AnnotationDocument, Diagnostic, Voxicon,
};

fn parse_error(what: &str, diags: &[Diagnostic]) -> PyErr {
    let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
    PyValueError::new_err(format!("{}:\n{}", what, lines.join("\n")))
}

#[pyclass(name = "Diagnostic", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyDiagnostic {
    severity: String,
    code: String,
    message: String,
    file: Option<String>,
    line: Option<usize>,
    column: Option<usize>,
    subject: Option<String>,
    stage: Option<String>,
}

#[pymethods]
impl PyDiagnostic {
    fn __repr__(&self) -> String {
        format!(
            "<Diagnostic {} {}: {}>",
            self.severity, self.code, self.message
        )
    }
}

impl From<&Diagnostic> for PyDiagnostic {
    fn from(d: &Diagnostic) -> Self {
        PyDiagnostic {
            severity: d.severity.to_string(),
            code: d.code.to_string(),
            message: d.message.clone(),
            file: d.location.as_ref().and_then(|l| l.file.clone()),
            line: d.location.as_ref().map(|l| l.line),
            column: d.location.as_ref().map(|l| l.column),
            subject: d.subject.clone(),
            stage: d.stage.map(|s| s.as_str().to_string()),
        }
    }
}

fn diagnostics(ds: &[Diagnostic]) -> Vec<PyDiagnostic> {
    ds.iter().map(PyDiagnostic::from).collect()
}

#[pyclass(name = "Report", frozen)]
struct PyReport {
    #[pyo3(get)]
    ok: bool,
    diagnostics: Vec<Diagnostic>,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn diagnostics(&self) -> Vec<PyDiagnostic> {
        diagnostics(&self.diagnostics)
    }

    fn codes(&self) -> Vec<&'static str> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }

    fn __bool__(&self) -> bool {
        self.ok
    }
}

/// An annotation document: pFormat records plus an optional base segmentation.
#[pyclass(name = "Document", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDocument {
    doc: AnnotationDocument,
}

#[pymethods]
impl PyDocument {
    #[staticmethod]
    #[pyo3(signature = (annotations, segmentation=None))]
    fn parse(annotations: &str, segmentation: Option<&str>) -> PyResult<Self> {
        let mut doc = AnnotationDocument::new();
        if let Some(seg) = segmentation {
            let parsed = parse_base_segmentation(seg);
            if parsed.has_errors() {
                return Err(parse_error(
                    "invalid base segmentation",
                    &parsed.diagnostics,
                ));
            }
            doc = parsed.value.into();
        }
        let parsed = parse_pformat(annotations);
        if parsed.has_errors() {
            return Err(parse_error("invalid pFormat", &parsed.diagnostics));
        }
        doc.merge(parsed.value)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyDocument { doc })
    }

    fn ids(&self) -> Vec<String> {
        self.doc
            .annotations()
            .iter()
            .map(|a| a.id().to_string())
            .collect()
    }

    fn tokens(&self) -> Vec<String> {
        self.doc.tokens.clone()
    }

    fn to_pformat(&self) -> String {
        serialize_pformat(&self.doc)
    }

    /// Repair the known defects, returning the fixed document and the notes.
    fn normalized(&self) -> (PyDocument, Vec<PyDiagnostic>) {
        let (doc, notes) = errata::normalize(&self.doc, &default_schema());
        (PyDocument { doc }, diagnostics(&notes))
    }

    #[pyo3(signature = (strict=false))]
    fn validate(&self, strict: bool) -> PyReport {
        let schema = default_schema();
        let report = if strict {
            let mut r = validate_document(&self.doc, &schema);
            r.extend(errata::check(&self.doc));
            r
        } else {
            let (fixed, notes) = errata::normalize(&self.doc, &schema);
            let mut r = voxml_core::ValidationReport::from_diagnostics(notes);
            r.extend(validate_document(&fixed, &schema).diagnostics);
            r
        };
        PyReport {
            ok: report.ok,
            diagnostics: report.diagnostics,
        }
    }

    /// The composed, identity-applied form.
    fn semantics(&self) -> PyResult<PyForm> {
        translate_document(&self.doc)
            .and_then(|f| apply_identities(&f))
            .map(|form| PyForm { form })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[pyo3(signature = (voxicon, scene=None))]
    fn interpret(&self, voxicon: &PyVoxicon, scene: Option<&str>) -> PyResult<PyInterpretation> {
        let scene = match scene {
            None => None,
            Some(text) => {
                let parsed = Scene::parse(text);
                if parsed.has_errors() {
                    return Err(parse_error("invalid scene", &parsed.diagnostics));
                }
                Some(parsed.value)
            }
        };
        let (doc, _) = errata::normalize(&self.doc, &default_schema());
        Ok(PyInterpretation {
            result: interpret_document(&doc, &voxicon.vx, scene.as_ref()),
        })
    }

    fn __len__(&self) -> usize {
        self.doc.annotations().len()
    }
}

/// Discourse referents and conditions.
#[pyclass(name = "SemanticForm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyForm {
    form: SemanticForm,
}

#[pymethods]
impl PyForm {
    #[getter]
    fn referents(&self) -> Vec<String> {
        self.form.referents.iter().map(|v| v.to_string()).collect()
    }

    /// Conditions in canonical order.
    #[getter]
    fn conditions(&self) -> Vec<String> {
        self.form
            .sorted_conditions()
            .iter()
            .map(|c| c.to_string())
            .collect()
    }

    fn records(&self) -> String {
        self.form.to_records()
    }

    /// The precedence chain, or the covering pairs of a partial order.
    /// Raises `ValueError` naming the cycle when the order is inconsistent.
    fn temporal_order(&self) -> PyResult<String> {
        temporal_order(&self.form)
            .map(|o| o.to_string())
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __str__(&self) -> String {
        self.form.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<SemanticForm {}>", self.form)
    }
}

#[pyfunction]
fn compose(forms: Vec<PyRef<'_, PyForm>>) -> PyForm {
    PyForm {
        form: compose_forms(forms.iter().map(|f| &f.form)),
    }
}

#[pyclass(name = "Voxicon", frozen)]
struct PyVoxicon {
    vx: Voxicon,
}

#[pymethods]
impl PyVoxicon {
    #[staticmethod]
    fn bundled() -> Self {
        PyVoxicon {
            vx: Voxicon::bundled(),
        }
    }

    #[staticmethod]
    fn load(text: &str) -> PyResult<Self> {
        let parsed = Voxicon::load(text);
        if parsed.has_errors() {
            return Err(parse_error("invalid voxicon", &parsed.diagnostics));
        }
        Ok(PyVoxicon { vx: parsed.value })
    }

    fn serialize(&self) -> String {
        self.vx.serialize()
    }

    /// `(category, pred)` of every voxeme.
    fn entries(&self) -> Vec<(String, String)> {
        self.vx
            .voxemes()
            .iter()
            .map(|v| (v.category().to_string(), v.pred().to_string()))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.vx.len()
    }
}

#[pyclass(name = "Interpretation", frozen)]
struct PyInterpretation {
    result: InterpretationResult,
}

#[pymethods]
impl PyInterpretation {
    #[getter]
    fn consistent(&self) -> bool {
        self.result.consistent
    }

    #[getter]
    fn order(&self) -> Option<String> {
        self.result.order.as_ref().map(|o| o.to_string())
    }

    #[getter]
    fn cycle(&self) -> Option<Vec<String>> {
        self.result
            .cycle
            .as_ref()
            .map(|c| c.cycle.iter().map(|v| v.to_string()).collect())
    }

    /// Referent to bound voxeme predicate.
    #[getter]
    fn bindings(&self) -> BTreeMap<String, Option<String>> {
        self.result
            .bindings
            .iter()
            .map(|b| (b.referent.to_string(), b.pred().map(str::to_string)))
            .collect()
    }

    #[getter]
    fn programs(&self) -> BTreeMap<String, String> {
        self.result
            .programs
            .iter()
            .map(|p| (p.action.to_string(), p.to_string()))
            .collect()
    }

    #[getter]
    fn paths(&self) -> BTreeMap<String, String> {
        self.result
            .paths
            .iter()
            .map(|p| (p.action.to_string(), p.to_string()))
            .collect()
    }

    #[getter]
    fn diagnostics(&self) -> Vec<PyDiagnostic> {
        diagnostics(&self.result.diagnostics)
    }

    fn text(&self) -> String {
        self.result.to_text()
    }

    fn machine(&self) -> String {
        self.result.to_machine()
    }
}

#[pymodule]
fn voxml(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDocument>()?;
    m.add_class::<PyForm>()?;
    m.add_class::<PyVoxicon>()?;
    m.add_class::<PyInterpretation>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyDiagnostic>()?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    Ok(())
}
