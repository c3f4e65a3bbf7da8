use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use voxml_core::interpreter::{interpret_document, Scene};
use voxml_core::pformat::{
    parse_base_segmentation, parse_pformat, serialize_base_segmentation, serialize_pformat,
};
use voxml_core::semantics::{apply_identities, temporal_order, translate_document};
use voxml_core::{
    default_schema, errata, validate_document, AnnotationDocument, Diagnostic, Parsed,
    ValidationReport, Voxicon,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_ENVIRONMENT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "voxml",
    version,
    about = "Validate, translate and interpret VoxML annotation documents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the inputs in canonical form.
    Fmt(Inputs),
    /// Check the inputs against the annotation schema.
    Validate(Inputs),
    /// Print the composed, identity-applied semantic form.
    Semantics(Inputs),
    /// Interpret the document against a voxicon.
    Interpret {
        #[command(flatten)]
        inputs: Inputs,
        /// Voxicon file (.voxicon).
        #[arg(long, env = "VOXML_VOXICON", value_name = "PATH")]
        voxicon: Option<PathBuf>,
        /// Scene file of ground facts (.vxw).
        #[arg(long, value_name = "PATH")]
        scene: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Inputs {
    /// Annotation (.vxa) and base-segmentation (.vxs) files, read as one document.
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
    /// Tab-separated, line-oriented output.
    #[arg(long)]
    machine: bool,
    /// Leave the input exactly as written and report known defects.
    #[arg(long)]
    strict: bool,
}

/// Early exit with a status and messages for stderr.
struct Exit(u8, Vec<String>);

impl Exit {
    fn environment(msg: impl Into<String>) -> Exit {
        Exit(EXIT_ENVIRONMENT, vec![msg.into()])
    }
}

fn render(diags: &[Diagnostic], machine: bool) -> Vec<String> {
    diags
        .iter()
        .map(|d| {
            if machine {
                d.to_record()
            } else {
                d.to_string()
            }
        })
        .collect()
}

fn read(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path)
        .map_err(|e| Exit::environment(format!("{}: {}", path.display(), e)))
}

fn is_segmentation(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "vxs")
}

fn load_document(inputs: &Inputs) -> Result<AnnotationDocument, Exit> {
    let mut doc = AnnotationDocument::new();
    let mut diagnostics = Vec::new();
    for path in &inputs.files {
        let text = read(path)?;
        let file = path.display().to_string();
        let mut part: Parsed<AnnotationDocument> = if is_segmentation(path) {
            let p = parse_base_segmentation(&text).with_file(&file);
            Parsed {
                value: p.value.into(),
                diagnostics: p.diagnostics,
            }
        } else {
            parse_pformat(&text).with_file(&file)
        };
        part.value.set_source_file(&file);
        diagnostics.extend(part.diagnostics);
        if let Err(e) = doc.merge(part.value) {
            diagnostics.push(Diagnostic::error("VXP003", format!("{}: {}", file, e)));
        }
    }
    if voxml_core::diagnostic::has_errors(&diagnostics) {
        return Err(Exit(EXIT_ENVIRONMENT, render(&diagnostics, inputs.machine)));
    }
    for line in render(&diagnostics, inputs.machine) {
        eprintln!("{}", line);
    }
    Ok(doc)
}

/// Parse, normalize (unless strict) and validate.
fn checked_document(inputs: &Inputs) -> Result<(AnnotationDocument, ValidationReport), Exit> {
    let doc = load_document(inputs)?;
    let schema = default_schema();
    if inputs.strict {
        let mut report = validate_document(&doc, &schema);
        report.extend(errata::check(&doc));
        Ok((doc, report))
    } else {
        let (fixed, notes) = errata::normalize(&doc, &schema);
        let report = validate_document(&fixed, &schema);
        let mut all = ValidationReport::from_diagnostics(notes);
        all.extend(report.diagnostics);
        Ok((fixed, all))
    }
}

fn valid_document(inputs: &Inputs) -> Result<AnnotationDocument, Exit> {
    let (doc, report) = checked_document(inputs)?;
    if !report.ok {
        return Err(Exit(
            EXIT_FAILURE,
            render(&report.diagnostics, inputs.machine),
        ));
    }
    for line in render(&report.diagnostics, inputs.machine) {
        eprintln!("{}", line);
    }
    Ok(doc)
}

fn cmd_fmt(inputs: &Inputs) -> Result<u8, Exit> {
    let doc = load_document(inputs)?;
    if !doc.tokens.is_empty() {
        println!(
            "{}",
            serialize_base_segmentation(&doc.tokens, &doc.markables).trim_end()
        );
    }
    print!("{}", serialize_pformat(&doc));
    Ok(0)
}

fn cmd_validate(inputs: &Inputs) -> Result<u8, Exit> {
    let (_, report) = checked_document(inputs)?;
    if inputs.machine {
        print!("{}", report.to_records());
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.ok { 0 } else { EXIT_FAILURE })
}

fn cmd_semantics(inputs: &Inputs) -> Result<u8, Exit> {
    let doc = valid_document(inputs)?;
    let form = translate_document(&doc)
        .and_then(|f| apply_identities(&f))
        .map_err(|e| Exit(EXIT_FAILURE, vec![format!("error: {}", e)]))?;
    let order = temporal_order(&form);
    if inputs.machine {
        print!("{}", form.to_records());
    } else {
        println!("{}", form);
    }
    match order {
        Ok(o) if o.elements.is_empty() => Ok(0),
        Ok(o) => {
            if inputs.machine {
                println!("order\t{}", o);
            } else {
                println!("order: {}", o);
            }
            Ok(0)
        }
        Err(c) => Err(Exit(EXIT_FAILURE, vec![format!("error: {}", c)])),
    }
}

fn cmd_interpret(
    inputs: &Inputs,
    voxicon: Option<&Path>,
    scene: Option<&Path>,
) -> Result<u8, Exit> {
    let voxicon = voxicon.ok_or_else(|| {
        Exit::environment("interpret needs a voxicon: pass --voxicon or set VOXML_VOXICON")
    })?;
    let vx = Voxicon::load(&read(voxicon)?).with_file(&voxicon.display().to_string());
    if vx.has_errors() {
        return Err(Exit(
            EXIT_ENVIRONMENT,
            render(&vx.diagnostics, inputs.machine),
        ));
    }
    for line in render(&vx.diagnostics, inputs.machine) {
        eprintln!("{}", line);
    }
    let scene = match scene {
        None => None,
        Some(path) => {
            let parsed = Scene::parse(&read(path)?).with_file(&path.display().to_string());
            if parsed.has_errors() {
                return Err(Exit(
                    EXIT_ENVIRONMENT,
                    render(&parsed.diagnostics, inputs.machine),
                ));
            }
            Some(parsed.value)
        }
    };
    let doc = valid_document(inputs)?;
    let result = interpret_document(&doc, &vx.value, scene.as_ref());
    if inputs.machine {
        print!("{}", result.to_machine());
    } else {
        print!("{}", result.to_text());
    }
    Ok(if result.consistent { 0 } else { EXIT_FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Fmt(i) => cmd_fmt(i),
        Command::Validate(i) => cmd_validate(i),
        Command::Semantics(i) => cmd_semantics(i),
        Command::Interpret {
            inputs,
            voxicon,
            scene,
        } => cmd_interpret(inputs, voxicon.as_deref(), scene.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, messages)) => {
            for m in messages {
                eprintln!("{}", m);
            }
            ExitCode::from(code)
        }
    }
}
