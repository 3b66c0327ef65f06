//! `flowsem`: batch driver for ontology validation, term elaboration,
//! enrichment, equivalence and DOT export.
//!
//! Exit status: 0 on success, 1 on a domain failure (validation errors,
//! enrichment aborted in strict mode, diagrams not equivalent), 2 on usage,
//! I/O or parse failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use flowsem::diagram::{equivalent_with, to_dot, DotOptions, EquivalenceMode};
use flowsem::flowgraph::{read_flowgraph, write_flowgraph};
use flowsem::term::{elaborate, parse_term};
use flowsem::{
    enrich, EnrichmentConfig, EnrichmentMode, FlowGraphDocument, FlowGraphKind, Ontology,
};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "flowsem", version)]
#[command(about = "Semantic enrichment of raw flow graphs against a Monocl ontology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OntologyArg {
    /// Ontology document (JSON).
    #[arg(long, env = "FLOWSEM_ONTOLOGY")]
    ontology: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check an ontology and print the validation report
    Validate {
        ontology: PathBuf,
    },
    /// Enrich a raw flow graph into a semantic one
    Enrich {
        #[command(flatten)]
        ontology: OntologyArg,
        #[arg(long)]
        raw: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Abort on coercion failures and broken annotations
        #[arg(long, conflicts_with = "lenient")]
        strict: bool,
        /// Degrade failures to unknown types and boxes (default)
        #[arg(long)]
        lenient: bool,
        /// Write the enrichment report as JSON
        #[arg(long)]
        report: Option<PathBuf>,
        /// Omit the timestamp from the output metadata
        #[arg(long)]
        no_meta: bool,
        /// Drop observed values
        #[arg(long)]
        no_values: bool,
    },
    /// Elaborate a Monocl term into a diagram
    Elaborate {
        #[command(flatten)]
        ontology: OntologyArg,
        #[arg(long)]
        term: String,
        /// Write DOT (for a `.dot` path) or a semantic document; stdout
        /// gets the document when absent
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Exit 0 iff two flow graphs are equivalent
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Compare up to isomorphism only, without normalizing
        #[arg(long)]
        syntactic: bool,
    },
    /// Render a flow-graph document as DOT
    ExportDot {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Append observed values to edge labels
        #[arg(long)]
        values: bool,
    },
}

enum Failure {
    /// Exit 1.
    Domain(String),
    /// Exit 2.
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_ontology(path: &Path) -> Result<Ontology, Failure> {
    Ontology::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Loads and validates; errors are printed and refuse the load.
fn load_valid_ontology(path: &Path) -> Result<Ontology, Failure> {
    let o = load_ontology(path)?;
    let report = o.validate();
    if report.has_errors() {
        for d in report.errors() {
            eprintln!("{}[{}] {}: {}", d.severity, d.code, d.subject, d.message);
        }
        return Err(Failure::Domain(format!("{}: ontology has errors", path.display())));
    }
    Ok(o)
}

fn load_document(path: &Path) -> Result<FlowGraphDocument, Failure> {
    read_flowgraph(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn validate(path: &Path) -> Outcome {
    let o = load_ontology(path)?;
    let report = o.validate();
    println!("{report}");
    if report.has_errors() {
        Err(Failure::Domain(format!("{}: ontology has errors", path.display())))
    } else {
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn run_enrich(
    ontology: &Path,
    raw: &Path,
    output: &Path,
    strict: bool,
    report_path: Option<&Path>,
    no_meta: bool,
    no_values: bool,
) -> Outcome {
    let o = load_valid_ontology(ontology)?;
    let doc = load_document(raw)?;
    if doc.kind != FlowGraphKind::Raw {
        return Err(Failure::Usage(format!("{}: expected a raw document, found {}", raw.display(), doc.kind)));
    }
    let cfg = EnrichmentConfig {
        mode: if strict { EnrichmentMode::Strict } else { EnrichmentMode::Lenient },
        keep_values: !no_values,
    };
    let (diagram, report) =
        enrich(&doc.diagram, &o, &cfg).map_err(|e| Failure::Domain(format!("{}: {e}", raw.display())))?;

    let mut out = FlowGraphDocument::new(FlowGraphKind::Semantic, diagram);
    out.metadata = doc.metadata.clone();
    out.metadata.insert("source".into(), Value::from(file_name(raw)));
    if let Some(id) = o.id() {
        out.metadata.insert("ontology".into(), Value::from(id));
    }
    out.metadata.insert("ontology_hash".into(), Value::from(o.content_hash()));
    if !no_meta {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        out.metadata.insert("enriched_at".into(), Value::from(now));
    }
    write(output, &write_flowgraph(&out))?;
    if let Some(path) = report_path {
        let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
        text.push('\n');
        write(path, &text)?;
    }

    println!("expanded boxes: {}", report.expanded_boxes);
    println!(
        "unknown boxes: {} before contraction, {} after",
        report.unknown_boxes_before, report.unknown_boxes_after
    );
    println!("unresolved references: {}", report.unresolved_refs.len());
    for r in &report.unresolved_refs {
        println!("  {r}");
    }
    for w in report.coercion_warnings.iter().chain(&report.annotation_warnings) {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn run_elaborate(ontology: &Path, term: &str, output: Option<&Path>) -> Outcome {
    let o = load_valid_ontology(ontology)?;
    let t = parse_term(term).map_err(|e| Failure::Usage(format!("term: {e}")))?;
    let diagram = elaborate(&t, &o).map_err(|e| Failure::Domain(format!("term: {e}")))?;
    match output {
        Some(path) if path.extension().is_some_and(|x| x == "dot") => {
            write(path, &to_dot(&diagram, DotOptions::default()))
        }
        other => {
            let mut doc = FlowGraphDocument::new(FlowGraphKind::Semantic, diagram);
            doc.metadata.insert("term".into(), Value::from(t.to_string()));
            let text = write_flowgraph(&doc);
            match other {
                Some(path) => write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn run_equiv(a: &Path, b: &Path, syntactic: bool) -> Outcome {
    let (da, db) = (load_document(a)?, load_document(b)?);
    if da.kind != db.kind {
        return Err(Failure::Usage(format!(
            "cannot compare a {} document with a {} document",
            da.kind, db.kind
        )));
    }
    let mode = if syntactic { EquivalenceMode::Syntactic } else { EquivalenceMode::Cartesian };
    if equivalent_with(&da.diagram, &db.diagram, mode) {
        println!("equivalent");
        Ok(())
    } else {
        println!("not equivalent");
        Err(Failure::Domain(format!("{} and {} differ", a.display(), b.display())))
    }
}

fn run_export(file: &Path, output: Option<&Path>, values: bool) -> Outcome {
    let doc = load_document(file)?;
    let dot = to_dot(&doc.diagram, DotOptions { values });
    match output {
        Some(path) => write(path, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate { ontology } => validate(ontology),
        Command::Enrich {
            ontology,
            raw,
            output,
            strict,
            lenient: _,
            report,
            no_meta,
            no_values,
        } => run_enrich(
            &ontology.ontology,
            raw,
            output,
            *strict,
            report.as_deref(),
            *no_meta,
            *no_values,
        ),
        Command::Elaborate { ontology, term, output } => {
            run_elaborate(&ontology.ontology, term, output.as_deref())
        }
        Command::Equiv { a, b, syntactic } => run_equiv(a, b, *syntactic),
        Command::ExportDot { file, output, values } => run_export(file, output.as_deref(), *values),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
