//! Presentation-level checks that go beyond what loading enforces.

use std::collections::HashMap;

use crate::enrich::check_annotation_functoriality;
use crate::report::Report;
use crate::term::{self, TermError};

use super::{concrete_key, Ontology};

/// Validates a loaded presentation.
///
/// Errors: dangling generator references in annotation definitions,
/// definitions that fail to elaborate, slot-count mismatches, subfunction
/// generators violating `dom(f) <= dom(g)` / `cod(f) <= cod(g)`, and
/// functoriality failures. Subtype cycles and shadowed annotations are
/// warnings. Skipped functoriality checks show up as notes.
pub fn validate_presentation(o: &Ontology) -> Report {
    let mut report = Report::new();

    for s in o.subfunction_generators() {
        let (f, g) = match (o.function(&s.sub), o.function(&s.superfunction)) {
            (Some(f), Some(g)) => (f, g),
            _ => continue,
        };
        let subject = format!("{} <= {}", f.id, g.id);
        if !o.is_subtype(&f.domain, &g.domain).unwrap_or(false) {
            report.error(
                "subfunction-side-condition",
                &subject,
                format!("domain {} is not a subtype of {}", f.domain, g.domain),
            );
        }
        if !o.is_subtype(&f.codomain, &g.codomain).unwrap_or(false) {
            report.error(
                "subfunction-side-condition",
                &subject,
                format!("codomain {} is not a subtype of {}", f.codomain, g.codomain),
            );
        }
    }

    for cycle in o.subtype_cycles() {
        report.warning(
            "subtype-cycle",
            cycle.join(", "),
            "these types are mutually subtypes of each other",
        );
    }

    let mut first_by_key: HashMap<_, &str> = HashMap::new();
    for a in o.type_annotations() {
        let key = concrete_key(a.concrete.language, &a.concrete.own_name());
        if let Some(prev) = first_by_key.insert(key, &a.id) {
            report.warning(
                "shadowed-annotation",
                &a.id,
                format!("`{}` is already annotated by `{prev}`", a.concrete),
            );
        }
    }
    let mut first_by_key: HashMap<_, &str> = HashMap::new();
    for a in o.function_annotations() {
        let key = concrete_key(a.concrete.language, &a.concrete.own_name());
        if let Some(prev) = first_by_key.insert(key, &a.id) {
            report.warning(
                "shadowed-annotation",
                &a.id,
                format!("`{}` is already annotated by `{prev}`", a.concrete),
            );
        }
    }

    for a in o.function_annotations() {
        let diagram = match o.annotation_diagram(&a.id) {
            Some(d) => d,
            None => {
                match term::elaborate(&a.definition, o) {
                    Err(TermError::UnresolvedGenerator(id)) => report.error(
                        "dangling-reference",
                        &a.id,
                        format!("definition references undeclared function `{id}`"),
                    ),
                    Err(TermError::UndeclaredType(id)) => report.error(
                        "dangling-reference",
                        &a.id,
                        format!("definition references undeclared type `{id}`"),
                    ),
                    Err(e) => report.error("annotation-elaboration", &a.id, e.to_string()),
                    Ok(_) => unreachable!("elaboration is deterministic"),
                }
                continue;
            }
        };
        let mut arity_ok = true;
        if diagram.outer_in.len() != a.input_slots.len() {
            arity_ok = false;
            report.error(
                "annotation-arity",
                &a.id,
                format!(
                    "definition takes {} input(s) but {} input slot(s) are mapped",
                    diagram.outer_in.len(),
                    a.input_slots.len()
                ),
            );
        }
        if diagram.outer_out.len() != a.output_slots.len() {
            arity_ok = false;
            report.error(
                "annotation-arity",
                &a.id,
                format!(
                    "definition returns {} output(s) but {} output slot(s) are mapped",
                    diagram.outer_out.len(),
                    a.output_slots.len()
                ),
            );
        }
        if arity_ok {
            report.extend(check_annotation_functoriality(a, o));
        }
    }

    report
}

impl Ontology {
    pub fn validate(&self) -> Report {
        validate_presentation(self)
    }
}
