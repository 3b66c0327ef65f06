//! Consistency of a function annotation with the type annotations.

use crate::diagram::PortType;
use crate::ontology::{CallKind, ConcreteRef, FunctionAnnotation, MonoclType, Ontology};
use crate::report::Report;

/// Concrete class behind a slot: declared in `slot_types`, or inferred for
/// the receiver of a method and the result of a constructor.
fn slot_class(a: &FunctionAnnotation, slot: &str) -> Option<ConcreteRef> {
    if let Some(c) = a.slot_types.get(slot) {
        return Some(c.clone());
    }
    match slot {
        "self" | "self!" => a.concrete.receiver_class(),
        "return" if a.concrete.kind == CallKind::Constructor => a.concrete.constructed_class(),
        _ => None,
    }
}

/// Checks that an annotation commutes with the type annotations: the
/// abstract type of each concrete argument must be a subtype of the domain
/// port it feeds, and each codomain port must be a subtype of the abstract
/// type of the concrete result it stands for.
pub fn check_annotation_functoriality(a: &FunctionAnnotation, o: &Ontology) -> Report {
    let mut report = Report::new();
    let Some(def) = o.annotation_diagram(&a.id) else {
        return report;
    };
    let sides = [
        (&a.input_slots, &def.outer_in, true),
        (&a.output_slots, &def.outer_out, false),
    ];
    for (slots, ports, domain) in sides {
        for (k, (slot, port)) in slots.iter().zip(ports.iter()).enumerate() {
            let side = if domain { "input" } else { "output" };
            let subject = format!("{} {side} `{slot}`", a.id);
            let Some(class) = slot_class(a, slot) else {
                report.info("functoriality-skipped", &subject, "concrete type of this slot is not known");
                continue;
            };
            let Some(concrete_type) = o.resolve_type_annotation(&class) else {
                report.info(
                    "functoriality-skipped",
                    &subject,
                    format!("`{class}` has no type annotation"),
                );
                continue;
            };
            let PortType::Abstract(p) = port else { continue };
            let port_type = MonoclType::basic(p.clone());
            let (lo, hi) = if domain {
                (concrete_type, &port_type)
            } else {
                (&port_type, concrete_type)
            };
            if !o.is_subtype(lo, hi).unwrap_or(false) {
                report.error(
                    "functoriality",
                    &subject,
                    format!("{side} {k}: {lo} is not a subtype of {hi} (`{class}` is annotated as {concrete_type})"),
                );
            }
        }
    }
    report
}
