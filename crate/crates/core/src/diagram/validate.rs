use std::collections::HashMap;

use crate::ontology::Ontology;
use crate::report::Report;

use super::{BoxLabel, Port, PortType, WiringDiagram, OUTER};

/// Checks the well-formedness rules: wires reference existing ports, every
/// box input and outer output has exactly one incoming wire, and the box
/// graph is acyclic. With an ontology, also checks concept references,
/// abstract port types, and `source <= target` on every abstractly typed
/// wire.
pub fn validate_diagram(d: &WiringDiagram, ontology: Option<&Ontology>) -> Report {
    let mut report = Report::new();

    for id in d.boxes.keys() {
        if id.as_str().is_empty() || id.as_str() == OUTER {
            report.error("reserved-id", id.as_str(), "box ids must be nonempty and not `@outer`");
        }
    }

    let mut incoming: HashMap<&Port, usize> = HashMap::new();
    for (i, w) in d.wires.iter().enumerate() {
        let subject = format!("wire {i} ({} -> {})", w.src, w.dst);
        if d.source_type(&w.src).is_none() {
            report.error("dangling-wire", &subject, format!("no source port {}", w.src));
        }
        if d.target_type(&w.dst).is_none() {
            report.error("dangling-wire", &subject, format!("no target port {}", w.dst));
            continue;
        }
        *incoming.entry(&w.dst).or_default() += 1;
    }

    let targets = d
        .boxes
        .iter()
        .flat_map(|(id, b)| (0..b.in_ports.len()).map(move |i| Port::Box(id.clone(), i)))
        .chain((0..d.outer_out.len()).map(Port::Outer));
    for t in targets {
        match incoming.get(&t).copied().unwrap_or(0) {
            1 => {}
            0 => report.error("unfed-port", t.to_string(), "input port has no incoming wire"),
            n => report.error("fan-in", t.to_string(), format!("input port has {n} incoming wires")),
        }
    }

    if d.topological_order().is_err() {
        report.error("cycle", "diagram", "the box graph has a directed cycle");
    }

    if let Some(o) = ontology {
        for (id, b) in &d.boxes {
            if let BoxLabel::Concept(f) = &b.label {
                match o.function(f) {
                    None => report.error(
                        "unknown-concept",
                        id.as_str(),
                        format!("function concept `{f}` is not declared"),
                    ),
                    Some(g) => {
                        if g.domain.arity() != b.in_ports.len() || g.codomain.arity() != b.out_ports.len() {
                            report.error(
                                "concept-arity",
                                id.as_str(),
                                format!(
                                    "`{f}` has signature {} -> {} but the box has {} input(s) and {} output(s)",
                                    g.domain,
                                    g.codomain,
                                    b.in_ports.len(),
                                    b.out_ports.len()
                                ),
                            );
                        }
                    }
                }
            }
        }
        let all_ports = d
            .outer_in
            .iter()
            .chain(&d.outer_out)
            .chain(d.boxes.values().flat_map(|b| b.in_ports.iter().chain(&b.out_ports)));
        let mut reported = std::collections::BTreeSet::new();
        for p in all_ports {
            if let PortType::Abstract(t) = p {
                if !o.has_type(t) && reported.insert(t.clone()) {
                    report.error("unknown-type", t, "type concept is not declared");
                }
            }
        }
        for w in &d.wires {
            let (Some(PortType::Abstract(s)), Some(PortType::Abstract(t))) =
                (d.source_type(&w.src), d.target_type(&w.dst))
            else {
                continue;
            };
            if let Ok(false) = o.is_basic_subtype(s, t) {
                report.error(
                    "wire-subtype",
                    format!("{} -> {}", w.src, w.dst),
                    format!("`{s}` is not a subtype of `{t}`"),
                );
            }
        }
    }

    report
}
