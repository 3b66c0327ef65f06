//! Boxwise expansion of annotated calls.

use crate::diagram::{substitute, BoxLabel, Port, PortMap, PortType, WiringDiagram};
use crate::ontology::{FunctionAnnotation, Ontology};

use super::{EnrichError, EnrichmentConfig, EnrichmentMode, EnrichmentReport};

/// Expands a raw diagram: annotated boxes are replaced by their elaborated
/// definitions, everything else becomes an unknown box of the same arity,
/// and concrete port types become abstract types or unknown.
pub fn expand(
    raw: &WiringDiagram,
    o: &Ontology,
    cfg: &EnrichmentConfig,
) -> Result<WiringDiagram, EnrichError> {
    expand_with_report(raw, o, cfg).map(|(d, _)| d)
}

/// A concrete type labels a single wire only when it maps to a basic type.
fn relabel(p: &mut PortType, o: &Ontology) {
    if let PortType::Concrete(c) = p {
        *p = match o.resolve_type_annotation(c) {
            Some(t) if t.arity() == 1 => PortType::Abstract(t.factors()[0].clone()),
            _ => PortType::Unknown,
        };
    }
}

fn port_map(
    host: &WiringDiagram,
    id: &crate::diagram::BoxId,
    a: &FunctionAnnotation,
    definition: &WiringDiagram,
) -> Result<PortMap, String> {
    let node = &host.boxes[id];
    if definition.outer_in.len() != a.input_slots.len()
        || definition.outer_out.len() != a.output_slots.len()
    {
        return Err("definition arity differs from its slot lists".into());
    }
    let inputs = a
        .input_slots
        .iter()
        .map(|slot| {
            (0..node.in_ports.len())
                .find(|&i| &node.in_slot(i) == slot)
                .ok_or_else(|| format!("call has no argument slot `{slot}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let outputs = (0..node.out_ports.len())
        .map(|j| {
            let slot = node.out_slot(j);
            a.output_slots.iter().position(|s| *s == slot)
        })
        .collect::<Vec<_>>();
    for (j, mapped) in outputs.iter().enumerate() {
        let consumed = host
            .wires
            .iter()
            .any(|w| w.src == Port::Box(id.clone(), j));
        if mapped.is_none() && consumed {
            return Err(format!(
                "result slot `{}` is used but the annotation does not produce it",
                node.out_slot(j)
            ));
        }
    }
    Ok(PortMap { inputs, outputs })
}

pub fn expand_with_report(
    raw: &WiringDiagram,
    o: &Ontology,
    cfg: &EnrichmentConfig,
) -> Result<(WiringDiagram, EnrichmentReport), EnrichError> {
    raw.topological_order()?;
    let mut report = EnrichmentReport::default();
    let mut d = raw.clone();
    for p in d.outer_in.iter_mut().chain(d.outer_out.iter_mut()) {
        relabel(p, o);
    }
    for node in d.boxes.values_mut() {
        for p in node.in_ports.iter_mut().chain(node.out_ports.iter_mut()) {
            relabel(p, o);
        }
    }

    let ids: Vec<_> = d.boxes.keys().cloned().collect();
    for id in ids {
        let concrete = match d.boxes.get(&id).map(|b| &b.label) {
            Some(BoxLabel::Concrete(c)) => c.clone(),
            _ => continue,
        };
        let fitted = o.resolve_function_annotation(&concrete).map(|a| {
            let outcome = match o.annotation_diagram(&a.id) {
                Some(def) => port_map(&d, &id, a, def).map(|m| (def, m)),
                None => Err("definition does not elaborate".to_owned()),
            };
            (a, outcome)
        });
        match fitted {
            Some((_, Ok((def, map)))) => {
                d = substitute(&d, &id, def, Some(&map))?;
                report.expanded_boxes += 1;
            }
            Some((a, Err(detail))) => {
                if cfg.mode == EnrichmentMode::Strict {
                    return Err(EnrichError::SlotMismatch {
                        box_id: id,
                        annotation: a.id.clone(),
                        detail,
                    });
                }
                report
                    .annotation_warnings
                    .push(format!("{id}: annotation `{}` skipped: {detail}", a.id));
                forget(&mut d, &id);
            }
            None => {
                report.unresolved_refs.push(concrete);
                forget(&mut d, &id);
            }
        }
    }

    check_coercions(&mut d, o, cfg, &mut report)?;
    if !cfg.keep_values {
        d.strip_values();
    }
    Ok((d, report))
}

fn forget(d: &mut WiringDiagram, id: &crate::diagram::BoxId) {
    let node = d.boxes.get_mut(id).expect("box exists");
    node.label = BoxLabel::Unknown;
    node.call = None;
}

fn check_coercions(
    d: &mut WiringDiagram,
    o: &Ontology,
    cfg: &EnrichmentConfig,
    report: &mut EnrichmentReport,
) -> Result<(), EnrichError> {
    let mut bad = Vec::new();
    for w in &d.wires {
        let (Some(PortType::Abstract(s)), Some(PortType::Abstract(t))) =
            (d.source_type(&w.src), d.target_type(&w.dst))
        else {
            continue;
        };
        if o.is_basic_subtype(s, t).unwrap_or(false) {
            continue;
        }
        if cfg.mode == EnrichmentMode::Strict {
            return Err(EnrichError::Coercion {
                source_port: w.src.to_string(),
                target_port: w.dst.to_string(),
                source_type: s.clone(),
                target_type: t.clone(),
            });
        }
        report.coercion_warnings.push(format!(
            "{} -> {}: `{s}` is not a subtype of `{t}`; both ends marked unknown",
            w.src, w.dst
        ));
        bad.push((w.src.clone(), w.dst.clone()));
    }
    for (src, dst) in bad {
        match src {
            Port::Outer(i) => d.outer_in[i] = PortType::Unknown,
            Port::Box(b, i) => d.boxes.get_mut(&b).expect("box exists").out_ports[i] = PortType::Unknown,
        }
        match dst {
            Port::Outer(i) => d.outer_out[i] = PortType::Unknown,
            Port::Box(b, i) => d.boxes.get_mut(&b).expect("box exists").in_ports[i] = PortType::Unknown,
        }
    }
    Ok(())
}
