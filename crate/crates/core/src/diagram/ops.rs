//! Composition, products and operadic substitution.

use std::collections::{BTreeSet, HashMap};

use crate::ontology::Ontology;

use super::{BoxId, DiagramError, ObservedValue, Port, PortType, Wire, WiringDiagram};

/// Renames the boxes of `other` so none collides with a box of `host`.
fn rename_apart(host: &WiringDiagram, mut other: WiringDiagram) -> WiringDiagram {
    let mut taken: BTreeSet<BoxId> = host.boxes.keys().cloned().collect();
    taken.extend(other.boxes.keys().cloned());
    let mut rename = HashMap::new();
    let mut counter = 0;
    for id in other.boxes.keys() {
        if host.boxes.contains_key(id) {
            let fresh = loop {
                let candidate = BoxId::new(format!("b{counter}"));
                counter += 1;
                if !taken.contains(&candidate) {
                    break candidate;
                }
            };
            taken.insert(fresh.clone());
            rename.insert(id.clone(), fresh);
        }
    }
    if !rename.is_empty() {
        other.rename_boxes(&rename);
    }
    other
}

/// Checks `source <= target` componentwise wherever both sides are abstract.
fn check_boundary(
    sources: &[PortType],
    targets: &[PortType],
    ontology: Option<&Ontology>,
) -> Result<(), DiagramError> {
    let Some(o) = ontology else { return Ok(()) };
    for (index, (s, t)) in sources.iter().zip(targets).enumerate() {
        if let (PortType::Abstract(s), PortType::Abstract(t)) = (s, t) {
            if !o.is_basic_subtype(s, t)? {
                return Err(DiagramError::SubtypeViolation {
                    index,
                    source_type: s.clone(),
                    target_type: t.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Sequential composition: the outputs of `first` feed the inputs of
/// `second`. With an ontology, each spliced pair of abstract ports must
/// satisfy `cod <= dom`.
pub fn compose_diagrams(
    first: &WiringDiagram,
    second: &WiringDiagram,
    ontology: Option<&Ontology>,
) -> Result<WiringDiagram, DiagramError> {
    if first.outer_out.len() != second.outer_in.len() {
        return Err(DiagramError::ArityMismatch {
            context: "codomain of the first diagram vs domain of the second".into(),
            left: first.outer_out.len(),
            right: second.outer_in.len(),
        });
    }
    check_boundary(&first.outer_out, &second.outer_in, ontology)?;
    let second = rename_apart(first, second.clone());

    let mut feed: Vec<Option<(Port, Option<ObservedValue>)>> = vec![None; first.outer_out.len()];
    for w in &first.wires {
        if let Port::Outer(i) = w.dst {
            feed[i] = Some((w.src.clone(), w.value.clone()));
        }
    }

    let mut out = WiringDiagram::new(first.outer_in.clone(), second.outer_out.clone());
    out.boxes = first.boxes.clone();
    out.boxes.extend(second.boxes);
    out.wires.extend(
        first
            .wires
            .iter()
            .filter(|w| !matches!(w.dst, Port::Outer(_)))
            .cloned(),
    );
    for w in second.wires {
        let (src, value) = match w.src {
            Port::Outer(i) => {
                let (src, fed_value) = feed[i].clone().ok_or(DiagramError::Unfed(Port::Outer(i)))?;
                (src, w.value.or(fed_value))
            }
            src => (src, w.value),
        };
        out.wires.push(Wire {
            src,
            dst: w.dst,
            value,
        });
    }
    Ok(out)
}

/// Parallel composition: disjoint union with concatenated boundaries.
pub fn product_diagrams(left: &WiringDiagram, right: &WiringDiagram) -> WiringDiagram {
    let right = rename_apart(left, right.clone());
    let (shift_in, shift_out) = (left.outer_in.len(), left.outer_out.len());
    let mut out = left.clone();
    out.outer_in.extend(right.outer_in);
    out.outer_out.extend(right.outer_out);
    out.boxes.extend(right.boxes);
    for mut w in right.wires {
        if let Port::Outer(i) = &mut w.src {
            *i += shift_in;
        }
        if let Port::Outer(j) = &mut w.dst {
            *j += shift_out;
        }
        out.wires.push(w);
    }
    out
}

/// How a replacement's boundary attaches to the ports of the box it
/// replaces.
///
/// `inputs[k]` is the box input port feeding replacement input `k`; box
/// inputs that no entry mentions are dropped. `outputs[j]` is the
/// replacement output that takes over the consumers of box output `j`;
/// `None` is allowed only for outputs without consumers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortMap {
    pub inputs: Vec<usize>,
    pub outputs: Vec<Option<usize>>,
}

impl PortMap {
    pub fn identity(n_in: usize, n_out: usize) -> Self {
        Self {
            inputs: (0..n_in).collect(),
            outputs: (0..n_out).map(Some).collect(),
        }
    }
}

/// Replaces box `box_id` of `host` by the whole of `replacement`.
///
/// Observed values on the host wires that get severed are carried onto the
/// wires that replace them. Without a port map the replacement must have the
/// box's exact arity and ports are matched in order.
pub fn substitute(
    host: &WiringDiagram,
    box_id: &BoxId,
    replacement: &WiringDiagram,
    port_map: Option<&PortMap>,
) -> Result<WiringDiagram, DiagramError> {
    let target = host
        .boxes
        .get(box_id)
        .ok_or_else(|| DiagramError::UnknownBox(box_id.clone()))?;
    let (n_in, n_out) = (target.in_ports.len(), target.out_ports.len());
    let identity;
    let map = match port_map {
        Some(m) => m,
        None => {
            if replacement.outer_in.len() != n_in {
                return Err(DiagramError::ArityMismatch {
                    context: format!("inputs of `{box_id}` vs replacement domain"),
                    left: n_in,
                    right: replacement.outer_in.len(),
                });
            }
            if replacement.outer_out.len() != n_out {
                return Err(DiagramError::ArityMismatch {
                    context: format!("outputs of `{box_id}` vs replacement codomain"),
                    left: n_out,
                    right: replacement.outer_out.len(),
                });
            }
            identity = PortMap::identity(n_in, n_out);
            &identity
        }
    };
    if map.inputs.len() != replacement.outer_in.len() {
        return Err(DiagramError::InvalidPortMap(format!(
            "{} input entries for a replacement with {} inputs",
            map.inputs.len(),
            replacement.outer_in.len()
        )));
    }
    if let Some(bad) = map.inputs.iter().find(|&&i| i >= n_in) {
        return Err(DiagramError::InvalidPortMap(format!(
            "box `{box_id}` has no input port {bad}"
        )));
    }
    if map.outputs.len() != n_out {
        return Err(DiagramError::InvalidPortMap(format!(
            "{} output entries for a box with {} outputs",
            map.outputs.len(),
            n_out
        )));
    }
    if let Some(bad) = map
        .outputs
        .iter()
        .flatten()
        .find(|&&k| k >= replacement.outer_out.len())
    {
        return Err(DiagramError::InvalidPortMap(format!(
            "replacement has no output port {bad}"
        )));
    }

    let mut in_feed: Vec<Option<(Port, Option<ObservedValue>)>> = vec![None; n_in];
    for w in &host.wires {
        if let Port::Box(b, i) = &w.dst {
            if b == box_id {
                in_feed[*i] = Some((w.src.clone(), w.value.clone()));
            }
        }
    }
    let resolve = |src: &Port| -> Result<(Port, Option<ObservedValue>), DiagramError> {
        match src {
            Port::Outer(k) => {
                let i = map.inputs[*k];
                in_feed[i]
                    .clone()
                    .ok_or_else(|| DiagramError::Unfed(Port::Box(box_id.clone(), i)))
            }
            other => Ok((other.clone(), None)),
        }
    };

    let replacement = rename_apart(host, replacement.clone());
    let mut out_src: Vec<Option<(Port, Option<ObservedValue>)>> =
        vec![None; replacement.outer_out.len()];
    for w in &replacement.wires {
        if let Port::Outer(k) = w.dst {
            let (src, fed) = resolve(&w.src)?;
            out_src[k] = Some((src, w.value.clone().or(fed)));
        }
    }

    let mut out = WiringDiagram::new(host.outer_in.clone(), host.outer_out.clone());
    out.boxes = host.boxes.clone();
    out.boxes.remove(box_id);
    for w in &host.wires {
        if w.dst.box_id() == Some(box_id) {
            continue;
        }
        match &w.src {
            Port::Box(b, j) if b == box_id => {
                let k = map.outputs[*j].ok_or_else(|| DiagramError::UnmappedOutput {
                    box_id: box_id.clone(),
                    port: *j,
                })?;
                let (src, value) = out_src[k]
                    .clone()
                    .ok_or(DiagramError::Unfed(Port::Outer(k)))?;
                out.wires.push(Wire {
                    src,
                    dst: w.dst.clone(),
                    value: w.value.clone().or(value),
                });
            }
            _ => out.wires.push(w.clone()),
        }
    }
    for w in &replacement.wires {
        if matches!(w.dst, Port::Outer(_)) {
            continue;
        }
        let (src, fed) = resolve(&w.src)?;
        out.wires.push(Wire {
            src,
            dst: w.dst.clone(),
            value: w.value.clone().or(fed),
        });
    }
    out.boxes.extend(replacement.boxes);
    debug_assert!(out.topological_order().is_ok(), "substitution created a cycle");
    Ok(out)
}
