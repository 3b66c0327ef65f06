//! Contraction of unannotated regions.

use std::collections::{BTreeSet, HashMap};

use crate::diagram::{BoxId, BoxNode, BoxLabel, Port, Wire, WiringDiagram};

/// Boxes lying on a directed path between two members of `seed`, the seed
/// included.
pub fn convex_closure(d: &WiringDiagram, seed: &BTreeSet<BoxId>) -> BTreeSet<BoxId> {
    let succ = d.successors();
    let mut pred: HashMap<&BoxId, Vec<&BoxId>> = HashMap::new();
    for (a, targets) in &succ {
        for b in targets {
            pred.entry(*b).or_default().push(*a);
        }
    }
    let reach = |forward: bool| {
        let mut seen: BTreeSet<&BoxId> = seed.iter().collect();
        let mut stack: Vec<&BoxId> = seed.iter().collect();
        while let Some(x) = stack.pop() {
            let next: Vec<&BoxId> = if forward {
                succ.get(x).map(|s| s.iter().copied().collect()).unwrap_or_default()
            } else {
                pred.get(x).cloned().unwrap_or_default()
            };
            for y in next {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    };
    let down = reach(true);
    let up = reach(false);
    down.intersection(&up).map(|b| (*b).clone()).collect()
}

/// Repeatedly encapsulates convex all-unknown regions joined by a wire into a
/// single unknown box, until no such pair is left.
///
/// Candidate wires are visited by the topological index of their source box,
/// then target box, then port indices, so the result does not depend on the
/// order of `d.wires`. The merged box keeps the id of its first member and
/// has one input per distinct external source and one output per member
/// output with consumers outside the region.
pub fn contract(d: &WiringDiagram) -> WiringDiagram {
    let mut d = d.clone();
    while let Some(region) = next_region(&d) {
        d = merge(&d, &region);
    }
    d
}

fn next_region(d: &WiringDiagram) -> Option<Vec<BoxId>> {
    let order = d.topological_order().ok()?;
    let pos: HashMap<&BoxId, usize> = order.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut candidates: Vec<(usize, usize, usize, usize)> = d
        .wires
        .iter()
        .filter_map(|w| match (&w.src, &w.dst) {
            (Port::Box(a, i), Port::Box(b, j))
                if a != b && d.boxes[a].label.is_unknown() && d.boxes[b].label.is_unknown() =>
            {
                Some((pos[a], pos[b], *i, *j))
            }
            _ => None,
        })
        .collect();
    candidates.sort_unstable();
    candidates.dedup_by_key(|c| (c.0, c.1));
    for (a, b, _, _) in candidates {
        let seed: BTreeSet<BoxId> = [order[a].clone(), order[b].clone()].into();
        let closure = convex_closure(d, &seed);
        if closure.iter().all(|x| d.boxes[x].label.is_unknown()) {
            let mut members: Vec<BoxId> = closure.into_iter().collect();
            members.sort_by_key(|m| pos[m]);
            return Some(members);
        }
    }
    None
}

/// Replaces a convex region (members in topological order) by one unknown box.
fn merge(d: &WiringDiagram, members: &[BoxId]) -> WiringDiagram {
    let inside = |p: &Port| p.box_id().is_some_and(|b| members.contains(b));
    let feeding = d.feeding_wires();
    let merged_id = members[0].clone();

    let mut in_ports = Vec::new();
    let mut in_wires: Vec<Wire> = Vec::new();
    let mut in_index: HashMap<Port, usize> = HashMap::new();
    for m in members {
        let node = &d.boxes[m];
        for i in 0..node.in_ports.len() {
            let Some(&w) = feeding.get(&Port::Box(m.clone(), i)) else {
                continue;
            };
            let w = &d.wires[w];
            if inside(&w.src) {
                continue;
            }
            match in_index.get(&w.src) {
                Some(&k) => {
                    if in_wires[k].value.is_none() {
                        in_wires[k].value = w.value.clone();
                    }
                }
                None => {
                    let k = in_ports.len();
                    in_index.insert(w.src.clone(), k);
                    in_ports.push(node.in_ports[i].clone());
                    in_wires.push(Wire {
                        src: w.src.clone(),
                        dst: Port::Box(merged_id.clone(), k),
                        value: w.value.clone(),
                    });
                }
            }
        }
    }

    let mut out_ports = Vec::new();
    let mut out_index: HashMap<Port, usize> = HashMap::new();
    for m in members {
        let node = &d.boxes[m];
        for j in 0..node.out_ports.len() {
            let p = Port::Box(m.clone(), j);
            if d.wires.iter().any(|w| w.src == p && !inside(&w.dst)) {
                out_index.insert(p, out_ports.len());
                out_ports.push(node.out_ports[j].clone());
            }
        }
    }

    let mut out = WiringDiagram::new(d.outer_in.clone(), d.outer_out.clone());
    out.boxes = d
        .boxes
        .iter()
        .filter(|(k, _)| !members.contains(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    out.boxes.insert(
        merged_id.clone(),
        BoxNode::new(BoxLabel::Unknown, in_ports, out_ports),
    );
    for w in &d.wires {
        match (inside(&w.src), inside(&w.dst)) {
            (false, false) => out.wires.push(w.clone()),
            (true, false) => out.wires.push(Wire {
                src: Port::Box(merged_id.clone(), out_index[&w.src]),
                dst: w.dst.clone(),
                value: w.value.clone(),
            }),
            _ => {}
        }
    }
    out.wires.extend(in_wires);
    out
}
