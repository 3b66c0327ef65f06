//! Cartesian normal form.
//!
//! In a free cartesian category every generator is total and deterministic,
//! so deleting its outputs equals deleting its inputs and copying its output
//! equals running it twice on copies. Read right to left, those two laws
//! remove dead boxes and merge duplicate boxes; applied to fixpoint they give
//! a form in which equal morphisms have isomorphic diagrams. The merge pass
//! is hash-consing over a topological order, i.e. congruence closure on the
//! term graph. Unknown boxes are left alone by both passes.

use std::collections::{BTreeSet, HashMap};

use super::{BoxId, BoxLabel, Port, WiringDiagram};

pub fn normalize(d: &WiringDiagram) -> WiringDiagram {
    let mut d = d.clone();
    loop {
        let removed = eliminate_dead_boxes(&mut d);
        let merged = share_duplicates(&mut d);
        if !removed && !merged {
            break;
        }
    }
    d.sort_wires();
    d
}

/// Removes boxes with no path to an outer output. Unknown boxes are kept,
/// along with everything upstream of a kept box.
fn eliminate_dead_boxes(d: &mut WiringDiagram) -> bool {
    let mut live: BTreeSet<BoxId> = d
        .boxes
        .iter()
        .filter(|(_, b)| b.label.is_unknown())
        .map(|(id, _)| id.clone())
        .collect();
    for w in &d.wires {
        if let (Port::Box(b, _), Port::Outer(_)) = (&w.src, &w.dst) {
            live.insert(b.clone());
        }
    }
    let mut frontier: Vec<BoxId> = live.iter().cloned().collect();
    let mut preds: HashMap<&BoxId, Vec<&BoxId>> = HashMap::new();
    for w in &d.wires {
        if let (Port::Box(a, _), Port::Box(b, _)) = (&w.src, &w.dst) {
            preds.entry(b).or_default().push(a);
        }
    }
    while let Some(b) = frontier.pop() {
        for &p in preds.get(&b).into_iter().flatten() {
            if live.insert(p.clone()) {
                frontier.push(p.clone());
            }
        }
    }
    if live.len() == d.boxes.len() {
        return false;
    }
    d.boxes.retain(|id, _| live.contains(id));
    d.wires.retain(|w| {
        w.src.box_id().is_none_or(|b| live.contains(b))
            && w.dst.box_id().is_none_or(|b| live.contains(b))
    });
    true
}

/// Merges boxes that have the same label, the same number of outputs and
/// identical input sources. One pass in topological order suffices because
/// sources are canonicalized before a box is keyed.
fn share_duplicates(d: &mut WiringDiagram) -> bool {
    let Ok(order) = d.topological_order() else {
        return false;
    };
    let src_of: HashMap<&Port, &Port> = d.wires.iter().map(|w| (&w.dst, &w.src)).collect();
    let mut redirect: HashMap<BoxId, BoxId> = HashMap::new();
    let mut seen: HashMap<(&BoxLabel, usize, Vec<Port>), &BoxId> = HashMap::new();
    for id in &order {
        let node = &d.boxes[id];
        if node.label.is_unknown() {
            continue;
        }
        let sources: Vec<Port> = (0..node.in_ports.len())
            .map(|i| {
                let src = src_of
                    .get(&Port::Box(id.clone(), i))
                    .map(|p| (*p).clone())
                    .unwrap_or(Port::Outer(usize::MAX));
                canonical(src, &redirect)
            })
            .collect();
        match seen.entry((&node.label, node.out_ports.len(), sources)) {
            std::collections::hash_map::Entry::Occupied(e) => {
                redirect.insert(id.clone(), (*e.get()).clone());
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(id);
            }
        }
    }
    if redirect.is_empty() {
        return false;
    }
    d.boxes.retain(|id, _| !redirect.contains_key(id));
    d.wires
        .retain(|w| w.dst.box_id().is_none_or(|b| !redirect.contains_key(b)));
    for w in &mut d.wires {
        w.src = canonical(w.src.clone(), &redirect);
    }
    true
}

fn canonical(p: Port, redirect: &HashMap<BoxId, BoxId>) -> Port {
    match p {
        Port::Box(b, i) => match redirect.get(&b) {
            Some(c) => Port::Box(c.clone(), i),
            None => Port::Box(b, i),
        },
        outer => outer,
    }
}
