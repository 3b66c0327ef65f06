//! Every diagram of up to six boxes over `f, g: X -> X` and `m: X * X -> X`
//! with one outer input and one outer output, one listing per isomorphism
//! class (up to ties between identical boxes).
//!
//! A listing is canonical when it is the greedy topological order: each box
//! has the smallest key (label, sources) among the boxes ready at its step.

use flowsem::{BoxId, BoxLabel, BoxNode, Port, PortType, WiringDiagram};

use crate::oracle::{OBox, OGraph, Src};

pub const LABELS: [(&str, usize); 3] = [("f", 1), ("g", 1), ("m", 2)];

/// `(label index, sources)`; source 0 is the outer input, `k + 1` is box `k`.
pub type Step = (usize, [usize; 2]);

pub fn enumerate(max_boxes: usize, mut visit: impl FnMut(&[Step], usize)) {
    let mut steps = Vec::new();
    for n in 0..=max_boxes {
        extend(n, &mut steps, &mut visit);
    }
}

fn key(s: &Step) -> (usize, usize, usize) {
    (s.0, s.1[0], s.1[1])
}

fn extend(n: usize, steps: &mut Vec<Step>, visit: &mut impl FnMut(&[Step], usize)) {
    let j = steps.len();
    if j == n {
        for out in 0..=n {
            visit(steps, out);
        }
        return;
    }
    for (l, &(_, arity)) in LABELS.iter().enumerate() {
        for a in 0..=j {
            for b in 0..=if arity == 2 { j } else { 0 } {
                let step: Step = (l, [a, b]);
                let ready_from = if arity == 2 { a.max(b) } else { a };
                if (ready_from..j).all(|k| key(&steps[k]) <= key(&step)) {
                    steps.push(step);
                    extend(n, steps, visit);
                    steps.pop();
                }
            }
        }
    }
}

fn src(s: usize) -> Src {
    if s == 0 {
        Src::Outer(0)
    } else {
        Src::Box(s - 1, 0)
    }
}

pub fn to_graph(steps: &[Step], out: usize) -> OGraph {
    OGraph {
        n_in: 1,
        boxes: steps
            .iter()
            .map(|&(l, s)| OBox {
                label: LABELS[l].0.to_owned(),
                unknown: false,
                n_out: 1,
                inputs: s[..LABELS[l].1].iter().map(|&x| src(x)).collect(),
            })
            .collect(),
        outs: vec![src(out)],
    }
}

pub fn to_diagram(steps: &[Step], out: usize) -> WiringDiagram {
    let n = steps.len();
    // Ids run against the listing order.
    let id = |k: usize| BoxId::new(format!("n{}", n - k));
    let port = |s: usize| if s == 0 { Port::Outer(0) } else { Port::Box(id(s - 1), 0) };
    let mut d = WiringDiagram::new(vec![PortType::Unknown], vec![PortType::Unknown]);
    for (k, &(l, s)) in steps.iter().enumerate() {
        let (label, arity) = LABELS[l];
        d.insert_box(
            id(k),
            BoxNode::new(BoxLabel::Concept(label.into()), vec![PortType::Unknown; arity], vec![PortType::Unknown]),
        );
        for (i, &x) in s[..arity].iter().enumerate() {
            d.connect(port(x), Port::Box(id(k), i));
        }
    }
    d.connect(port(out), Port::Outer(0));
    d
}
