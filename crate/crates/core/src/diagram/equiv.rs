//! Equivalence of diagrams.
//!
//! Two diagrams are equivalent when their normal forms are isomorphic as
//! boundary-anchored port graphs: the isomorphism fixes every outer port and
//! preserves box labels, port order and wiring. Port types and observed
//! values play no part.
//!
//! Isomorphism is decided by colour refinement over both graphs at once,
//! followed by a backtracking match in topological order over the remaining
//! ties. After normalization only unknown boxes can tie.

use std::collections::{BTreeSet, HashMap};

use super::{normalize, BoxId, BoxLabel, Port, WiringDiagram};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EquivalenceMode {
    /// Equality in the free cartesian category: normalize both sides first.
    #[default]
    Cartesian,
    /// Plain isomorphism, no normalization.
    Syntactic,
}

pub fn equivalent(d1: &WiringDiagram, d2: &WiringDiagram) -> bool {
    equivalent_with(d1, d2, EquivalenceMode::Cartesian)
}

pub fn equivalent_with(d1: &WiringDiagram, d2: &WiringDiagram, mode: EquivalenceMode) -> bool {
    match mode {
        EquivalenceMode::Cartesian => isomorphic(&normalize(d1), &normalize(d2)),
        EquivalenceMode::Syntactic => isomorphic(d1, d2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum End {
    Outer(usize),
    Box(usize, usize),
}

/// Index-based view of a diagram with boxes in topological order.
struct Indexed<'a> {
    labels: Vec<&'a BoxLabel>,
    n_out: Vec<usize>,
    inputs: Vec<Vec<Option<End>>>,
    outputs: Vec<Vec<Vec<End>>>,
    outer_out: Vec<Option<End>>,
}

impl<'a> Indexed<'a> {
    fn new(d: &'a WiringDiagram) -> Option<Self> {
        let order = d.topological_order().ok()?;
        let pos: HashMap<&BoxId, usize> = order.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let end = |p: &Port| -> Option<End> {
            match p {
                Port::Outer(i) => Some(End::Outer(*i)),
                Port::Box(b, i) => pos.get(b).map(|&k| End::Box(k, *i)),
            }
        };
        let nodes: Vec<_> = order.iter().map(|b| &d.boxes[b]).collect();
        let mut inputs: Vec<Vec<Option<End>>> =
            nodes.iter().map(|n| vec![None; n.in_ports.len()]).collect();
        let mut outputs: Vec<Vec<Vec<End>>> =
            nodes.iter().map(|n| vec![Vec::new(); n.out_ports.len()]).collect();
        let mut outer_out = vec![None; d.outer_out.len()];
        for w in &d.wires {
            let src = end(&w.src)?;
            let dst = end(&w.dst)?;
            match dst {
                End::Outer(k) => *outer_out.get_mut(k)? = Some(src),
                End::Box(b, i) => *inputs.get_mut(b)?.get_mut(i)? = Some(src),
            }
            if let End::Box(b, j) = src {
                outputs.get_mut(b)?.get_mut(j)?.push(dst);
            }
        }
        Some(Self {
            labels: nodes.iter().map(|n| &n.label).collect(),
            n_out: nodes.iter().map(|n| n.out_ports.len()).collect(),
            inputs,
            outputs,
            outer_out,
        })
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

type Signature = (u32, Vec<Option<(bool, usize, usize)>>, Vec<Vec<(bool, usize, usize)>>);

fn colour_of(end: End, colours: &[u32]) -> (bool, usize, usize) {
    match end {
        End::Outer(k) => (false, k, 0),
        End::Box(b, i) => (true, colours[b] as usize, i),
    }
}

/// Refines colours on both sides with a shared palette until the number of
/// classes stops growing.
fn refine<'a>(a: &Indexed<'a>, b: &Indexed<'a>) -> (Vec<u32>, Vec<u32>) {
    let mut palette: HashMap<(&'a BoxLabel, usize, usize), u32> = HashMap::new();
    let mut initial = |g: &Indexed<'a>| -> Vec<u32> {
        (0..g.len())
            .map(|i| {
                let key = (g.labels[i], g.inputs[i].len(), g.n_out[i]);
                let next = palette.len() as u32;
                *palette.entry(key).or_insert(next)
            })
            .collect::<Vec<_>>()
    };
    let mut ca = initial(a);
    let mut cb = initial(b);
    let mut classes = palette.len();
    loop {
        let mut palette: HashMap<Signature, u32> = HashMap::new();
        let mut step = |g: &Indexed, colours: &[u32]| -> Vec<u32> {
            (0..g.len())
                .map(|i| {
                    let ins = g.inputs[i]
                        .iter()
                        .map(|e| e.map(|e| colour_of(e, colours)))
                        .collect();
                    let outs = g.outputs[i]
                        .iter()
                        .map(|targets| {
                            let mut t: Vec<_> =
                                targets.iter().map(|&e| colour_of(e, colours)).collect();
                            t.sort_unstable();
                            t
                        })
                        .collect();
                    let next = palette.len() as u32;
                    *palette.entry((colours[i], ins, outs)).or_insert(next)
                })
                .collect()
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        let refined = palette.len();
        ca = na;
        cb = nb;
        if refined <= classes {
            return (ca, cb);
        }
        classes = refined;
    }
}

/// Boundary-anchored isomorphism, ignoring port types and observed values.
pub fn isomorphic(d1: &WiringDiagram, d2: &WiringDiagram) -> bool {
    if d1.outer_in.len() != d2.outer_in.len()
        || d1.outer_out.len() != d2.outer_out.len()
        || d1.boxes.len() != d2.boxes.len()
        || d1.wires.len() != d2.wires.len()
    {
        return false;
    }
    let (Some(a), Some(b)) = (Indexed::new(d1), Indexed::new(d2)) else {
        return false;
    };
    let (ca, cb) = refine(&a, &b);
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let mut candidates: HashMap<u32, Vec<usize>> = HashMap::new();
    for (j, &c) in cb.iter().enumerate() {
        candidates.entry(c).or_default().push(j);
    }
    let mut matcher = Matcher {
        a: &a,
        b: &b,
        ca: &ca,
        candidates: &candidates,
        map: vec![usize::MAX; a.len()],
        used: vec![false; b.len()],
    };
    matcher.search(0)
}

struct Matcher<'x, 'a> {
    a: &'x Indexed<'a>,
    b: &'x Indexed<'a>,
    ca: &'x [u32],
    candidates: &'x HashMap<u32, Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_, '_> {
    fn image(&self, e: Option<End>) -> Option<End> {
        e.map(|e| match e {
            End::Outer(k) => End::Outer(k),
            End::Box(x, p) => End::Box(self.map[x], p),
        })
    }

    fn search(&mut self, i: usize) -> bool {
        if i == self.a.len() {
            return (0..self.a.outer_out.len())
                .all(|k| self.image(self.a.outer_out[k]) == self.b.outer_out[k]);
        }
        let Some(options) = self.candidates.get(&self.ca[i]) else {
            return false;
        };
        for &j in options {
            if self.used[j] || self.a.labels[i] != self.b.labels[j] {
                continue;
            }
            let consistent = self.a.inputs[i].len() == self.b.inputs[j].len()
                && self.a.inputs[i]
                    .iter()
                    .zip(&self.b.inputs[j])
                    .all(|(&x, &y)| self.image(x) == y);
            if !consistent {
                continue;
            }
            self.map[i] = j;
            self.used[j] = true;
            if self.search(i + 1) {
                return true;
            }
            self.used[j] = false;
        }
        self.map[i] = usize::MAX;
        false
    }
}

/// A topological order that does not depend on box ids except as a last
/// resort: among ready boxes, the one whose input sources come earliest
/// wins (outer inputs first, by index), then the smallest label text.
pub fn canonical_order(d: &WiringDiagram) -> Vec<BoxId> {
    let succ = d.successors();
    let mut indegree: HashMap<&BoxId, usize> = d.boxes.keys().map(|k| (k, 0)).collect();
    for targets in succ.values() {
        for t in targets {
            *indegree.get_mut(t).expect("successors are boxes") += 1;
        }
    }
    let src_of: HashMap<&Port, &Port> = d.wires.iter().map(|w| (&w.dst, &w.src)).collect();
    let mut placed: HashMap<&BoxId, usize> = HashMap::new();
    let mut ready: BTreeSet<&BoxId> = indegree
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(k, _)| *k)
        .collect();
    let mut order = Vec::with_capacity(d.boxes.len());
    while !ready.is_empty() {
        let key = |id: &BoxId, placed: &HashMap<&BoxId, usize>| {
            let node = &d.boxes[id];
            let sources: Vec<(usize, usize, usize)> = (0..node.in_ports.len())
                .map(|i| match src_of.get(&Port::Box(id.clone(), i)) {
                    Some(Port::Outer(k)) => (0, *k, 0),
                    Some(Port::Box(b, p)) => (1, placed.get(b).copied().unwrap_or(usize::MAX), *p),
                    None => (2, 0, 0),
                })
                .collect();
            (sources, node.label.text(), id.clone())
        };
        let next = *ready
            .iter()
            .min_by_key(|id| key(id, &placed))
            .expect("ready is nonempty");
        ready.remove(next);
        placed.insert(next, order.len());
        order.push(next.clone());
        for t in &succ[next] {
            let n = indegree.get_mut(t).expect("successors are boxes");
            *n -= 1;
            if *n == 0 {
                ready.insert(t);
            }
        }
    }
    // Cyclic leftovers, if any, go last in id order.
    for id in d.boxes.keys() {
        if !placed.contains_key(id) {
            order.push(id.clone());
        }
    }
    order
}
