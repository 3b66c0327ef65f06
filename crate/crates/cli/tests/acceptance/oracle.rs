//! Reference implementations used to check the library, written against
//! plain vectors with no shared code: Warshall closure, convex closure, the
//! cartesian rewrite rules applied one step at a time, brute-force anchored
//! isomorphism, and term signatures of fully shared graphs.

use std::collections::{HashMap, HashSet};

use flowsem::{BoxLabel, Port, WiringDiagram};

/// Reflexive-transitive closure of `edges` on `n` points.
pub fn warshall(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Src {
    Outer(usize),
    Box(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OBox {
    pub label: String,
    pub unknown: bool,
    pub n_out: usize,
    pub inputs: Vec<Src>,
}

/// A diagram as vectors: boxes listed so that every input refers to an
/// earlier box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OGraph {
    pub n_in: usize,
    pub boxes: Vec<OBox>,
    pub outs: Vec<Src>,
}

#[derive(Debug, Clone, Copy)]
pub enum Rewrite {
    Delete(usize),
    /// Redirect the consumers of the second box to the first, then drop it.
    Merge(usize, usize),
}

impl OGraph {
    pub fn from_diagram(d: &WiringDiagram) -> OGraph {
        let ids: Vec<_> = d.boxes.keys().cloned().collect();
        let feed: HashMap<&Port, &Port> = d.wires.iter().map(|w| (&w.dst, &w.src)).collect();
        let source_box = |p: &Port| match p {
            Port::Box(b, _) => Some(b.clone()),
            Port::Outer(_) => None,
        };
        // Repeatedly place the first unplaced box whose producers are placed.
        let mut placed: Vec<usize> = Vec::new();
        let mut pos: HashMap<usize, usize> = HashMap::new();
        while placed.len() < ids.len() {
            let next = (0..ids.len())
                .find(|i| {
                    !pos.contains_key(i)
                        && (0..d.boxes[&ids[*i]].in_ports.len()).all(|k| {
                            match feed.get(&Port::Box(ids[*i].clone(), k)).and_then(|p| source_box(p)) {
                                Some(b) => pos.contains_key(&ids.iter().position(|x| *x == b).unwrap()),
                                None => true,
                            }
                        })
                })
                .expect("acyclic");
            pos.insert(next, placed.len());
            placed.push(next);
        }
        let index: HashMap<_, _> = ids.iter().enumerate().map(|(i, id)| (id.clone(), pos[&i])).collect();
        let src = |p: &Port| match p {
            Port::Outer(i) => Src::Outer(*i),
            Port::Box(b, j) => Src::Box(index[b], *j),
        };
        let boxes = placed
            .iter()
            .map(|&i| {
                let node = &d.boxes[&ids[i]];
                OBox {
                    label: node.label.text(),
                    unknown: matches!(node.label, BoxLabel::Unknown),
                    n_out: node.out_ports.len(),
                    inputs: (0..node.in_ports.len())
                        .map(|k| src(feed[&Port::Box(ids[i].clone(), k)]))
                        .collect(),
                }
            })
            .collect();
        let outs = (0..d.outer_out.len()).map(|k| src(feed[&Port::Outer(k)])).collect();
        OGraph {
            n_in: d.outer_in.len(),
            boxes,
            outs,
        }
    }

    fn consumed(&self, b: usize) -> bool {
        let uses = |s: &Src| matches!(s, Src::Box(x, _) if *x == b);
        self.outs.iter().any(uses) || self.boxes.iter().any(|x| x.inputs.iter().any(uses))
    }

    pub fn rewrites(&self) -> Vec<Rewrite> {
        let mut out = Vec::new();
        for (i, b) in self.boxes.iter().enumerate() {
            if !b.unknown && !self.consumed(i) {
                out.push(Rewrite::Delete(i));
            }
        }
        for i in 0..self.boxes.len() {
            for j in i + 1..self.boxes.len() {
                let (a, b) = (&self.boxes[i], &self.boxes[j]);
                if !a.unknown && !b.unknown && a.label == b.label && a.n_out == b.n_out && a.inputs == b.inputs {
                    out.push(Rewrite::Merge(i, j));
                }
            }
        }
        out
    }

    pub fn apply(&self, r: Rewrite) -> OGraph {
        let (gone, keep) = match r {
            Rewrite::Delete(i) => (i, None),
            Rewrite::Merge(i, j) => (j, Some(i)),
        };
        let fix = |s: Src| match s {
            Src::Box(x, p) if x == gone => Src::Box(keep.expect("deleted boxes have no consumers"), p),
            Src::Box(x, p) if x > gone => Src::Box(x - 1, p),
            s => s,
        };
        let boxes = self
            .boxes
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != gone)
            .map(|(_, b)| OBox {
                inputs: b.inputs.iter().map(|&s| fix(s)).collect(),
                ..b.clone()
            })
            .collect();
        OGraph {
            n_in: self.n_in,
            boxes,
            outs: self.outs.iter().map(|&s| fix(s)).collect(),
        }
    }

    /// Rewrites until stuck, always taking the last applicable rewrite.
    pub fn terminal_last(&self) -> OGraph {
        let mut g = self.clone();
        while let Some(&r) = g.rewrites().last() {
            g = g.apply(r);
        }
        g
    }

    /// Every stuck graph reachable by some rewrite sequence.
    pub fn all_terminals(&self) -> Vec<OGraph> {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        let mut out = Vec::new();
        while let Some(g) = stack.pop() {
            if !seen.insert(g.clone()) {
                continue;
            }
            let rs = g.rewrites();
            if rs.is_empty() {
                out.push(g);
            } else {
                stack.extend(rs.into_iter().map(|r| g.apply(r)));
            }
        }
        out
    }

    /// Term of every box and outer output, for graphs without unknown boxes.
    /// On graphs where no rewrite applies, equal signatures mean isomorphic.
    pub fn signature(&self) -> (Vec<String>, Vec<String>) {
        let mut terms: Vec<String> = Vec::with_capacity(self.boxes.len());
        let show = |s: &Src, terms: &[String], boxes: &[OBox]| match s {
            Src::Outer(i) => format!("x{i}"),
            Src::Box(b, p) if boxes[*b].n_out == 1 => terms[*b].clone(),
            Src::Box(b, p) => format!("{}.{p}", terms[*b]),
        };
        for b in &self.boxes {
            let args: Vec<String> = b.inputs.iter().map(|s| show(s, &terms, &self.boxes)).collect();
            terms.push(format!("{}({})", b.label, args.join(",")));
        }
        let outs = self.outs.iter().map(|s| show(s, &terms, &self.boxes)).collect();
        terms.sort();
        (terms, outs)
    }
}

/// Anchored isomorphism by exhaustive search over label-respecting
/// bijections.
pub fn isomorphic(a: &OGraph, b: &OGraph) -> bool {
    if a.n_in != b.n_in || a.outs.len() != b.outs.len() || a.boxes.len() != b.boxes.len() {
        return false;
    }
    fn go(a: &OGraph, b: &OGraph, i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let image = |s: Src, map: &Vec<usize>| match s {
            Src::Box(x, p) => Src::Box(map[x], p),
            s => s,
        };
        if i == a.boxes.len() {
            return a.outs.iter().zip(&b.outs).all(|(&x, &y)| image(x, map) == y);
        }
        let x = &a.boxes[i];
        for j in 0..b.boxes.len() {
            let y = &b.boxes[j];
            if used[j] || x.label != y.label || x.unknown != y.unknown || x.n_out != y.n_out || x.inputs.len() != y.inputs.len() {
                continue;
            }
            // Inputs of box i refer to earlier boxes, which are mapped.
            if !x.inputs.iter().zip(&y.inputs).all(|(&s, &t)| image(s, map) == t) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if go(a, b, i + 1, map, used) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    go(a, b, 0, &mut vec![usize::MAX; a.boxes.len()], &mut vec![false; b.boxes.len()])
}

/// Cartesian equality for small graphs: every rewrite order is explored and
/// the stuck forms compared by brute force.
pub fn equal_up_to_rewriting(a: &OGraph, b: &OGraph) -> bool {
    let ta = a.all_terminals();
    let tb = b.all_terminals();
    ta.iter().any(|x| tb.iter().any(|y| isomorphic(x, y)))
}

/// Boxes on a directed path between two members of `seed`, from a Warshall
/// closure of the box-level edge relation.
pub fn convex_closure(g: &OGraph, seed: &[usize]) -> Vec<usize> {
    let mut edges = Vec::new();
    for (j, b) in g.boxes.iter().enumerate() {
        for s in &b.inputs {
            if let Src::Box(i, _) = s {
                edges.push((*i, j));
            }
        }
    }
    let r = warshall(g.boxes.len(), &edges);
    (0..g.boxes.len())
        .filter(|&x| seed.iter().any(|&s| r[s][x]) && seed.iter().any(|&t| r[x][t]))
        .collect()
}
