//! Acyclic wiring diagrams shared by raw, abstract and semantic graphs.
//!
//! A diagram has boxes with ordered input and output ports, an outer boundary
//! with its own input and output ports, and wires from sources (box outputs,
//! outer inputs) to targets (box inputs, outer outputs). Every target has
//! exactly one incoming wire; sources may fan out to any number of wires,
//! including none. Fan-out is copying, fan-drop is deleting.

mod dot;
mod equiv;
mod normalize;
mod ops;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ontology::{ConcreteRef, MonoclType, OntologyError};

pub use dot::{to_dot, DotOptions};
pub use equiv::{canonical_order, equivalent, equivalent_with, isomorphic, EquivalenceMode};
pub use normalize::normalize;
pub use ops::{compose_diagrams, product_diagrams, substitute, PortMap};
pub use validate::validate_diagram;

/// Reserved id naming the outer boundary in serialized wires.
pub const OUTER: &str = "@outer";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoxId(String);

impl BoxId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BoxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for BoxId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoxLabel {
    Concrete(ConcreteRef),
    Concept(String),
    Unknown,
}

impl BoxLabel {
    pub fn is_unknown(&self) -> bool {
        matches!(self, BoxLabel::Unknown)
    }

    /// Text used for display and for tie-breaking in canonical orders.
    pub fn text(&self) -> String {
        match self {
            BoxLabel::Concrete(c) => c.to_string(),
            BoxLabel::Concept(id) => id.clone(),
            BoxLabel::Unknown => "?".to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PortType {
    Concrete(ConcreteRef),
    Abstract(String),
    Unknown,
}

impl PortType {
    pub fn abstract_id(&self) -> Option<&str> {
        match self {
            PortType::Abstract(id) => Some(id),
            _ => None,
        }
    }

    pub fn from_type(t: &MonoclType) -> Vec<PortType> {
        t.factors().iter().cloned().map(PortType::Abstract).collect()
    }

    pub fn text(&self) -> String {
        match self {
            PortType::Concrete(c) => c.qualified_name.clone(),
            PortType::Abstract(id) => id.clone(),
            PortType::Unknown => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Null => f.write_str("null"),
            Literal::Bool(b) => write!(f, "{b}"),
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Float(x) => write!(f, "{x:?}"),
            Literal::Text(s) => write!(f, "{s:?}"),
        }
    }
}

/// An element observed on a wire during one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservedValue {
    Literal(Literal),
    Ref(String),
}

impl fmt::Display for ObservedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservedValue::Literal(l) => l.fmt(f),
            ObservedValue::Ref(r) => write!(f, "<{r}>"),
        }
    }
}

/// Concrete-call metadata on raw boxes: the argument slot behind each input
/// port, the result slot behind each output port, and literal arguments that
/// were recorded without a port.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CallInfo {
    #[serde(default, rename = "in", skip_serializing_if = "Vec::is_empty")]
    pub in_slots: Vec<String>,
    #[serde(default, rename = "out", skip_serializing_if = "Vec::is_empty")]
    pub out_slots: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub consts: BTreeMap<String, ObservedValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxNode {
    pub label: BoxLabel,
    pub in_ports: Vec<PortType>,
    pub out_ports: Vec<PortType>,
    pub call: Option<CallInfo>,
}

impl BoxNode {
    pub fn new(label: BoxLabel, in_ports: Vec<PortType>, out_ports: Vec<PortType>) -> Self {
        Self {
            label,
            in_ports,
            out_ports,
            call: None,
        }
    }

    /// Slot name of input port `i`; positional index when no call info says
    /// otherwise.
    pub fn in_slot(&self, i: usize) -> String {
        self.call
            .as_ref()
            .and_then(|c| c.in_slots.get(i).cloned())
            .unwrap_or_else(|| i.to_string())
    }

    /// Slot name of output port `j`: `return` for a single result,
    /// `return.j` otherwise, unless call info says otherwise.
    pub fn out_slot(&self, j: usize) -> String {
        if let Some(s) = self.call.as_ref().and_then(|c| c.out_slots.get(j)) {
            return s.clone();
        }
        if self.out_ports.len() == 1 {
            "return".to_owned()
        } else {
            format!("return.{j}")
        }
    }
}

/// A wire endpoint. As a source, `Outer(i)` is outer input `i`; as a target
/// it is outer output `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    Outer(usize),
    Box(BoxId, usize),
}

impl Port {
    pub fn on(id: impl Into<BoxId>, index: usize) -> Self {
        Port::Box(id.into(), index)
    }

    pub fn box_id(&self) -> Option<&BoxId> {
        match self {
            Port::Box(b, _) => Some(b),
            Port::Outer(_) => None,
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Port::Outer(i) | Port::Box(_, i) => *i,
        }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Port::Outer(i) => write!(f, "{OUTER}:{i}"),
            Port::Box(b, i) => write!(f, "{b}:{i}"),
        }
    }
}

impl Serialize for Port {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Port::Outer(i) => (OUTER, *i).serialize(s),
            Port::Box(b, i) => (b.as_str(), *i).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Port {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (id, index) = <(String, usize)>::deserialize(d)?;
        Ok(if id == OUTER {
            Port::Outer(index)
        } else {
            Port::Box(BoxId(id), index)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wire {
    pub src: Port,
    pub dst: Port,
    #[serde(default)]
    pub value: Option<ObservedValue>,
}

impl Wire {
    pub fn new(src: Port, dst: Port) -> Self {
        Self {
            src,
            dst,
            value: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("no box `{0}`")]
    UnknownBox(BoxId),
    #[error("arity mismatch: {context} ({left} vs {right})")]
    ArityMismatch {
        context: String,
        left: usize,
        right: usize,
    },
    #[error("subtype violation at port {index}: `{source_type}` is not a subtype of `{target_type}`")]
    SubtypeViolation {
        index: usize,
        source_type: String,
        target_type: String,
    },
    #[error("invalid port map: {0}")]
    InvalidPortMap(String),
    #[error("output {port} of `{box_id}` has consumers but no replacement output is mapped to it")]
    UnmappedOutput { box_id: BoxId, port: usize },
    #[error("target {0} has no incoming wire")]
    Unfed(Port),
    #[error("diagram contains a cycle")]
    Cycle,
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WiringDiagram {
    pub boxes: BTreeMap<BoxId, BoxNode>,
    pub outer_in: Vec<PortType>,
    pub outer_out: Vec<PortType>,
    pub wires: Vec<Wire>,
}

impl WiringDiagram {
    pub fn new(outer_in: Vec<PortType>, outer_out: Vec<PortType>) -> Self {
        Self {
            boxes: BTreeMap::new(),
            outer_in,
            outer_out,
            wires: Vec::new(),
        }
    }

    /// The identity on a list of port types: no boxes, straight wires.
    pub fn identity(ports: Vec<PortType>) -> Self {
        let mut d = Self::new(ports.clone(), ports);
        for i in 0..d.outer_in.len() {
            d.connect(Port::Outer(i), Port::Outer(i));
        }
        d
    }

    /// A diagram holding one box wired straight to the boundary.
    pub fn single(id: impl Into<BoxId>, node: BoxNode) -> Self {
        let id = id.into();
        let mut d = Self::new(node.in_ports.clone(), node.out_ports.clone());
        let (n_in, n_out) = (node.in_ports.len(), node.out_ports.len());
        d.boxes.insert(id.clone(), node);
        for i in 0..n_in {
            d.connect(Port::Outer(i), Port::Box(id.clone(), i));
        }
        for j in 0..n_out {
            d.connect(Port::Box(id.clone(), j), Port::Outer(j));
        }
        d
    }

    pub fn insert_box(&mut self, id: impl Into<BoxId>, node: BoxNode) -> BoxId {
        let id = id.into();
        self.boxes.insert(id.clone(), node);
        id
    }

    /// Adds a box under the first unused id of the form `b<k>`.
    pub fn add_box(&mut self, node: BoxNode) -> BoxId {
        let id = self.fresh_id(&mut 0);
        self.boxes.insert(id.clone(), node);
        id
    }

    /// First `b<k>` with `k >= *counter` not naming a box; advances counter.
    pub fn fresh_id(&self, counter: &mut usize) -> BoxId {
        loop {
            let id = BoxId(format!("b{counter}"));
            *counter += 1;
            if !self.boxes.contains_key(&id) {
                return id;
            }
        }
    }

    pub fn connect(&mut self, src: Port, dst: Port) {
        self.wires.push(Wire::new(src, dst));
    }

    pub fn connect_with(&mut self, src: Port, dst: Port, value: Option<ObservedValue>) {
        self.wires.push(Wire { src, dst, value });
    }

    pub fn box_count(&self) -> usize {
        self.boxes.len()
    }

    pub fn unknown_count(&self) -> usize {
        self.boxes.values().filter(|b| b.label.is_unknown()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty() && self.outer_in.is_empty() && self.outer_out.is_empty()
    }

    /// Index of the wire feeding each target.
    pub fn feeding_wires(&self) -> HashMap<&Port, usize> {
        self.wires
            .iter()
            .enumerate()
            .map(|(i, w)| (&w.dst, i))
            .collect()
    }

    /// Source feeding a target, if any.
    pub fn source_of(&self, target: &Port) -> Option<&Port> {
        self.wires.iter().find(|w| &w.dst == target).map(|w| &w.src)
    }

    /// Type of a port used as a source.
    pub fn source_type(&self, p: &Port) -> Option<&PortType> {
        match p {
            Port::Outer(i) => self.outer_in.get(*i),
            Port::Box(b, i) => self.boxes.get(b)?.out_ports.get(*i),
        }
    }

    /// Type of a port used as a target.
    pub fn target_type(&self, p: &Port) -> Option<&PortType> {
        match p {
            Port::Outer(i) => self.outer_out.get(*i),
            Port::Box(b, i) => self.boxes.get(b)?.in_ports.get(*i),
        }
    }

    /// Box-level successor sets induced by wires.
    pub fn successors(&self) -> BTreeMap<&BoxId, BTreeSet<&BoxId>> {
        let mut succ: BTreeMap<&BoxId, BTreeSet<&BoxId>> =
            self.boxes.keys().map(|k| (k, BTreeSet::new())).collect();
        for w in &self.wires {
            if let (Port::Box(a, _), Port::Box(b, _)) = (&w.src, &w.dst) {
                if let Some(s) = succ.get_mut(a) {
                    if self.boxes.contains_key(b) {
                        s.insert(b);
                    }
                }
            }
        }
        succ
    }

    /// Kahn's algorithm; among ready boxes the smallest id goes first, so the
    /// order depends only on the box set and the edge relation, never on the
    /// order of `wires`.
    pub fn topological_order(&self) -> Result<Vec<BoxId>, DiagramError> {
        let succ = self.successors();
        let mut indegree: BTreeMap<&BoxId, usize> = self.boxes.keys().map(|k| (k, 0)).collect();
        for targets in succ.values() {
            for t in targets {
                *indegree.get_mut(t).expect("successors are boxes") += 1;
            }
        }
        let mut ready: BTreeSet<&BoxId> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(k, _)| *k)
            .collect();
        let mut order = Vec::with_capacity(self.boxes.len());
        while let Some(next) = ready.pop_first() {
            order.push(next.clone());
            for t in &succ[next] {
                let d = indegree.get_mut(t).expect("successors are boxes");
                *d -= 1;
                if *d == 0 {
                    ready.insert(t);
                }
            }
        }
        if order.len() == self.boxes.len() {
            Ok(order)
        } else {
            Err(DiagramError::Cycle)
        }
    }

    /// Renames boxes according to `rename`; ids not in the map are kept.
    pub fn rename_boxes(&mut self, rename: &HashMap<BoxId, BoxId>) {
        let boxes = std::mem::take(&mut self.boxes);
        self.boxes = boxes
            .into_iter()
            .map(|(k, v)| (rename.get(&k).cloned().unwrap_or(k), v))
            .collect();
        for w in &mut self.wires {
            for p in [&mut w.src, &mut w.dst] {
                if let Port::Box(b, _) = p {
                    if let Some(n) = rename.get(b) {
                        *b = n.clone();
                    }
                }
            }
        }
    }

    /// Drops every observed value.
    pub fn strip_values(&mut self) {
        for w in &mut self.wires {
            w.value = None;
        }
    }

    /// Sorts wires by target, then source. Diagram semantics never depend on
    /// wire order; this only fixes a presentation.
    pub fn sort_wires(&mut self) {
        self.wires
            .sort_by(|a, b| (&a.dst, &a.src).cmp(&(&b.dst, &b.src)));
    }
}
