//! Raw and semantic flow-graph documents.
//!
//! ```json
//! {"version": 1, "kind": "raw", "metadata": {},
//!  "boxes": [{"id": "b0",
//!             "label": {"tag": "concrete", "ref": {"language": "python", "package": "numpy", "qualified_name": "genfromtxt"}},
//!             "in_ports": [{"tag": "unknown"}], "out_ports": [{"tag": "abstract", "id": "table"}],
//!             "call": {"in": ["0"], "consts": {"delimiter": {"literal": ","}}}}],
//!  "wires": [{"src": ["@outer", 0], "dst": ["b0", 0], "value": {"literal": "iris.csv"}},
//!            {"src": ["b0", 0], "dst": ["@outer", 0], "value": {"ref": "obj-1"}}],
//!  "outer_in": [{"tag": "unknown"}], "outer_out": [{"tag": "unknown"}]}
//! ```
//!
//! Labels are `concrete` (with `ref`), `concept` (with `id`) or `unknown`;
//! port types are `concrete` (with `ref`), `abstract` (with `id`) or
//! `unknown`. Values are `{"literal": ...}` or `{"ref": "..."}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{validate_diagram, BoxId, BoxLabel, BoxNode, CallInfo, PortType, Wire, WiringDiagram, OUTER};
use crate::ontology::ConcreteRef;
use crate::report::Report;

pub const VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowGraphKind {
    Raw,
    Semantic,
}

impl fmt::Display for FlowGraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlowGraphKind::Raw => "raw",
            FlowGraphKind::Semantic => "semantic",
        })
    }
}

#[derive(Debug, Error)]
pub enum FlowGraphError {
    #[error("schema violation at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported flow-graph version {0} (expected {VERSION})")]
    Version(u64),
    #[error("{kind} document contains box `{box_id}` labelled `{label}`")]
    KindMismatch {
        kind: FlowGraphKind,
        box_id: BoxId,
        label: String,
    },
    #[error("duplicate box id `{0}`")]
    DuplicateBox(BoxId),
    #[error("invalid diagram:\n{0}")]
    Invalid(Report),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowGraphDocument {
    pub kind: FlowGraphKind,
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub diagram: WiringDiagram,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase", deny_unknown_fields)]
enum LabelRepr {
    Concrete {
        #[serde(rename = "ref")]
        concrete: ConcreteRef,
    },
    Concept {
        id: String,
    },
    Unknown,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase", deny_unknown_fields)]
enum PortRepr {
    Concrete {
        #[serde(rename = "ref")]
        concrete: ConcreteRef,
    },
    Abstract {
        id: String,
    },
    Unknown,
}

impl From<&PortType> for PortRepr {
    fn from(p: &PortType) -> Self {
        match p {
            PortType::Concrete(c) => PortRepr::Concrete { concrete: c.clone() },
            PortType::Abstract(id) => PortRepr::Abstract { id: id.clone() },
            PortType::Unknown => PortRepr::Unknown,
        }
    }
}

impl From<PortRepr> for PortType {
    fn from(p: PortRepr) -> Self {
        match p {
            PortRepr::Concrete { concrete } => PortType::Concrete(concrete),
            PortRepr::Abstract { id } => PortType::Abstract(id),
            PortRepr::Unknown => PortType::Unknown,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxRepr {
    id: BoxId,
    label: LabelRepr,
    in_ports: Vec<PortRepr>,
    out_ports: Vec<PortRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    call: Option<CallInfo>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRepr {
    version: u64,
    kind: FlowGraphKind,
    #[serde(default)]
    metadata: BTreeMap<String, serde_json::Value>,
    boxes: Vec<BoxRepr>,
    wires: Vec<Wire>,
    outer_in: Vec<PortRepr>,
    outer_out: Vec<PortRepr>,
}

impl FlowGraphDocument {
    pub fn new(kind: FlowGraphKind, diagram: WiringDiagram) -> Self {
        Self {
            kind,
            metadata: BTreeMap::new(),
            diagram,
        }
    }

    fn check_labels(&self) -> Result<(), FlowGraphError> {
        for (id, node) in &self.diagram.boxes {
            let ok = match (&node.label, self.kind) {
                (BoxLabel::Concrete(_), FlowGraphKind::Raw) => true,
                (BoxLabel::Concrete(_), FlowGraphKind::Semantic) => false,
                (_, FlowGraphKind::Semantic) => true,
                (_, FlowGraphKind::Raw) => false,
            };
            if !ok {
                return Err(FlowGraphError::KindMismatch {
                    kind: self.kind,
                    box_id: id.clone(),
                    label: node.label.text(),
                });
            }
        }
        Ok(())
    }
}

pub fn read_flowgraph(text: &str) -> Result<FlowGraphDocument, FlowGraphError> {
    let schema = |e: serde_json::Error| FlowGraphError::Schema {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    // Check the version before the rest so future layouts get a clear error.
    let value: serde_json::Value = serde_json::from_str(text).map_err(schema)?;
    if let Some(v) = value.get("version").and_then(|v| v.as_u64()) {
        if v != VERSION {
            return Err(FlowGraphError::Version(v));
        }
    }
    let repr: DocumentRepr = serde_json::from_str(text).map_err(schema)?;

    let mut diagram = WiringDiagram::new(
        repr.outer_in.into_iter().map(Into::into).collect(),
        repr.outer_out.into_iter().map(Into::into).collect(),
    );
    for b in repr.boxes {
        let label = match b.label {
            LabelRepr::Concrete { concrete } => BoxLabel::Concrete(concrete),
            LabelRepr::Concept { id } => BoxLabel::Concept(id),
            LabelRepr::Unknown => BoxLabel::Unknown,
        };
        if diagram.boxes.contains_key(&b.id) {
            return Err(FlowGraphError::DuplicateBox(b.id));
        }
        let node = BoxNode {
            label,
            in_ports: b.in_ports.into_iter().map(Into::into).collect(),
            out_ports: b.out_ports.into_iter().map(Into::into).collect(),
            call: b.call,
        };
        diagram.boxes.insert(b.id, node);
    }
    diagram.wires = repr.wires;

    let doc = FlowGraphDocument {
        kind: repr.kind,
        metadata: repr.metadata,
        diagram,
    };
    let report = validate_diagram(&doc.diagram, None);
    if report.has_errors() {
        return Err(FlowGraphError::Invalid(report));
    }
    doc.check_labels()?;
    Ok(doc)
}

/// Canonical pretty JSON with a trailing newline. Boxes are written in id
/// order and wires in their stored order.
pub fn write_flowgraph(doc: &FlowGraphDocument) -> String {
    debug_assert!(!doc.diagram.boxes.contains_key(&BoxId::from(OUTER)));
    let repr = DocumentRepr {
        version: VERSION,
        kind: doc.kind,
        metadata: doc.metadata.clone(),
        boxes: doc
            .diagram
            .boxes
            .iter()
            .map(|(id, node)| BoxRepr {
                id: id.clone(),
                label: match &node.label {
                    BoxLabel::Concrete(c) => LabelRepr::Concrete { concrete: c.clone() },
                    BoxLabel::Concept(id) => LabelRepr::Concept { id: id.clone() },
                    BoxLabel::Unknown => LabelRepr::Unknown,
                },
                in_ports: node.in_ports.iter().map(Into::into).collect(),
                out_ports: node.out_ports.iter().map(Into::into).collect(),
                call: node.call.clone(),
            })
            .collect(),
        wires: doc.diagram.wires.clone(),
        outer_in: doc.diagram.outer_in.iter().map(Into::into).collect(),
        outer_out: doc.diagram.outer_out.iter().map(Into::into).collect(),
    };
    let mut text = serde_json::to_string_pretty(&repr).expect("documents serialize");
    text.push('\n');
    text
}

impl FlowGraphDocument {
    pub fn parse(text: &str) -> Result<Self, FlowGraphError> {
        read_flowgraph(text)
    }

    pub fn to_json(&self) -> String {
        write_flowgraph(self)
    }
}
