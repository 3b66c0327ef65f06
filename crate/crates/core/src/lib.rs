//! Semantic enrichment of dataflow graphs.
//!
//! Raw flow graphs record the concrete calls observed while a data-science
//! script runs. This crate turns them into library-independent semantic flow
//! graphs by expanding annotated calls against a Monocl ontology and then
//! contracting whatever is left unannotated.
//!
//! The pieces, bottom up:
//!
//! - [`ontology`]: finite presentations of concepts and annotations, with the
//!   subtype and subfunction preorders.
//! - [`term`]: the point-free term syntax and its elaboration to diagrams.
//! - [`diagram`]: wiring diagrams with composition, products, substitution,
//!   normalization and equivalence.
//! - [`enrich`]: expansion and contraction.
//! - [`flowgraph`]: the JSON document format shared with the tracer.

pub mod diagram;
pub mod enrich;
pub mod flowgraph;
pub mod ontology;
pub mod report;
pub mod term;

pub use diagram::{
    BoxId, BoxLabel, BoxNode, CallInfo, Literal, ObservedValue, Port, PortType, Wire,
    WiringDiagram,
};
pub use enrich::{enrich, EnrichError, EnrichmentConfig, EnrichmentMode, EnrichmentReport};
pub use flowgraph::{FlowGraphDocument, FlowGraphError, FlowGraphKind};
pub use ontology::{ConcreteRef, Language, MonoclType, Ontology, OntologyError};
pub use report::{Diagnostic, Report, Severity};
pub use term::{MonoclTerm, TermError};
