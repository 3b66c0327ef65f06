//! Semantic enrichment: expansion against an ontology, then contraction of
//! what stays unannotated.

mod contract;
mod expand;
mod functoriality;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{BoxId, DiagramError, WiringDiagram};
use crate::ontology::{ConcreteRef, Ontology};

pub use contract::{contract, convex_closure};
pub use expand::{expand, expand_with_report};
pub use functoriality::check_annotation_functoriality;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnrichmentMode {
    /// Abort on the first coercion failure or broken annotation.
    Strict,
    /// Degrade to unknown types or boxes and record a warning.
    #[default]
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnrichmentConfig {
    pub mode: EnrichmentMode,
    pub keep_values: bool,
}

impl Default for EnrichmentConfig {
    fn default() -> Self {
        Self {
            mode: EnrichmentMode::Lenient,
            keep_values: true,
        }
    }
}

impl EnrichmentConfig {
    pub fn strict() -> Self {
        Self {
            mode: EnrichmentMode::Strict,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnrichmentReport {
    pub expanded_boxes: usize,
    pub unknown_boxes_before: usize,
    pub unknown_boxes_after: usize,
    pub coercion_warnings: Vec<String>,
    pub unresolved_refs: Vec<ConcreteRef>,
    pub annotation_warnings: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnrichError {
    #[error("wire {source_port} -> {target_port}: `{source_type}` is not a subtype of `{target_type}`")]
    Coercion {
        source_port: String,
        target_port: String,
        source_type: String,
        target_type: String,
    },
    #[error("annotation `{annotation}` does not fit box `{box_id}`: {detail}")]
    SlotMismatch {
        box_id: BoxId,
        annotation: String,
        detail: String,
    },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Expansion followed by contraction.
pub fn enrich(
    raw: &WiringDiagram,
    o: &Ontology,
    cfg: &EnrichmentConfig,
) -> Result<(WiringDiagram, EnrichmentReport), EnrichError> {
    let (expanded, mut report) = expand_with_report(raw, o, cfg)?;
    report.unknown_boxes_before = expanded.unknown_count();
    let contracted = contract(&expanded);
    report.unknown_boxes_after = contracted.unknown_count();
    Ok((contracted, report))
}
