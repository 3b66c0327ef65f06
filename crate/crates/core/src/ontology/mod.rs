//! Ontology presentations: concepts, annotations and their preorders.
//!
//! An [`Ontology`] is built once from an [`OntologyDocument`] and is immutable
//! afterwards. Construction checks cross-references, computes the
//! reflexive-transitive closures of the subtype and subfunction generators,
//! and elaborates every function annotation that elaborates cleanly.

mod concrete;
mod preorder;
mod validate;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::diagram::WiringDiagram;
use crate::term::{self, MonoclTerm};

pub use concrete::{CallKind, ConcreteRef, Language, QualifiedName};
pub use preorder::Reachability;
pub use validate::validate_presentation;

/// A flattened product of basic types. The empty product is the unit type.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonoclType(pub Vec<String>);

impl MonoclType {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn basic(id: impl Into<String>) -> Self {
        Self(vec![id.into()])
    }

    pub fn product<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(ids.into_iter().map(Into::into).collect())
    }

    pub fn factors(&self) -> &[String] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &MonoclType) -> MonoclType {
        let mut factors = self.0.clone();
        factors.extend(other.0.iter().cloned());
        MonoclType(factors)
    }
}

impl fmt::Display for MonoclType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => f.write_str("()"),
            [single] => f.write_str(single),
            many => write!(f, "({})", many.join(" * ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeGenerator {
    pub id: String,
    #[serde(default)]
    pub display_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionGenerator {
    pub id: String,
    pub domain: MonoclType,
    pub codomain: MonoclType,
    #[serde(default)]
    pub display_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubtypeGenerator {
    pub sub: String,
    #[serde(rename = "super")]
    pub supertype: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubfunctionGenerator {
    pub sub: String,
    #[serde(rename = "super")]
    pub superfunction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeAnnotation {
    pub id: String,
    pub concrete: ConcreteRef,
    #[serde(rename = "abstract")]
    pub abstract_type: MonoclType,
}

/// Maps one concrete function onto an abstract program.
///
/// `input_slots[k]` names the concrete argument feeding domain port `k` of the
/// elaborated definition (`"0"`, `"1"`, ... for positionals, a keyword name,
/// or `"self"`). `output_slots[k]` names the concrete result carried by
/// codomain port `k` (`"return"`, `"return.0"`, `"self!"`, ...). `slot_types`
/// optionally records the concrete class of a slot for the functoriality
/// check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionAnnotation {
    pub id: String,
    pub concrete: ConcreteRef,
    #[serde(with = "term_text")]
    pub definition: MonoclTerm,
    #[serde(deserialize_with = "slot_list")]
    pub input_slots: Vec<String>,
    #[serde(deserialize_with = "slot_list")]
    pub output_slots: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub slot_types: BTreeMap<String, ConcreteRef>,
}

mod term_text {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::term::MonoclTerm;

    pub fn serialize<S: Serializer>(term: &MonoclTerm, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&term.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MonoclTerm, D::Error> {
        let text = String::deserialize(d)?;
        crate::term::parse_term(&text).map_err(de::Error::custom)
    }
}

/// Slots may be written as strings or as bare positional indices.
fn slot_list<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Slot {
        Index(u64),
        Name(String),
    }
    let slots = Vec::<Slot>::deserialize(d)?;
    Ok(slots
        .into_iter()
        .map(|s| match s {
            Slot::Index(i) => i.to_string(),
            Slot::Name(n) => n,
        })
        .collect())
}

/// The serialized form of a presentation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OntologyDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default)]
    pub types: Vec<TypeGenerator>,
    #[serde(default)]
    pub functions: Vec<FunctionGenerator>,
    #[serde(default)]
    pub subtypes: Vec<SubtypeGenerator>,
    #[serde(default)]
    pub subfunctions: Vec<SubfunctionGenerator>,
    #[serde(default)]
    pub type_annotations: Vec<TypeAnnotation>,
    #[serde(default)]
    pub function_annotations: Vec<FunctionAnnotation>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OntologyError {
    #[error("malformed ontology document at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("{context} references undeclared {kind} `{id}`")]
    DanglingReference {
        context: String,
        kind: &'static str,
        id: String,
    },
    #[error("invalid {context}: {message}")]
    Invalid { context: String, message: String },
    #[error("undeclared type `{0}`")]
    UndeclaredType(String),
    #[error("undeclared function `{0}`")]
    UndeclaredFunction(String),
}

type ConcreteKey = (Language, String, String);

fn concrete_key(language: Language, name: &QualifiedName) -> ConcreteKey {
    (language, name.0.clone(), name.1.clone())
}

#[derive(Debug, Clone)]
pub struct Ontology {
    doc: OntologyDocument,
    type_index: HashMap<String, usize>,
    function_index: HashMap<String, usize>,
    subtypes: Reachability,
    subfunctions: Reachability,
    type_annotation_index: HashMap<ConcreteKey, usize>,
    function_annotation_index: HashMap<ConcreteKey, usize>,
    elaborated: HashMap<String, WiringDiagram>,
}

/// Parses a JSON ontology document and builds the presentation.
pub fn parse_ontology_document(text: &str) -> Result<Ontology, OntologyError> {
    Ontology::parse(text)
}

impl Ontology {
    pub fn parse(text: &str) -> Result<Self, OntologyError> {
        let doc: OntologyDocument =
            serde_json::from_str(text).map_err(|e| OntologyError::Malformed {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        Self::from_document(doc)
    }

    pub fn empty() -> Self {
        Self::from_document(OntologyDocument::default()).expect("empty presentation is valid")
    }

    pub fn from_document(doc: OntologyDocument) -> Result<Self, OntologyError> {
        let mut seen = HashSet::new();
        let mut type_index = HashMap::new();
        let mut function_index = HashMap::new();
        for (i, t) in doc.types.iter().enumerate() {
            check_id(&t.id, "type generator")?;
            if !seen.insert(t.id.as_str()) {
                return Err(OntologyError::DuplicateId(t.id.clone()));
            }
            type_index.insert(t.id.clone(), i);
        }
        for (i, f) in doc.functions.iter().enumerate() {
            check_id(&f.id, "function generator")?;
            if !seen.insert(f.id.as_str()) {
                return Err(OntologyError::DuplicateId(f.id.clone()));
            }
            function_index.insert(f.id.clone(), i);
        }

        let need_type = |id: &str, context: String| {
            if type_index.contains_key(id) {
                Ok(())
            } else {
                Err(OntologyError::DanglingReference {
                    context,
                    kind: "type",
                    id: id.to_owned(),
                })
            }
        };
        let need_function = |id: &str, context: String| {
            if function_index.contains_key(id) {
                Ok(())
            } else {
                Err(OntologyError::DanglingReference {
                    context,
                    kind: "function",
                    id: id.to_owned(),
                })
            }
        };

        for f in &doc.functions {
            for t in f.domain.factors().iter().chain(f.codomain.factors()) {
                need_type(t, format!("function `{}`", f.id))?;
            }
        }
        let mut subtype_edges = Vec::with_capacity(doc.subtypes.len());
        for s in &doc.subtypes {
            let context = format!("subtype `{} <= {}`", s.sub, s.supertype);
            need_type(&s.sub, context.clone())?;
            need_type(&s.supertype, context.clone())?;
            if s.sub == s.supertype {
                return Err(OntologyError::Invalid {
                    context,
                    message: "a subtype generator must relate two distinct types".into(),
                });
            }
            subtype_edges.push((type_index[&s.sub], type_index[&s.supertype]));
        }
        let mut subfunction_edges = Vec::with_capacity(doc.subfunctions.len());
        for s in &doc.subfunctions {
            let context = format!("subfunction `{} <= {}`", s.sub, s.superfunction);
            need_function(&s.sub, context.clone())?;
            need_function(&s.superfunction, context.clone())?;
            if s.sub == s.superfunction {
                return Err(OntologyError::Invalid {
                    context,
                    message: "a subfunction generator must relate two distinct functions".into(),
                });
            }
            subfunction_edges.push((function_index[&s.sub], function_index[&s.superfunction]));
        }

        let mut annotation_ids = HashSet::new();
        let mut type_annotation_index = HashMap::new();
        for (i, a) in doc.type_annotations.iter().enumerate() {
            check_id(&a.id, "type annotation")?;
            if !annotation_ids.insert(a.id.as_str()) {
                return Err(OntologyError::DuplicateId(a.id.clone()));
            }
            for t in a.abstract_type.factors() {
                need_type(t, format!("type annotation `{}`", a.id))?;
            }
            type_annotation_index
                .entry(concrete_key(a.concrete.language, &a.concrete.own_name()))
                .or_insert(i);
        }
        let mut function_annotation_index = HashMap::new();
        for (i, a) in doc.function_annotations.iter().enumerate() {
            check_id(&a.id, "function annotation")?;
            if !annotation_ids.insert(a.id.as_str()) {
                return Err(OntologyError::DuplicateId(a.id.clone()));
            }
            function_annotation_index
                .entry(concrete_key(a.concrete.language, &a.concrete.own_name()))
                .or_insert(i);
        }

        let subtypes = Reachability::new(doc.types.len(), &subtype_edges);
        let subfunctions = Reachability::new(doc.functions.len(), &subfunction_edges);

        let mut ontology = Ontology {
            doc,
            type_index,
            function_index,
            subtypes,
            subfunctions,
            type_annotation_index,
            function_annotation_index,
            elaborated: HashMap::new(),
        };
        let elaborated = ontology
            .doc
            .function_annotations
            .iter()
            .filter_map(|a| {
                term::elaborate(&a.definition, &ontology)
                    .ok()
                    .map(|d| (a.id.clone(), d))
            })
            .collect();
        ontology.elaborated = elaborated;
        Ok(ontology)
    }

    pub fn document(&self) -> &OntologyDocument {
        &self.doc
    }

    pub fn to_document(&self) -> OntologyDocument {
        self.doc.clone()
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.doc).expect("documents serialize");
        text.push('\n');
        text
    }

    /// Hex SHA-256 of the canonical JSON; identifies the ontology in semantic
    /// documents.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn id(&self) -> Option<&str> {
        self.doc.id.as_deref()
    }

    pub fn types(&self) -> &[TypeGenerator] {
        &self.doc.types
    }

    pub fn functions(&self) -> &[FunctionGenerator] {
        &self.doc.functions
    }

    pub fn subtype_generators(&self) -> &[SubtypeGenerator] {
        &self.doc.subtypes
    }

    pub fn subfunction_generators(&self) -> &[SubfunctionGenerator] {
        &self.doc.subfunctions
    }

    pub fn type_annotations(&self) -> &[TypeAnnotation] {
        &self.doc.type_annotations
    }

    pub fn function_annotations(&self) -> &[FunctionAnnotation] {
        &self.doc.function_annotations
    }

    pub fn has_type(&self, id: &str) -> bool {
        self.type_index.contains_key(id)
    }

    pub fn function(&self, id: &str) -> Option<&FunctionGenerator> {
        self.function_index.get(id).map(|&i| &self.doc.functions[i])
    }

    fn type_idx(&self, id: &str) -> Result<usize, OntologyError> {
        self.type_index
            .get(id)
            .copied()
            .ok_or_else(|| OntologyError::UndeclaredType(id.to_owned()))
    }

    /// Basic-type subtyping in the reflexive-transitive closure.
    pub fn is_basic_subtype(&self, sub: &str, sup: &str) -> Result<bool, OntologyError> {
        let (a, b) = (self.type_idx(sub)?, self.type_idx(sup)?);
        Ok(self.subtypes.reaches(a, b))
    }

    /// `s <= t`: equal arity and componentwise subtyping. The unit type is
    /// only below itself.
    pub fn is_subtype(&self, s: &MonoclType, t: &MonoclType) -> Result<bool, OntologyError> {
        for id in s.factors().iter().chain(t.factors()) {
            self.type_idx(id)?;
        }
        if s.arity() != t.arity() {
            return Ok(false);
        }
        for (a, b) in s.factors().iter().zip(t.factors()) {
            if !self.is_basic_subtype(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_subfunction(&self, f: &str, g: &str) -> Result<bool, OntologyError> {
        let a = self
            .function_index
            .get(f)
            .ok_or_else(|| OntologyError::UndeclaredFunction(f.to_owned()))?;
        let b = self
            .function_index
            .get(g)
            .ok_or_else(|| OntologyError::UndeclaredFunction(g.to_owned()))?;
        Ok(self.subfunctions.reaches(*a, *b))
    }

    /// The abstract type of the first entry of `c`'s resolution list that has
    /// a type annotation.
    pub fn resolve_type_annotation(&self, c: &ConcreteRef) -> Option<&MonoclType> {
        c.resolution_list()
            .iter()
            .find_map(|q| self.type_annotation_index.get(&concrete_key(c.language, q)))
            .map(|&i| &self.doc.type_annotations[i].abstract_type)
    }

    /// The function annotation of the first entry of `c`'s resolution list
    /// that has one.
    pub fn resolve_function_annotation(&self, c: &ConcreteRef) -> Option<&FunctionAnnotation> {
        c.resolution_list()
            .iter()
            .find_map(|q| {
                self.function_annotation_index
                    .get(&concrete_key(c.language, q))
            })
            .map(|&i| &self.doc.function_annotations[i])
    }

    /// The elaborated definition of a function annotation, computed at load.
    /// `None` when the definition does not elaborate.
    pub fn annotation_diagram(&self, annotation_id: &str) -> Option<&WiringDiagram> {
        self.elaborated.get(annotation_id)
    }

    /// Groups of two or more mutually subtyped basic types.
    pub(crate) fn subtype_cycles(&self) -> Vec<Vec<String>> {
        self.subtypes
            .nontrivial_components()
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.doc.types[i].id.clone()).collect())
            .collect()
    }
}

fn check_id(id: &str, what: &str) -> Result<(), OntologyError> {
    if id.is_empty() {
        Err(OntologyError::Invalid {
            context: what.to_owned(),
            message: "ids must be nonempty".into(),
        })
    } else {
        Ok(())
    }
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.doc == other.doc
    }
}

impl Eq for Ontology {}
