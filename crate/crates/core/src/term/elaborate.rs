//! Terms to wiring diagrams.

use crate::diagram::{
    compose_diagrams, product_diagrams, BoxLabel, BoxNode, DiagramError, Port, PortType,
    WiringDiagram,
};
use crate::ontology::{MonoclType, Ontology, OntologyError};

use super::{MonoclTerm, TermError};

/// Elaborates a term into an abstract diagram.
///
/// Generators become concept boxes; identities, braids, copies, deletions
/// and coercions become bare wiring. A composition is accepted when each
/// codomain is componentwise a subtype of the next domain, and the coercion
/// stays implicit as a wire whose endpoint types differ.
pub fn elaborate(t: &MonoclTerm, o: &Ontology) -> Result<WiringDiagram, TermError> {
    let mut counter = 0;
    build(t, o, &mut counter)
}

/// Domain and codomain of a well-typed term.
pub fn infer_type(t: &MonoclTerm, o: &Ontology) -> Result<(MonoclType, MonoclType), TermError> {
    let d = elaborate(t, o)?;
    let ty = |ports: &[PortType]| {
        MonoclType(
            ports
                .iter()
                .map(|p| p.abstract_id().unwrap_or_default().to_owned())
                .collect(),
        )
    };
    Ok((ty(&d.outer_in), ty(&d.outer_out)))
}

fn check_type(t: &MonoclType, o: &Ontology) -> Result<Vec<PortType>, TermError> {
    for f in t.factors() {
        if !o.has_type(f) {
            return Err(TermError::UndeclaredType(f.clone()));
        }
    }
    Ok(PortType::from_type(t))
}

fn build(t: &MonoclTerm, o: &Ontology, counter: &mut usize) -> Result<WiringDiagram, TermError> {
    match t {
        MonoclTerm::Generator(id) => {
            let f = o
                .function(id)
                .ok_or_else(|| TermError::UnresolvedGenerator(id.clone()))?;
            let node = BoxNode::new(
                BoxLabel::Concept(f.id.clone()),
                PortType::from_type(&f.domain),
                PortType::from_type(&f.codomain),
            );
            let box_id = format!("b{counter}");
            *counter += 1;
            Ok(WiringDiagram::single(box_id.as_str(), node))
        }
        MonoclTerm::Compose(ts) => {
            let mut acc = build(&ts[0], o, counter)?;
            for (k, t) in ts.iter().enumerate().skip(1) {
                let next = build(t, o, counter)?;
                acc = compose_diagrams(&acc, &next, Some(o)).map_err(|e| composition_error(k, e))?;
            }
            Ok(acc)
        }
        MonoclTerm::Product(ts) => {
            let mut acc = build(&ts[0], o, counter)?;
            for t in &ts[1..] {
                acc = product_diagrams(&acc, &build(t, o, counter)?);
            }
            Ok(acc)
        }
        MonoclTerm::Id(ty) => Ok(WiringDiagram::identity(check_type(ty, o)?)),
        MonoclTerm::Braid(a, b) => {
            let (pa, pb) = (check_type(a, o)?, check_type(b, o)?);
            let (n, m) = (pa.len(), pb.len());
            let mut inputs = pa.clone();
            inputs.extend(pb.iter().cloned());
            let mut outputs = pb;
            outputs.extend(pa);
            let mut d = WiringDiagram::new(inputs, outputs);
            for i in 0..n {
                d.connect(Port::Outer(i), Port::Outer(m + i));
            }
            for j in 0..m {
                d.connect(Port::Outer(n + j), Port::Outer(j));
            }
            Ok(d)
        }
        MonoclTerm::Copy(ty) => {
            let ports = check_type(ty, o)?;
            let n = ports.len();
            let mut outputs = ports.clone();
            outputs.extend(ports.iter().cloned());
            let mut d = WiringDiagram::new(ports, outputs);
            for i in 0..n {
                d.connect(Port::Outer(i), Port::Outer(i));
                d.connect(Port::Outer(i), Port::Outer(n + i));
            }
            Ok(d)
        }
        MonoclTerm::Delete(ty) => Ok(WiringDiagram::new(check_type(ty, o)?, Vec::new())),
        MonoclTerm::Coerce(s, t) => {
            let (ps, pt) = (check_type(s, o)?, check_type(t, o)?);
            if !o.is_subtype(s, t).map_err(ontology_error)? {
                return Err(TermError::Coercion {
                    source_type: s.to_string(),
                    target_type: t.to_string(),
                });
            }
            let n = ps.len();
            let mut d = WiringDiagram::new(ps, pt);
            for i in 0..n {
                d.connect(Port::Outer(i), Port::Outer(i));
            }
            Ok(d)
        }
    }
}

fn ontology_error(e: OntologyError) -> TermError {
    match e {
        OntologyError::UndeclaredFunction(id) => TermError::UnresolvedGenerator(id),
        OntologyError::UndeclaredType(id) => TermError::UndeclaredType(id),
        other => TermError::UndeclaredType(other.to_string()),
    }
}

fn composition_error(position: usize, e: DiagramError) -> TermError {
    let detail = match e {
        DiagramError::ArityMismatch { left, right, .. } => {
            format!("codomain has {left} factor(s) but domain has {right}")
        }
        DiagramError::SubtypeViolation {
            index,
            source_type,
            target_type,
        } => format!("factor {index}: `{source_type}` is not a subtype of `{target_type}`"),
        DiagramError::Ontology(e) => return ontology_error(e),
        other => other.to_string(),
    };
    TermError::Composition { position, detail }
}
