//! Random instances.

use flowsem::ontology::{
    CallKind, FunctionGenerator, OntologyDocument, SubfunctionGenerator, SubtypeGenerator,
    TypeGenerator,
};
use flowsem::term::KEYWORDS;
use flowsem::{
    BoxId, BoxLabel, BoxNode, CallInfo, ConcreteRef, Language, Literal, MonoclTerm, MonoclType,
    ObservedValue, Port, PortType, WiringDiagram,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Concept labels with fixed arities, as a presentation would fix them.
pub const CONCEPTS: [(&str, usize, usize); 5] =
    [("f", 1, 1), ("g", 1, 1), ("m", 2, 1), ("s", 1, 2), ("c", 0, 1)];

fn random_value(rng: &mut impl Rng) -> Option<ObservedValue> {
    match rng.gen_range(0..6) {
        0 => Some(ObservedValue::Literal(Literal::Int(rng.gen_range(-5..50)))),
        1 => Some(ObservedValue::Literal(Literal::Text(format!("v{}", rng.gen_range(0..9))))),
        2 => Some(ObservedValue::Ref(format!("obj-{}", rng.gen_range(0..20)))),
        3 => Some(ObservedValue::Literal(Literal::Bool(rng.gen()))),
        _ => None,
    }
}

/// Box ids in shuffled order so that id order carries no information.
fn ids(rng: &mut impl Rng, n: usize) -> Vec<BoxId> {
    let mut ids: Vec<BoxId> = (0..n).map(|i| BoxId::new(format!("n{i}"))).collect();
    ids.shuffle(rng);
    ids
}

/// Wires every box input and outer output to a random earlier source.
fn wire_up(rng: &mut impl Rng, d: &mut WiringDiagram, order: &[BoxId]) {
    let mut sources: Vec<Port> = (0..d.outer_in.len()).map(Port::Outer).collect();
    for id in order {
        let node = &d.boxes[id];
        let (n_in, n_out) = (node.in_ports.len(), node.out_ports.len());
        for k in 0..n_in {
            let src = sources.choose(rng).expect("sources exist").clone();
            d.connect_with(src, Port::Box(id.clone(), k), random_value(rng));
        }
        sources.extend((0..n_out).map(|j| Port::Box(id.clone(), j)));
    }
    for k in 0..d.outer_out.len() {
        let src = sources.choose(rng).expect("sources exist").clone();
        d.connect_with(src, Port::Outer(k), random_value(rng));
    }
    d.wires.shuffle(rng);
}

/// Diagram over [`CONCEPTS`] and unknown boxes.
pub fn mixed_diagram(rng: &mut impl Rng, max_boxes: usize, p_unknown: f64) -> WiringDiagram {
    let n_in = rng.gen_range(1..=2);
    let n_out = rng.gen_range(1..=3);
    let mut d = WiringDiagram::new(vec![PortType::Unknown; n_in], vec![PortType::Unknown; n_out]);
    let n = rng.gen_range(0..=max_boxes);
    let order = ids(rng, n);
    for id in &order {
        let (label, n_in, n_out) = if rng.gen_bool(p_unknown) {
            (BoxLabel::Unknown, rng.gen_range(0..=3), rng.gen_range(1..=2))
        } else {
            let (l, i, o) = *CONCEPTS.choose(rng).unwrap();
            (BoxLabel::Concept(l.into()), i, o)
        };
        d.insert_box(
            id.clone(),
            BoxNode::new(label, vec![PortType::Unknown; n_in], vec![PortType::Unknown; n_out]),
        );
    }
    wire_up(rng, &mut d, &order);
    d
}

pub struct RawTemplate {
    pub concrete: ConcreteRef,
    pub ins: Vec<(&'static str, ConcreteRef)>,
    pub outs: Vec<(&'static str, ConcreteRef)>,
}

fn py(pkg: &str, name: &str, kind: CallKind) -> ConcreteRef {
    ConcreteRef::new(Language::Python, pkg, name, kind)
}

/// Concrete calls known to the mini-dso fixture, annotated or not.
pub fn raw_templates() -> Vec<RawTemplate> {
    let ty = |pkg: &str, name: &str| ConcreteRef::class(Language::Python, pkg, name);
    let (s, i, nd, df, km) = (
        ty("builtins", "str"),
        ty("builtins", "int"),
        ty("numpy", "ndarray"),
        ty("pandas", "core.frame.DataFrame"),
        ty("sklearn", "cluster.KMeans"),
    );
    let f = CallKind::Function;
    vec![
        RawTemplate { concrete: py("numpy", "genfromtxt", f), ins: vec![("0", s.clone())], outs: vec![("return", nd.clone())] },
        RawTemplate { concrete: py("pandas", "read_csv", f), ins: vec![("0", s.clone())], outs: vec![("return", df.clone())] },
        RawTemplate {
            concrete: py("scipy", "cluster.vq.kmeans2", f),
            ins: vec![("0", nd.clone()), ("1", i.clone())],
            outs: vec![("return.0", nd.clone()), ("return.1", nd.clone())],
        },
        RawTemplate {
            concrete: py("sklearn", "cluster.KMeans", CallKind::Constructor),
            ins: vec![("n_clusters", i.clone())],
            outs: vec![("return", km.clone())],
        },
        RawTemplate {
            concrete: py("sklearn", "cluster.KMeans.fit", CallKind::Method).with_fallback("sklearn", "base.BaseEstimator.fit"),
            ins: vec![("self", km.clone()), ("0", nd.clone())],
            outs: vec![("return", km.clone()), ("self!", km.clone())],
        },
        RawTemplate {
            concrete: py("sklearn", "cluster.KMeans.cluster_centers_", CallKind::Getter),
            ins: vec![("self", km.clone())],
            outs: vec![("return", nd.clone())],
        },
        RawTemplate {
            concrete: py("sklearn", "cluster.KMeans.labels_", CallKind::Getter),
            ins: vec![("self", km.clone())],
            outs: vec![("return", nd.clone())],
        },
        RawTemplate { concrete: py("numpy", "delete", f), ins: vec![("0", nd.clone())], outs: vec![("return", nd.clone())] },
        RawTemplate {
            concrete: py("pandas", "core.frame.DataFrame.drop", CallKind::Method),
            ins: vec![("self", df.clone())],
            outs: vec![("return", df.clone())],
        },
        RawTemplate {
            concrete: py("numpy", "add", f),
            ins: vec![("0", nd.clone()), ("1", nd.clone())],
            outs: vec![("return", nd.clone())],
        },
        RawTemplate {
            concrete: py("numpy", "linalg.eigh", f),
            ins: vec![("0", nd.clone())],
            outs: vec![("return.0", nd.clone()), ("return.1", nd.clone())],
        },
        RawTemplate { concrete: py("numpy", "random.rand", f), ins: vec![], outs: vec![("return", nd.clone())] },
    ]
}

fn boundary_type(rng: &mut impl Rng, templates: &[RawTemplate]) -> PortType {
    let t = templates.choose(rng).unwrap();
    let pool: Vec<&ConcreteRef> = t.ins.iter().chain(&t.outs).map(|(_, c)| c).collect();
    match pool.choose(rng) {
        Some(c) => PortType::Concrete((*c).clone()),
        None => PortType::Unknown,
    }
}

/// Raw diagram with the given boundary arities.
pub fn raw_diagram(rng: &mut impl Rng, templates: &[RawTemplate], n_in: usize, n_out: usize, max_boxes: usize) -> WiringDiagram {
    let outer_in = (0..n_in).map(|_| boundary_type(rng, templates)).collect();
    let outer_out = (0..n_out).map(|_| boundary_type(rng, templates)).collect();
    let mut d = WiringDiagram::new(outer_in, outer_out);
    let n = rng.gen_range(0..=max_boxes);
    let mut order = ids(rng, n);
    // Without outer inputs the first box must be a source.
    let sourceless = templates.iter().find(|t| t.ins.is_empty()).unwrap();
    if n_in == 0 {
        order.insert(0, BoxId::new("src"));
    }
    for (k, id) in order.iter().enumerate() {
        let t = if n_in == 0 && k == 0 { sourceless } else { templates.choose(rng).unwrap() };
        let mut node = BoxNode::new(
            BoxLabel::Concrete(t.concrete.clone()),
            t.ins.iter().map(|(_, c)| PortType::Concrete(c.clone())).collect(),
            t.outs.iter().map(|(_, c)| PortType::Concrete(c.clone())).collect(),
        );
        node.call = Some(CallInfo {
            in_slots: t.ins.iter().map(|(s, _)| s.to_string()).collect(),
            out_slots: t.outs.iter().map(|(s, _)| s.to_string()).collect(),
            consts: Default::default(),
        });
        d.insert_box(id.clone(), node);
    }
    wire_up(rng, &mut d, &order);
    d
}

pub fn identifier(rng: &mut impl Rng) -> String {
    const TAIL: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789-";
    loop {
        let mut s = String::new();
        s.push((b'a' + rng.gen_range(0..26u8)) as char);
        for _ in 0..rng.gen_range(0..8) {
            s.push(*TAIL.choose(rng).unwrap() as char);
        }
        if !KEYWORDS.contains(&s.as_str()) {
            return s;
        }
    }
}

fn monocl_type(rng: &mut impl Rng, names: &[String]) -> MonoclType {
    let n = rng.gen_range(0..=3);
    MonoclType((0..n).map(|_| names.choose(rng).unwrap().clone()).collect())
}

/// Arbitrary (not necessarily well-typed) term.
pub fn term(rng: &mut impl Rng, depth: usize) -> MonoclTerm {
    let names: Vec<String> = (0..4).map(|_| identifier(rng)).collect();
    term_with(rng, depth, &names)
}

fn term_with(rng: &mut impl Rng, depth: usize, names: &[String]) -> MonoclTerm {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    match if leaf { rng.gen_range(0..7) } else { rng.gen_range(7..9) } {
        0 | 1 => MonoclTerm::Generator(identifier(rng)),
        2 => MonoclTerm::Id(monocl_type(rng, names)),
        3 => MonoclTerm::Braid(monocl_type(rng, names), monocl_type(rng, names)),
        4 => MonoclTerm::Copy(monocl_type(rng, names)),
        5 => MonoclTerm::Delete(monocl_type(rng, names)),
        6 => MonoclTerm::Coerce(monocl_type(rng, names), monocl_type(rng, names)),
        k => {
            let n = rng.gen_range(2..=4);
            let children = (0..n).map(|_| term_with(rng, depth - 1, names)).collect();
            if k == 7 {
                MonoclTerm::Compose(children)
            } else {
                MonoclTerm::Product(children)
            }
        }
    }
}

/// Presentation with random types, functions and generator edges. Returns
/// the document and the raw subtype and subfunction edges.
pub fn presentation(rng: &mut impl Rng) -> (OntologyDocument, Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let n_types = rng.gen_range(1..=8);
    let n_functions = rng.gen_range(1..=6);
    let tname = |i: usize| format!("t{i}");
    let mut doc = OntologyDocument::default();
    for i in 0..n_types {
        doc.types.push(TypeGenerator { id: tname(i), display_name: String::new(), description: None });
    }
    let ty = |rng: &mut dyn rand::RngCore| {
        let n = rng.gen_range(0..=2);
        MonoclType((0..n).map(|_| tname(rng.gen_range(0..n_types))).collect())
    };
    for i in 0..n_functions {
        doc.functions.push(FunctionGenerator {
            id: format!("f{i}"),
            domain: ty(rng),
            codomain: ty(rng),
            display_name: String::new(),
            description: None,
        });
    }
    let density = rng.gen_range(0.0..0.4);
    let mut sub_edges = Vec::new();
    for a in 0..n_types {
        for b in 0..n_types {
            if a != b && rng.gen_bool(density) {
                sub_edges.push((a, b));
                doc.subtypes.push(SubtypeGenerator { sub: tname(a), supertype: tname(b) });
            }
        }
    }
    let mut fun_edges = Vec::new();
    for a in 0..n_functions {
        for b in 0..n_functions {
            if a != b && rng.gen_bool(density) {
                fun_edges.push((a, b));
                doc.subfunctions.push(SubfunctionGenerator { sub: format!("f{a}"), superfunction: format!("f{b}") });
            }
        }
    }
    (doc, sub_edges, fun_edges)
}
