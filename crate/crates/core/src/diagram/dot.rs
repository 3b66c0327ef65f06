//! Graphviz rendering.

use std::collections::HashMap;
use std::fmt::Write;

use super::{canonical_order, Port, WiringDiagram};

#[derive(Debug, Clone, Copy, Default)]
pub struct DotOptions {
    /// Append observed values to edge labels.
    pub values: bool,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Renders a diagram as DOT. Nodes are named `b<k>` in canonical order, so
/// the output does not depend on box ids or wire order.
pub fn to_dot(d: &WiringDiagram, options: DotOptions) -> String {
    let order = canonical_order(d);
    let names: HashMap<_, _> = order
        .iter()
        .enumerate()
        .map(|(k, id)| (id, format!("b{k}")))
        .collect();
    let mut out = String::new();
    out.push_str("digraph {\n  rankdir=TB;\n  node [shape=box];\n");
    out.push_str("  subgraph cluster_outer {\n    label=\"outer\";\n    style=dashed;\n");
    for i in 0..d.outer_in.len() {
        let _ = writeln!(out, "    in{i} [shape=point];");
    }
    for j in 0..d.outer_out.len() {
        let _ = writeln!(out, "    out{j} [shape=point];");
    }
    out.push_str("  }\n");
    for id in &order {
        let node = &d.boxes[id];
        let _ = writeln!(out, "  {} [label={}];", names[id], quote(&node.label.text()));
    }
    let endpoint = |p: &Port, source: bool| match p {
        Port::Outer(i) if source => format!("in{i}"),
        Port::Outer(i) => format!("out{i}"),
        Port::Box(b, _) => names.get(b).cloned().unwrap_or_else(|| quote(b.as_str())),
    };
    let mut edges: Vec<(String, String, usize, usize, String)> = d
        .wires
        .iter()
        .map(|w| {
            let mut label = d.source_type(&w.src).map(|t| t.text()).unwrap_or_default();
            if options.values {
                if let Some(v) = &w.value {
                    if !label.is_empty() {
                        label.push_str(" = ");
                    }
                    label.push_str(&v.to_string());
                }
            }
            (
                endpoint(&w.src, true),
                endpoint(&w.dst, false),
                w.src.index(),
                w.dst.index(),
                label,
            )
        })
        .collect();
    edges.sort();
    for (src, dst, sp, dp, label) in edges {
        let _ = writeln!(
            out,
            "  {src} -> {dst} [label={}, taillabel=\"{sp}\", headlabel=\"{dp}\"];",
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}
