use std::fmt::Write;

use mdag::{MDag, NodeId, NodeKind, Status};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// Node identifier: the variable name, or `R[X]` for an indicator, which
/// cannot collide with a variable name.
fn id(g: &MDag, v: NodeId) -> String {
    match g.kind(v) {
        Some(NodeKind::Indicator { owner }) => quote(&format!("R[{}]", g.node_name(owner))),
        _ => quote(&g.node_name(v)),
    }
}

/// Graphviz rendering. Complete variables are red boxes, incomplete ones
/// green outlines, unmeasured ones dashed, and indicators small diamonds.
pub fn render(g: &MDag) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(g.name()));
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [fontname=\"Helvetica\"];");
    for v in g.nodes() {
        let attrs = match (g.kind(v), g.status(v)) {
            (Some(NodeKind::Indicator { .. }), _) => {
                "shape=diamond, style=filled, fillcolor=lightgrey, fontsize=10".to_string()
            }
            (_, Some(Status::Complete)) => "shape=box, color=red, penwidth=2".to_string(),
            (_, Some(Status::Incomplete)) => "shape=ellipse, color=green, penwidth=2".to_string(),
            _ => "shape=ellipse, style=dashed, color=grey40".to_string(),
        };
        let role = g.role(v).filter(|r| *r != mdag::Role::Other);
        let label = match role {
            Some(r) => format!("\"{}\\n({r})\"", escape(&g.node_name(v))),
            None => quote(&g.node_name(v)),
        };
        let _ = writeln!(out, "  {} [label={label}, {attrs}];", id(g, v));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {} -> {};", id(g, a), id(g, b));
    }
    out.push_str("}\n");
    out
}
