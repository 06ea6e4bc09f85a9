//! Graphviz export of the half-edge form.

use pw_core::graph::{NodeKind, OpenPlaneGraph};
use pw_core::logc::format_complex;

pub fn to_dot(g: &OpenPlaneGraph) -> String {
    let mut out = String::from("graph pw {\n  node [fontname=\"Helvetica\"];\n");
    if g.scalar != pw_core::complex::ONE || g.free_loops > 0 {
        out.push_str(&format!(
            "  label=\"scalar {} loops {}\";\n",
            format_complex(g.scalar),
            g.free_loops
        ));
    }
    for (i, n) in g.nodes.iter().enumerate() {
        let attrs = match &n.kind {
            NodeKind::Black => "shape=circle, style=filled, fillcolor=black, label=\"\", width=0.2".to_string(),
            NodeKind::White(w) => format!("shape=circle, label=\"{}\"", format_complex(*w)),
            NodeKind::FSwap => "shape=diamond, label=\"\", width=0.25, height=0.25".to_string(),
            NodeKind::Port(k) => {
                let (side, idx) = if *k < g.n_inputs {
                    ("in", g.n_inputs - *k)
                } else {
                    ("out", *k - g.n_inputs + 1)
                };
                format!("shape=plaintext, label=\"{side}{idx}\"")
            }
        };
        out.push_str(&format!("  n{i} [{attrs}];\n"));
    }
    for (h, t) in g.edges() {
        out.push_str(&format!(
            "  n{} -- n{};\n",
            g.half_edges[h].node, g.half_edges[t].node
        ));
    }
    out.push_str("}\n");
    out
}
