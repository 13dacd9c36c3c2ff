//! GraphViz export with one edge per state and generator, labelled
//! `a@i/output`.

use std::fmt::Write as _;

use crate::transducer::FiniteTransducer;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(t: &FiniteTransducer) -> String {
    let mut s = String::from("digraph transducer {\n  rankdir=LR;\n");
    for q in 0..t.state_count() {
        let shape = if t.initial() == Some(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  {} [shape={shape}];", quote(t.name(q)));
    }
    for q in 0..t.state_count() {
        for g in t.domain().generators() {
            let e = t.edge(q, g);
            let label = format!("{g}/{}", e.output);
            let _ = writeln!(s, "  {} -> {} [label={}];", quote(t.name(q)), quote(t.name(e.target)), quote(&label));
        }
    }
    s.push_str("}\n");
    s
}
