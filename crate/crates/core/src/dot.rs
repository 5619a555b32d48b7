//! Graphviz export.

use std::fmt::Write as _;

use crate::model::{Label, Lts};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders inputs as `?a`, outputs as `!x`, quiescence as `δ` and internal
/// steps as `τ`. An invisible node points at the initial state.
pub fn to_dot(m: &Lts) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(m.name()));
    out.push_str("  rankdir=LR;\n");
    out.push_str("  __init [shape=point, style=invis];\n");
    for s in m.states() {
        let _ = writeln!(out, "  {} [shape=circle];", quote(m.state_name(s)));
    }
    let _ = writeln!(out, "  __init -> {};", quote(m.state_name(m.initial())));
    for (s, l, t) in m.transitions() {
        let text = match l {
            Label::Delta => "δ".to_string(),
            Label::DeltaE => "δe".to_string(),
            Label::Tau => "τ".to_string(),
            Label::Act(a) if m.is_input(a) => format!("?{a}"),
            Label::Act(a) => format!("!{a}"),
        };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(m.state_name(*s)),
            quote(m.state_name(*t)),
            quote(&text)
        );
    }
    out.push_str("}\n");
    out
}
