use std::fmt::Write as _;

use crate::tableau::Tableau;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The tableau in Graphviz format. States are double octagons, non-states
/// boxes; deleted nodes are left out.
pub fn tableau_to_dot(t: &Tableau) -> String {
    let ctx = &t.session().ctx;
    let mut out = String::from("digraph tableau {\n  node [fontname=\"monospace\"];\n");
    for (v, n) in t.nodes() {
        if n.deleted {
            continue;
        }
        let shape = if n.is_state() { "doubleoctagon" } else { "box" };
        let rule = n.expansion.as_ref().map_or("", |e| e.rule.name());
        let show = |s: &crate::syntax::FormulaSet| -> String {
            s.iter().map(|f| ctx.show(f).to_string()).collect::<Vec<_>>().join(", ")
        };
        let mut text = format!("({v}) {rule} {:?}\\n{}", n.status, escape(&show(&n.label)));
        if !n.rformulas.is_empty() {
            let _ = write!(text, "\\nR: {}", escape(&show(&n.rformulas)));
        }
        if !n.dformulas.is_empty() {
            let _ = write!(text, "\\nD: {}", escape(&show(&n.dformulas)));
        }
        if let Some(f) = n.formula_sc {
            let _ = write!(text, "\\nSC: {}", escape(&ctx.show(f).to_string()));
        }
        let _ = writeln!(out, "  n{} [shape={shape}, label=\"{text}\"];", v.index());
    }
    for (v, n) in t.nodes() {
        if n.deleted {
            continue;
        }
        for &w in &n.succs {
            match t.node(w).ce_label {
                Some(ce) if n.is_state() => {
                    let label = escape(&ctx.show(ce).to_string());
                    let _ = writeln!(out, "  n{} -> n{} [label=\"{label}\"];", v.index(), w.index());
                }
                _ => {
                    let _ = writeln!(out, "  n{} -> n{};", v.index(), w.index());
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
