use std::fmt::Write as _;

use crate::automata::FiniteAutomaton;
use crate::session::Problem;
use crate::syntax::{Context, FormulaSet, Letter, SimpleProgram};

fn write_automaton(ctx: &Context, s: SimpleProgram, aut: &FiniteAutomaton, out: &mut String) {
    let _ = writeln!(out, "  automaton {} {{", ctx.simple_name(s));
    let states: Vec<String> = (0..aut.num_states()).map(|q| q.to_string()).collect();
    let _ = writeln!(out, "    states: {};", states.join(" "));
    let init: Vec<String> = aut.initial().iter().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "    initial: {};", init.join(" "));
    let fin: Vec<String> = aut.finals().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "    final: {};", fin.join(" "));
    out.push_str("    trans:");
    for (q, l, t) in aut.transitions() {
        if let Letter::Simple(x) = l {
            let _ = write!(out, " {q} -{}-> {t};", ctx.simple_name(x));
        }
    }
    out.push_str("\n  }\n");
}

fn sorted(ctx: &Context, set: &FormulaSet) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|f| ctx.show(f).to_string()).collect();
    v.sort();
    v
}

/// Prints a problem in the input syntax. Automata are written out
/// explicitly and formulas are sorted, so printing a reparsed printout
/// gives the same text.
pub fn print_problem(p: &Problem) -> String {
    let ctx = &p.ctx;
    let mut out = String::new();
    if !p.logic.atoms().is_empty() {
        out.push_str("logic {\n");
        let names: Vec<&str> = p.logic.atoms().iter().map(|&a| ctx.atom_name(a)).collect();
        let _ = writeln!(out, "  atoms: {};", names.join(", "));
        for &a in p.logic.atoms() {
            for s in [SimpleProgram::positive(a), SimpleProgram::positive(a).converse()] {
                if p.logic.is_explicit(s) {
                    write_automaton(ctx, s, &p.logic.aut(s), &mut out);
                }
            }
        }
        out.push_str("}\n");
    }
    if !p.assumptions.is_empty() {
        out.push_str("assumptions {\n");
        for f in sorted(ctx, &p.assumptions) {
            let _ = writeln!(out, "  {f};");
        }
        out.push_str("}\n");
    }
    out.push_str("goal {\n");
    for f in sorted(ctx, &p.goal) {
        let _ = writeln!(out, "  {f};");
    }
    out.push_str("}\n");
    out
}
