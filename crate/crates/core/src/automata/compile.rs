use super::nfa::EpsilonNfa;
use super::{FiniteAutomaton, LogicSpec};
use crate::syntax::{Context, Letter, Program, ProgramId};

/// `Aut_α`: an automaton for the language of `α`, with tests as letters.
/// `α` must be in NCNF.
pub fn compile_program(ctx: &Context, p: ProgramId) -> FiniteAutomaton {
    let mut nfa = EpsilonNfa::default();
    let (s, a) = fragment(ctx, p, None, &mut nfa);
    nfa.finish(s, a)
}

/// `aut_α`: like [`compile_program`], but every simple letter `σ` of `α`
/// outside tests is replaced by a copy of the logic's `aut_σ`. For a simple
/// program this is `aut_σ` itself.
pub fn compile_closed(ctx: &Context, p: ProgramId, logic: &LogicSpec) -> FiniteAutomaton {
    if let Program::Simple(s) = ctx.program(p) {
        return logic.aut(s).trim();
    }
    let mut nfa = EpsilonNfa::default();
    let (s, a) = fragment(ctx, p, Some(logic), &mut nfa);
    nfa.finish(s, a)
}

fn fragment(ctx: &Context, p: ProgramId, logic: Option<&LogicSpec>, nfa: &mut EpsilonNfa) -> (u32, u32) {
    match ctx.program(p) {
        Program::Simple(sp) => {
            let start = nfa.add_state();
            let accept = nfa.add_state();
            match logic {
                None => nfa.add_transition(start, Letter::Simple(sp), accept),
                Some(logic) => {
                    let aut = logic.aut(sp);
                    let base: Vec<u32> = (0..aut.num_states()).map(|_| nfa.add_state()).collect();
                    for &q in aut.initial() {
                        nfa.add_eps(start, base[q as usize]);
                    }
                    for q in aut.finals() {
                        nfa.add_eps(base[q as usize], accept);
                    }
                    for (q, l, t) in aut.transitions() {
                        nfa.add_transition(base[q as usize], l, base[t as usize]);
                    }
                }
            }
            (start, accept)
        }
        Program::Test(f) => {
            let start = nfa.add_state();
            let accept = nfa.add_state();
            nfa.add_transition(start, Letter::Test(f), accept);
            (start, accept)
        }
        Program::Seq(a, b) => {
            let (s1, a1) = fragment(ctx, a, logic, nfa);
            let (s2, a2) = fragment(ctx, b, logic, nfa);
            nfa.add_eps(a1, s2);
            (s1, a2)
        }
        Program::Union(a, b) => {
            let start = nfa.add_state();
            let (s1, a1) = fragment(ctx, a, logic, nfa);
            let (s2, a2) = fragment(ctx, b, logic, nfa);
            let accept = nfa.add_state();
            nfa.add_eps(start, s1);
            nfa.add_eps(start, s2);
            nfa.add_eps(a1, accept);
            nfa.add_eps(a2, accept);
            (start, accept)
        }
        Program::Star(a) => {
            let start = nfa.add_state();
            let (s1, a1) = fragment(ctx, a, logic, nfa);
            let accept = nfa.add_state();
            nfa.add_eps(start, s1);
            nfa.add_eps(start, accept);
            nfa.add_eps(a1, s1);
            nfa.add_eps(a1, accept);
            (start, accept)
        }
        Program::Converse(_) => panic!("program is not in NCNF"),
    }
}
