use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{compile_closed, compile_program, FiniteAutomaton, LogicSpec};
use crate::syntax::{bsf, AutRef, Context, Formula, FormulaId, FormulaSet, Program};

/// A satisfiability problem: is `goal` satisfiable in some model of `logic`
/// that validates every formula of `assumptions`?
///
/// Formulas are expected in negation normal form; [`crate::io::parse_problem`]
/// and [`Problem::add_goal`] take care of that.
#[derive(Clone, Debug, Default)]
pub struct Problem {
    pub ctx: Context,
    pub logic: LogicSpec,
    pub goal: FormulaSet,
    pub assumptions: FormulaSet,
    pub warnings: Vec<String>,
}

impl Problem {
    pub fn new(ctx: Context, logic: LogicSpec) -> Self {
        Problem { ctx, logic, ..Default::default() }
    }

    /// Normalizes `f` and adds it to the goal set.
    pub fn add_goal(&mut self, f: FormulaId) -> FormulaId {
        let n = crate::syntax::to_ncnf(&mut self.ctx, f);
        self.goal.insert(n);
        n
    }

    /// Normalizes `f` and adds it to the global assumptions.
    pub fn add_assumption(&mut self, f: FormulaId) -> FormulaId {
        let n = crate::syntax::to_ncnf(&mut self.ctx, f);
        self.assumptions.insert(n);
        n
    }
}

/// The formula store and logic for one solver run, plus a cache of the
/// automata `aut_α` and `Aut_α` compiled so far.
#[derive(Clone, Debug)]
pub struct Session {
    pub ctx: Context,
    pub logic: LogicSpec,
    automata: HashMap<AutRef, Arc<FiniteAutomaton>>,
}

impl Session {
    pub fn new(ctx: Context, logic: LogicSpec) -> Self {
        Session { ctx, logic, automata: HashMap::new() }
    }

    pub fn automaton(&mut self, r: AutRef) -> Arc<FiniteAutomaton> {
        if let Some(a) = self.automata.get(&r) {
            return a.clone();
        }
        let a = if r.closed {
            compile_closed(&self.ctx, r.program, &self.logic)
        } else {
            compile_program(&self.ctx, r.program)
        };
        let a = Arc::new(a);
        self.automata.insert(r, a.clone());
        a
    }

    /// The closure `cls(Y)`: the basic subformulas of `Y` plus every
    /// auxiliary formula the automaton rules can produce from them.
    pub fn closure(&mut self, y: &FormulaSet) -> FormulaSet {
        let base = bsf(&mut self.ctx, y);
        let mut out = base.clone();
        for f in base.iter() {
            let (r, phi, boxed) = match self.ctx.formula(f) {
                Formula::Box(p, phi) => (AutRef::closed(p), phi, true),
                Formula::Diamond(p, phi) => match self.ctx.program(p) {
                    Program::Simple(_) | Program::Test(_) => continue,
                    _ => (AutRef::plain(p), phi, false),
                },
                _ => continue,
            };
            let aut = self.automaton(r);
            let alphabet = aut.alphabet();
            for q in 0..aut.num_states() {
                let g = if boxed {
                    self.ctx.intern(Formula::AutBox(r, q, phi))
                } else {
                    self.ctx.intern(Formula::AutDiamond(r, q, phi))
                };
                out.insert(g);
                for &l in &alphabet {
                    let h = if boxed { self.ctx.letter_box(l, g) } else { self.ctx.letter_diamond(l, g) };
                    out.insert(h);
                }
            }
        }
        out
    }
}

impl From<Problem> for Session {
    fn from(p: Problem) -> Self {
        Session::new(p.ctx, p.logic)
    }
}
