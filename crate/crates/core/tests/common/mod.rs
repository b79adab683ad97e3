//! Oracles shared by the integration tests. Nothing here calls into the
//! library's own evaluator or model closure.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use cpdlreg::automata::{FiniteAutomaton, LogicSpec};
use cpdlreg::semantics::KripkeModel;
use cpdlreg::syntax::{Atom, Context, Formula, FormulaId, Letter, Program, ProgramId, SimpleProgram};
use cpdlreg::Problem;
use rand::rngs::StdRng;
use rand::Rng;

pub type Pairs = BTreeSet<(usize, usize)>;

/// The model as plain pair sets, one per atom.
pub struct Naive {
    pub size: usize,
    pub props: Vec<Vec<bool>>,
    pub rel: Vec<Pairs>,
}

impl Naive {
    pub fn from_model(ctx: &Context, m: &KripkeModel) -> Self {
        let props = ctx.props().map(|p| (0..m.size()).map(|x| m.holds(p, x)).collect()).collect();
        let rel = ctx.atoms().map(|a| m.relation(a).pairs().collect()).collect();
        Naive { size: m.size(), props, rel }
    }

    fn simple(&self, s: SimpleProgram) -> Pairs {
        let r = self.rel.get(s.atom.index()).cloned().unwrap_or_default();
        if s.conversed {
            r.into_iter().map(|(x, y)| (y, x)).collect()
        } else {
            r
        }
    }

    /// Closes every atom's relation under its logic automaton: `(x, y)` is
    /// added when some accepted word labels a path from `x` to `y`.
    pub fn close(&mut self, ctx: &Context, logic: &LogicSpec) {
        loop {
            let mut changed = false;
            for a in ctx.atoms() {
                let aut = logic.aut(SimpleProgram::positive(a));
                for x in 0..self.size {
                    for y in self.word_reach(&aut, x) {
                        while self.rel.len() <= a.index() {
                            self.rel.push(Pairs::new());
                        }
                        changed |= self.rel[a.index()].insert((x, y));
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn word_reach(&self, aut: &FiniteAutomaton, x: usize) -> Vec<usize> {
        let mut seen: HashSet<(u32, usize)> = HashSet::new();
        let mut stack: Vec<(u32, usize)> = aut.initial().iter().map(|&q| (q, x)).collect();
        let mut out = Vec::new();
        while let Some((q, y)) = stack.pop() {
            if !seen.insert((q, y)) {
                continue;
            }
            if aut.is_final(q) {
                out.push(y);
            }
            for &(l, t) in aut.delta(q) {
                let Letter::Simple(s) = l else { panic!("test letter in a logic automaton") };
                for (a, b) in self.simple(s) {
                    if a == y {
                        stack.push((t, b));
                    }
                }
            }
        }
        out
    }

    pub fn program(&self, ctx: &Context, p: ProgramId) -> Pairs {
        match ctx.program(p) {
            Program::Simple(s) => self.simple(s),
            Program::Seq(a, b) => {
                let (ra, rb) = (self.program(ctx, a), self.program(ctx, b));
                let mut out = Pairs::new();
                for &(x, y) in &ra {
                    for &(y2, z) in &rb {
                        if y == y2 {
                            out.insert((x, z));
                        }
                    }
                }
                out
            }
            Program::Union(a, b) => self.program(ctx, a).union(&self.program(ctx, b)).copied().collect(),
            Program::Star(a) => {
                let r = self.program(ctx, a);
                let mut out: Pairs = (0..self.size).map(|x| (x, x)).collect();
                loop {
                    let mut next = out.clone();
                    for &(x, y) in &out {
                        for &(y2, z) in &r {
                            if y == y2 {
                                next.insert((x, z));
                            }
                        }
                    }
                    if next == out {
                        return out;
                    }
                    out = next;
                }
            }
            Program::Converse(a) => self.program(ctx, a).into_iter().map(|(x, y)| (y, x)).collect(),
            Program::Test(f) => (0..self.size).filter(|&x| self.holds(ctx, f, x)).map(|x| (x, x)).collect(),
        }
    }

    pub fn holds(&self, ctx: &Context, f: FormulaId, x: usize) -> bool {
        match ctx.formula(f) {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Prop(p) => self.props.get(p.index()).is_some_and(|v| v[x]),
            Formula::Not(g) => !self.holds(ctx, g, x),
            Formula::Implies(a, b) => !self.holds(ctx, a, x) || self.holds(ctx, b, x),
            Formula::And(a, b) => self.holds(ctx, a, x) && self.holds(ctx, b, x),
            Formula::Or(a, b) => self.holds(ctx, a, x) || self.holds(ctx, b, x),
            Formula::Diamond(p, g) => self.program(ctx, p).iter().any(|&(a, b)| a == x && self.holds(ctx, g, b)),
            Formula::Box(p, g) => self.program(ctx, p).iter().all(|&(a, b)| a != x || self.holds(ctx, g, b)),
            other => panic!("not a base formula: {other:?}"),
        }
    }

    /// Whether `gamma` holds everywhere and `goal` at `root`.
    pub fn satisfies(&self, ctx: &Context, goal: &[FormulaId], gamma: &[FormulaId], root: usize) -> bool {
        goal.iter().all(|&f| self.holds(ctx, f, root))
            && gamma.iter().all(|&f| (0..self.size).all(|x| self.holds(ctx, f, x)))
    }

    /// Whether the goal holds somewhere with `gamma` valid.
    pub fn satisfies_somewhere(&self, ctx: &Context, goal: &[FormulaId], gamma: &[FormulaId]) -> bool {
        (0..self.size).any(|x| self.satisfies(ctx, goal, gamma, x))
    }
}

pub const EXAMPLE1_LOGIC: &str = "logic {
  atoms: s, r;
  automaton r { states: 0 1; initial: 0; final: 1; trans: 0 -s^-> 0; 0 -s-> 1; 0 -r-> 1; }
}";

/// The logic of the worked example, with `s` and `r` interned in `ctx`.
pub fn example1_logic(ctx: &mut Context) -> LogicSpec {
    let s = ctx.atom("s");
    let r = ctx.atom("r");
    let ss = SimpleProgram::positive(s);
    let mut aut = FiniteAutomaton::new(2);
    aut.add_initial(0);
    aut.add_final(1);
    aut.add_transition(0, Letter::Simple(ss.converse()), 0);
    aut.add_transition(0, Letter::Simple(ss), 1);
    aut.add_transition(0, Letter::Simple(SimpleProgram::positive(r)), 1);
    let mut logic = LogicSpec::identity();
    logic.declare_atom(s);
    logic.set_automaton(SimpleProgram::positive(r), aut);
    logic
}

pub struct Gen<'a> {
    pub rng: &'a mut StdRng,
    pub props: Vec<&'static str>,
    pub atoms: Vec<&'static str>,
}

impl Gen<'_> {
    pub fn formula(&mut self, ctx: &mut Context, depth: u32) -> FormulaId {
        if depth == 0 || self.rng.gen_ratio(1, 4) {
            let name = self.props[self.rng.gen_range(0..self.props.len())];
            let v = ctx.var(name);
            return match self.rng.gen_range(0..10) {
                0 => ctx.top(),
                1 => ctx.bottom(),
                2..=5 => ctx.not(v),
                _ => v,
            };
        }
        match self.rng.gen_range(0..8) {
            0 => {
                let g = self.formula(ctx, depth - 1);
                ctx.not(g)
            }
            1 => {
                let (a, b) = (self.formula(ctx, depth - 1), self.formula(ctx, depth - 1));
                ctx.and(a, b)
            }
            2 => {
                let (a, b) = (self.formula(ctx, depth - 1), self.formula(ctx, depth - 1));
                ctx.or(a, b)
            }
            3 => {
                let (a, b) = (self.formula(ctx, depth - 1), self.formula(ctx, depth - 1));
                ctx.implies(a, b)
            }
            4 | 5 => {
                let p = self.program(ctx, depth - 1);
                let g = self.formula(ctx, depth - 1);
                ctx.diamond(p, g)
            }
            _ => {
                let p = self.program(ctx, depth - 1);
                let g = self.formula(ctx, depth - 1);
                ctx.boxed(p, g)
            }
        }
    }

    pub fn program(&mut self, ctx: &mut Context, depth: u32) -> ProgramId {
        if depth == 0 || self.rng.gen_ratio(1, 2) {
            let name = self.atoms[self.rng.gen_range(0..self.atoms.len())];
            let a = ctx.atomic(name);
            return if self.rng.gen_ratio(1, 3) { ctx.converse(a) } else { a };
        }
        match self.rng.gen_range(0..6) {
            0 => {
                let (a, b) = (self.program(ctx, depth - 1), self.program(ctx, depth - 1));
                ctx.seq(a, b)
            }
            1 => {
                let (a, b) = (self.program(ctx, depth - 1), self.program(ctx, depth - 1));
                ctx.union(a, b)
            }
            2 | 3 => {
                let a = self.program(ctx, depth - 1);
                ctx.star(a)
            }
            4 => {
                let f = self.formula(ctx, depth.saturating_sub(2));
                ctx.test(f)
            }
            _ => {
                let a = self.program(ctx, depth - 1);
                ctx.converse(a)
            }
        }
    }
}

/// A random problem with one or two goal formulas and at most one
/// assumption, over the identity logic or the worked example's logic.
pub fn random_problem(rng: &mut StdRng, example_logic: bool, depth: u32) -> Problem {
    let mut ctx = Context::new();
    let logic = if example_logic { example1_logic(&mut ctx) } else { LogicSpec::identity() };
    let atoms = if example_logic {
        vec!["s", "r"]
    } else if rng.gen() {
        vec!["s"]
    } else {
        vec!["s", "t"]
    };
    let mut gen = Gen { rng, props: vec!["p", "q"], atoms };
    let n_goal = gen.rng.gen_range(1..=2);
    let goal: Vec<FormulaId> = (0..n_goal).map(|_| gen.formula(&mut ctx, depth)).collect();
    let gamma: Vec<FormulaId> = if gen.rng.gen_ratio(1, 4) { vec![gen.formula(&mut ctx, 2)] } else { Vec::new() };
    let mut p = Problem::new(ctx, logic);
    for f in goal {
        p.add_goal(f);
    }
    for f in gamma {
        p.add_assumption(f);
    }
    p
}

pub fn atom_of(ctx: &Context, name: &str) -> Atom {
    ctx.lookup_atom(name).expect("atom")
}
