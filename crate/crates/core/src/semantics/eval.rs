use std::collections::HashMap;

use super::kripke::{KripkeModel, Relation};
use crate::bitset::BitSet;
use crate::syntax::{Context, Formula, FormulaId, Letter, Program, ProgramId};

/// The extension `φ^M` of a formula in a (closed) model.
///
/// # Panics
///
/// On the automaton operators `[A,q]` and `⟨A,q⟩`, which have no meaning
/// without their automaton.
pub fn eval(ctx: &Context, m: &KripkeModel, f: FormulaId) -> BitSet {
    Evaluator::new(ctx, m).formula(f)
}

/// Whether `f` holds at every state.
pub fn valid(ctx: &Context, m: &KripkeModel, f: FormulaId) -> bool {
    eval(ctx, m, f).len() == m.size()
}

/// A memoizing evaluator for one model.
pub struct Evaluator<'a> {
    ctx: &'a Context,
    model: &'a KripkeModel,
    formulas: HashMap<FormulaId, BitSet>,
    programs: HashMap<ProgramId, Relation>,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a Context, model: &'a KripkeModel) -> Self {
        Evaluator { ctx, model, formulas: HashMap::new(), programs: HashMap::new() }
    }

    fn complement(&self, s: &BitSet) -> BitSet {
        let mut all = self.model.all();
        all.difference_with(s);
        all
    }

    pub fn formula(&mut self, f: FormulaId) -> BitSet {
        if let Some(s) = self.formulas.get(&f) {
            return s.clone();
        }
        let out = match self.ctx.formula(f) {
            Formula::Top => self.model.all(),
            Formula::Bottom => BitSet::new(),
            Formula::Prop(p) => self.model.prop(p),
            Formula::Not(a) => {
                let a = self.formula(a);
                self.complement(&a)
            }
            Formula::And(a, b) => {
                let mut a = self.formula(a);
                let b = self.formula(b);
                a.difference_with(&self.complement(&b));
                a
            }
            Formula::Or(a, b) => {
                let mut a = self.formula(a);
                a.union_with(&self.formula(b));
                a
            }
            Formula::Implies(a, b) => {
                let a = self.formula(a);
                let mut out = self.complement(&a);
                out.union_with(&self.formula(b));
                out
            }
            Formula::Diamond(p, a) => {
                let a = self.formula(a);
                self.program(p).preimage(&a)
            }
            Formula::Box(p, a) => {
                let a = self.formula(a);
                let bad = self.program(p).preimage(&self.complement(&a));
                self.complement(&bad)
            }
            Formula::LetterBox(l, a) => {
                let p = match l {
                    Letter::Simple(s) => Program::Simple(s),
                    Letter::Test(t) => Program::Test(t),
                };
                let a = self.formula(a);
                let bad = self.program_value(p).preimage(&self.complement(&a));
                self.complement(&bad)
            }
            Formula::AutBox(..) | Formula::AutDiamond(..) => {
                panic!("cannot evaluate an automaton operator")
            }
        };
        self.formulas.insert(f, out.clone());
        out
    }

    pub fn program(&mut self, p: ProgramId) -> Relation {
        if let Some(r) = self.programs.get(&p) {
            return r.clone();
        }
        let r = self.program_value(self.ctx.program(p));
        self.programs.insert(p, r.clone());
        r
    }

    fn program_value(&mut self, p: Program) -> Relation {
        match p {
            Program::Simple(s) => self.model.simple_relation(s),
            Program::Seq(a, b) => self.program(a).compose(&self.program(b)),
            Program::Union(a, b) => self.program(a).union(&self.program(b)),
            Program::Star(a) => self.program(a).star(),
            Program::Converse(a) => self.program(a).inverse(),
            Program::Test(f) => {
                let s = self.formula(f);
                Relation::diagonal(self.model.size(), &s)
            }
        }
    }
}
