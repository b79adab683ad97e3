//! Formulas and programs of the base and extended languages.
//!
//! All formulas and programs live in a [`Context`], which hash-conses them:
//! structurally equal terms receive the same [`FormulaId`] / [`ProgramId`],
//! so equality and set membership are integer comparisons.

mod closure;
mod display;
mod ncnf;
mod set;

pub use closure::{bsf, subformulas};
pub use display::{FormulaDisplay, ProgramDisplay};
pub use ncnf::{negate, normalize_program, to_ncnf};
pub use set::FormulaSet;

use std::collections::HashMap;

/// A proposition symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prop(pub(crate) u32);

impl Prop {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An atomic program, i.e. an element of the positive half of the alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub(crate) u32);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An element of the alphabet with converse: an atom or its converse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleProgram {
    pub atom: Atom,
    pub conversed: bool,
}

impl SimpleProgram {
    pub fn positive(atom: Atom) -> Self {
        SimpleProgram { atom, conversed: false }
    }

    pub fn converse(self) -> Self {
        SimpleProgram { atom: self.atom, conversed: !self.conversed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaId(pub(crate) u32);

impl FormulaId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProgramId(pub(crate) u32);

impl ProgramId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A letter of an automaton alphabet: a simple program or a test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Simple(SimpleProgram),
    Test(FormulaId),
}

/// Names one of the two automata attached to a program: `aut_α` (closed
/// under the logic's inclusion axioms, used for boxes) or `Aut_α` (the
/// plain language of `α`, used for diamonds).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutRef {
    pub closed: bool,
    pub program: ProgramId,
}

impl AutRef {
    pub fn closed(program: ProgramId) -> Self {
        AutRef { closed: true, program }
    }

    pub fn plain(program: ProgramId) -> Self {
        AutRef { closed: false, program }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Prop(Prop),
    Not(FormulaId),
    Implies(FormulaId, FormulaId),
    And(FormulaId, FormulaId),
    Or(FormulaId, FormulaId),
    Diamond(ProgramId, FormulaId),
    Box(ProgramId, FormulaId),
    /// `□_ω φ`: the box over a single letter produced by the automaton rules.
    LetterBox(Letter, FormulaId),
    AutBox(AutRef, u32, FormulaId),
    AutDiamond(AutRef, u32, FormulaId),
}

impl Formula {
    /// True for formulas of the base language (no auxiliary operators at
    /// the top level; subformulas are checked by [`Context::is_base`]).
    fn is_base_head(&self) -> bool {
        !matches!(self, Formula::LetterBox(..) | Formula::AutBox(..) | Formula::AutDiamond(..))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Program {
    Simple(SimpleProgram),
    Seq(ProgramId, ProgramId),
    Union(ProgramId, ProgramId),
    Star(ProgramId),
    Converse(ProgramId),
    Test(FormulaId),
}

/// Symbol tables and the hash-consing store for one solver session.
#[derive(Clone, Debug, Default)]
pub struct Context {
    prop_names: Vec<String>,
    prop_ids: HashMap<String, Prop>,
    atom_names: Vec<String>,
    atom_ids: HashMap<String, Atom>,
    formulas: Vec<Formula>,
    formula_ids: HashMap<Formula, FormulaId>,
    base: Vec<bool>,
    programs: Vec<Program>,
    program_ids: HashMap<Program, ProgramId>,
    negations: Vec<Option<FormulaId>>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn prop(&mut self, name: &str) -> Prop {
        if let Some(&p) = self.prop_ids.get(name) {
            return p;
        }
        let p = Prop(self.prop_names.len() as u32);
        self.prop_names.push(name.to_owned());
        self.prop_ids.insert(name.to_owned(), p);
        p
    }

    pub fn atom(&mut self, name: &str) -> Atom {
        if let Some(&a) = self.atom_ids.get(name) {
            return a;
        }
        let a = Atom(self.atom_names.len() as u32);
        self.atom_names.push(name.to_owned());
        self.atom_ids.insert(name.to_owned(), a);
        a
    }

    pub fn lookup_atom(&self, name: &str) -> Option<Atom> {
        self.atom_ids.get(name).copied()
    }

    pub fn lookup_prop(&self, name: &str) -> Option<Prop> {
        self.prop_ids.get(name).copied()
    }

    pub fn prop_name(&self, p: Prop) -> &str {
        &self.prop_names[p.0 as usize]
    }

    pub fn atom_name(&self, a: Atom) -> &str {
        &self.atom_names[a.0 as usize]
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        (0..self.atom_names.len() as u32).map(Atom)
    }

    pub fn props(&self) -> impl Iterator<Item = Prop> {
        (0..self.prop_names.len() as u32).map(Prop)
    }

    pub fn intern(&mut self, f: Formula) -> FormulaId {
        if let Some(&id) = self.formula_ids.get(&f) {
            return id;
        }
        let base = f.is_base_head() && self.children_base(&f);
        let id = FormulaId(self.formulas.len() as u32);
        self.formulas.push(f);
        self.base.push(base);
        self.negations.push(None);
        self.formula_ids.insert(f, id);
        id
    }

    pub fn intern_program(&mut self, p: Program) -> ProgramId {
        if let Some(&id) = self.program_ids.get(&p) {
            return id;
        }
        let id = ProgramId(self.programs.len() as u32);
        self.programs.push(p);
        self.program_ids.insert(p, id);
        id
    }

    pub fn formula(&self, id: FormulaId) -> Formula {
        self.formulas[id.index()]
    }

    pub fn program(&self, id: ProgramId) -> Program {
        self.programs[id.index()]
    }

    pub fn formula_count(&self) -> usize {
        self.formulas.len()
    }

    /// Whether the formula belongs to the base language (no `□_ω`,
    /// `[A,q]` or `⟨A,q⟩` anywhere inside it).
    pub fn is_base(&self, id: FormulaId) -> bool {
        self.base[id.index()]
    }

    fn children_base(&self, f: &Formula) -> bool {
        match *f {
            Formula::Top | Formula::Bottom | Formula::Prop(_) => true,
            Formula::Not(a) => self.is_base(a),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => self.is_base(a) && self.is_base(b),
            Formula::Diamond(p, a) | Formula::Box(p, a) => self.program_is_base(p) && self.is_base(a),
            Formula::LetterBox(..) | Formula::AutBox(..) | Formula::AutDiamond(..) => false,
        }
    }

    fn program_is_base(&self, p: ProgramId) -> bool {
        match self.program(p) {
            Program::Simple(_) => true,
            Program::Seq(a, b) | Program::Union(a, b) => self.program_is_base(a) && self.program_is_base(b),
            Program::Star(a) | Program::Converse(a) => self.program_is_base(a),
            Program::Test(f) => self.is_base(f),
        }
    }

    // Convenience constructors.

    pub fn top(&mut self) -> FormulaId {
        self.intern(Formula::Top)
    }

    pub fn bottom(&mut self) -> FormulaId {
        self.intern(Formula::Bottom)
    }

    pub fn var(&mut self, name: &str) -> FormulaId {
        let p = self.prop(name);
        self.intern(Formula::Prop(p))
    }

    pub fn not(&mut self, f: FormulaId) -> FormulaId {
        self.intern(Formula::Not(f))
    }

    pub fn and(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.intern(Formula::And(a, b))
    }

    pub fn or(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.intern(Formula::Or(a, b))
    }

    pub fn implies(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.intern(Formula::Implies(a, b))
    }

    pub fn diamond(&mut self, p: ProgramId, f: FormulaId) -> FormulaId {
        self.intern(Formula::Diamond(p, f))
    }

    pub fn boxed(&mut self, p: ProgramId, f: FormulaId) -> FormulaId {
        self.intern(Formula::Box(p, f))
    }

    pub fn simple(&mut self, s: SimpleProgram) -> ProgramId {
        self.intern_program(Program::Simple(s))
    }

    /// The atomic program named `name`, interning the atom if needed.
    pub fn atomic(&mut self, name: &str) -> ProgramId {
        let a = self.atom(name);
        self.simple(SimpleProgram::positive(a))
    }

    pub fn seq(&mut self, a: ProgramId, b: ProgramId) -> ProgramId {
        self.intern_program(Program::Seq(a, b))
    }

    pub fn union(&mut self, a: ProgramId, b: ProgramId) -> ProgramId {
        self.intern_program(Program::Union(a, b))
    }

    pub fn star(&mut self, a: ProgramId) -> ProgramId {
        self.intern_program(Program::Star(a))
    }

    pub fn converse(&mut self, a: ProgramId) -> ProgramId {
        self.intern_program(Program::Converse(a))
    }

    pub fn test(&mut self, f: FormulaId) -> ProgramId {
        self.intern_program(Program::Test(f))
    }

    /// The program consisting of a single letter.
    pub fn letter_program(&mut self, l: Letter) -> ProgramId {
        match l {
            Letter::Simple(s) => self.simple(s),
            Letter::Test(f) => self.test(f),
        }
    }

    /// `⟨ω⟩φ` for a letter `ω`.
    pub fn letter_diamond(&mut self, l: Letter, f: FormulaId) -> FormulaId {
        let p = self.letter_program(l);
        self.diamond(p, f)
    }

    pub fn letter_box(&mut self, l: Letter, f: FormulaId) -> FormulaId {
        self.intern(Formula::LetterBox(l, f))
    }

    /// If `id` is `⟨σ⟩φ` with `σ` a simple program, returns `(σ, φ)`.
    pub fn as_simple_diamond(&self, id: FormulaId) -> Option<(SimpleProgram, FormulaId)> {
        match self.formula(id) {
            Formula::Diamond(p, f) => match self.program(p) {
                Program::Simple(s) => Some((s, f)),
                _ => None,
            },
            _ => None,
        }
    }

    /// If `id` is `⟨ω⟩φ` with `ω` a letter (simple program or test),
    /// returns `(ω, φ)`.
    pub fn as_letter_diamond(&self, id: FormulaId) -> Option<(Letter, FormulaId)> {
        match self.formula(id) {
            Formula::Diamond(p, f) => match self.program(p) {
                Program::Simple(s) => Some((Letter::Simple(s), f)),
                Program::Test(t) => Some((Letter::Test(t), f)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Whether `id` has one of the shapes tracked by the trace graph:
    /// `⟨A,q⟩ξ` or `⟨ω⟩⟨A,q⟩ξ`.
    pub fn is_eventuality_shaped(&self, id: FormulaId) -> bool {
        match self.formula(id) {
            Formula::AutDiamond(..) => true,
            _ => match self.as_letter_diamond(id) {
                Some((_, inner)) => matches!(self.formula(inner), Formula::AutDiamond(..)),
                None => false,
            },
        }
    }

    pub fn negation_cache(&self, id: FormulaId) -> Option<FormulaId> {
        self.negations[id.index()]
    }

    pub(crate) fn set_negation_cache(&mut self, id: FormulaId, neg: FormulaId) {
        self.negations[id.index()] = Some(neg);
    }

    /// Propositions occurring in the formula, including inside tests.
    pub fn props_of(&self, id: FormulaId, out: &mut Vec<Prop>) {
        for sub in subformulas(self, id).iter() {
            if let Formula::Prop(p) = self.formula(sub) {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }

    /// Atomic programs occurring in the formula.
    pub fn atoms_of(&self, id: FormulaId, out: &mut Vec<Atom>) {
        for sub in subformulas(self, id).iter() {
            match self.formula(sub) {
                Formula::Diamond(p, _) | Formula::Box(p, _) => self.atoms_of_program(p, out),
                Formula::LetterBox(Letter::Simple(s), _) if !out.contains(&s.atom) => out.push(s.atom),
                _ => {}
            }
        }
    }

    fn atoms_of_program(&self, p: ProgramId, out: &mut Vec<Atom>) {
        match self.program(p) {
            Program::Simple(s) => {
                if !out.contains(&s.atom) {
                    out.push(s.atom);
                }
            }
            Program::Seq(a, b) | Program::Union(a, b) => {
                self.atoms_of_program(a, out);
                self.atoms_of_program(b, out);
            }
            Program::Star(a) | Program::Converse(a) => self.atoms_of_program(a, out),
            Program::Test(_) => {}
        }
    }
}
