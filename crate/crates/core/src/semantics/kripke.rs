use std::fmt;

use crate::automata::{FiniteAutomaton, LogicSpec};
use crate::bitset::BitSet;
use crate::syntax::{Atom, Letter, Prop, SimpleProgram};

/// A binary relation on `0..n`, stored as successor rows.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Relation {
    rows: Vec<BitSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { rows: vec![BitSet::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Relation { rows: (0..n).map(|x| [x].into_iter().collect()).collect() }
    }

    /// The identity restricted to `set`.
    pub fn diagonal(n: usize, set: &BitSet) -> Self {
        let mut r = Relation::empty(n);
        for x in set.iter() {
            r.insert(x, x);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, x: usize, y: usize) -> bool {
        self.rows[x].insert(y)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn successors(&self, x: usize) -> &BitSet {
        &self.rows[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(x, r)| r.iter().map(move |y| (x, y)))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(BitSet::is_empty)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
        out
    }

    pub fn compose(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.size());
        for (x, row) in self.rows.iter().enumerate() {
            for y in row.iter() {
                out.rows[x].union_with(&other.rows[y]);
            }
        }
        out
    }

    pub fn inverse(&self) -> Relation {
        let mut out = Relation::empty(self.size());
        for (x, y) in self.pairs() {
            out.insert(y, x);
        }
        out
    }

    /// Reflexive-transitive closure by repeated squaring.
    pub fn star(&self) -> Relation {
        let mut r = self.union(&Relation::identity(self.size()));
        loop {
            let next = r.compose(&r);
            if next == r {
                return r;
            }
            r = next;
        }
    }

    /// `{x | ∃y ∈ set. (x,y) ∈ R}`.
    pub fn preimage(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new();
        for (x, row) in self.rows.iter().enumerate() {
            if row.intersects(set) {
                out.insert(x);
            }
        }
        out
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// A finite Kripke model with states `0..size`. Propositions and atoms
/// beyond the stored ones are empty.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KripkeModel {
    size: usize,
    valuation: Vec<BitSet>,
    relations: Vec<Relation>,
}

impl KripkeModel {
    pub fn new(size: usize) -> Self {
        KripkeModel { size, valuation: Vec::new(), relations: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn all(&self) -> BitSet {
        (0..self.size).collect()
    }

    pub fn set_prop(&mut self, p: Prop, x: usize) {
        let i = p.0 as usize;
        if self.valuation.len() <= i {
            self.valuation.resize(i + 1, BitSet::new());
        }
        self.valuation[i].insert(x);
    }

    pub fn prop(&self, p: Prop) -> BitSet {
        self.valuation.get(p.0 as usize).cloned().unwrap_or_default()
    }

    pub fn holds(&self, p: Prop, x: usize) -> bool {
        self.valuation.get(p.0 as usize).is_some_and(|s| s.contains(x))
    }

    fn ensure_atom(&mut self, a: Atom) {
        if self.relations.len() <= a.index() {
            self.relations.resize(a.index() + 1, Relation::empty(self.size));
        }
    }

    pub fn add_edge(&mut self, a: Atom, x: usize, y: usize) -> bool {
        self.ensure_atom(a);
        self.relations[a.index()].insert(x, y)
    }

    /// `σ^M` for an atom.
    pub fn relation(&self, a: Atom) -> Relation {
        self.relations.get(a.index()).cloned().unwrap_or_else(|| Relation::empty(self.size))
    }

    /// `σ^M` for a simple program, inverting for converses.
    pub fn simple_relation(&self, s: SimpleProgram) -> Relation {
        let r = self.relation(s.atom);
        if s.conversed {
            r.inverse()
        } else {
            r
        }
    }

    pub fn num_atoms(&self) -> usize {
        self.relations.len()
    }
}

/// Pairs `(x, y)` such that some word of `aut` leads from `x` to `y` in `m`.
/// Test letters never match.
fn automaton_relation(m: &KripkeModel, aut: &FiniteAutomaton) -> Relation {
    let n = m.size();
    let q = aut.num_states() as usize;
    let letters: Vec<(u32, Relation, u32)> = aut
        .transitions()
        .filter_map(|(p, l, t)| match l {
            Letter::Simple(s) => Some((p, m.simple_relation(s), t)),
            Letter::Test(_) => None,
        })
        .collect();
    let mut out = Relation::empty(n);
    for x in 0..n {
        let mut seen = BitSet::new();
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for &i in aut.initial() {
            if seen.insert(x * q + i as usize) {
                stack.push((x, i));
            }
        }
        while let Some((y, p)) = stack.pop() {
            if aut.is_final(p) {
                out.insert(x, y);
            }
            for (from, rel, to) in &letters {
                if *from != p {
                    continue;
                }
                for z in rel.successors(y).iter() {
                    if seen.insert(z * q + *to as usize) {
                        stack.push((z, *to));
                    }
                }
            }
        }
    }
    out
}

/// The least extension of `m` in which `γ^M ⊆ σ^M` for every word `γ`
/// accepted by `aut_σ`.
pub fn close_model(m: &KripkeModel, logic: &LogicSpec) -> KripkeModel {
    let mut out = m.clone();
    let mut atoms: Vec<Atom> = (0..m.num_atoms() as u32).map(Atom).collect();
    atoms.extend(logic.atoms().iter().copied());
    atoms.sort();
    atoms.dedup();
    let explicit: Vec<(SimpleProgram, FiniteAutomaton)> = atoms
        .iter()
        .flat_map(|&a| [SimpleProgram::positive(a), SimpleProgram::positive(a).converse()])
        .filter(|&s| logic.is_explicit(s) || logic.is_explicit(s.converse()))
        .map(|s| (s, logic.aut(s)))
        .collect();
    loop {
        let mut changed = false;
        for (s, aut) in &explicit {
            let r = automaton_relation(&out, aut);
            for (x, y) in r.pairs() {
                let (x, y) = if s.conversed { (y, x) } else { (x, y) };
                changed |= out.add_edge(s.atom, x, y);
            }
        }
        if !changed {
            return out;
        }
    }
}
