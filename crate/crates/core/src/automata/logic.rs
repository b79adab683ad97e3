use std::collections::BTreeMap;

use super::FiniteAutomaton;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::syntax::{Atom, Context, Letter, SimpleProgram};

/// Default maximal word length for the symmetry check of explicitly given
/// automaton pairs.
pub const DEFAULT_SYMMETRY_BOUND: usize = 5;

/// A logic of the family: the automaton `aut_σ` for every element `σ` of
/// the alphabet with converse.
///
/// Elements without an automaton get the identity automaton, which accepts
/// exactly `σ`; a logic with no automata at all is plain converse-PDL. When
/// only one polarity of an atom is given, the other is derived with
/// [`FiniteAutomaton::converse`].
#[derive(Clone, Debug, Default)]
pub struct LogicSpec {
    atoms: Vec<Atom>,
    explicit: BTreeMap<SimpleProgram, FiniteAutomaton>,
}

impl LogicSpec {
    /// The identity logic (every `aut_σ` accepts only `σ`).
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn declare_atom(&mut self, a: Atom) {
        if !self.atoms.contains(&a) {
            self.atoms.push(a);
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn set_automaton(&mut self, s: SimpleProgram, aut: FiniteAutomaton) {
        self.declare_atom(s.atom);
        self.explicit.insert(s, aut);
    }

    pub fn is_explicit(&self, s: SimpleProgram) -> bool {
        self.explicit.contains_key(&s)
    }

    /// Whether every automaton is the identity, i.e. no inclusion axioms.
    pub fn is_identity(&self) -> bool {
        self.explicit
            .iter()
            .all(|(&s, a)| a.num_states() == 2 && a.transition_count() == 1 && a.accepts(&[Letter::Simple(s)]))
    }

    /// `aut_σ`.
    pub fn aut(&self, s: SimpleProgram) -> FiniteAutomaton {
        if let Some(a) = self.explicit.get(&s) {
            return a.clone();
        }
        if let Some(a) = self.explicit.get(&s.converse()) {
            return a.converse();
        }
        FiniteAutomaton::single(s)
    }

    /// Checks the well-formedness conditions and returns warnings for
    /// explicitly given converse pairs that fail the bounded symmetry check.
    pub fn validate(&self, ctx: &Context, symmetry_bound: usize) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        for (&s, aut) in &self.explicit {
            let name = ctx.simple_name(s);
            if !aut.is_well_formed() {
                return Err(Error::Logic(format!("automaton for {name} is malformed")));
            }
            if aut.has_tests() {
                return Err(Error::Logic(format!("automaton for {name} contains test letters")));
            }
            if !aut.accepts(&[Letter::Simple(s)]) {
                return Err(Error::Logic(format!("automaton for {name} does not accept the word {name}")));
            }
            if s.conversed || !self.explicit.contains_key(&s.converse()) {
                continue;
            }
            let other = &self.explicit[&s.converse()];
            if let Some(w) = symmetry_counterexample(aut, other, symmetry_bound) {
                let word: Vec<String> = w
                    .iter()
                    .map(|l| match l {
                        Letter::Simple(x) => ctx.simple_name(*x),
                        Letter::Test(_) => "?".to_owned(),
                    })
                    .collect();
                warnings.push(format!(
                    "automata for {} and {} are not symmetric (word '{}')",
                    name,
                    ctx.simple_name(s.converse()),
                    word.join(" ")
                ));
            }
        }
        Ok(warnings)
    }
}

/// A word of length at most `bound` accepted by exactly one of `a` and the
/// converse of `b`.
fn symmetry_counterexample(a: &FiniteAutomaton, b: &FiniteAutomaton, bound: usize) -> Option<Vec<Letter>> {
    let bc = b.converse();
    let mut letters = a.alphabet();
    letters.extend(bc.alphabet());
    letters.sort();
    letters.dedup();
    // Depth-first over words, pruning when neither automaton has live runs.
    let start = |x: &FiniteAutomaton| -> BitSet { x.initial().iter().map(|&q| q as usize).collect() };
    let step = |x: &FiniteAutomaton, set: &BitSet, l: Letter| -> BitSet {
        let mut out = BitSet::new();
        for q in set.iter() {
            for &(m, t) in x.delta(q as u32) {
                if m == l {
                    out.insert(t as usize);
                }
            }
        }
        out
    };
    let mut stack = vec![(Vec::new(), start(a), start(&bc))];
    while let Some((w, sa, sb)) = stack.pop() {
        let fa = sa.iter().any(|q| a.is_final(q as u32));
        let fb = sb.iter().any(|q| bc.is_final(q as u32));
        if fa != fb {
            return Some(w);
        }
        if w.len() == bound {
            continue;
        }
        for &l in letters.iter().rev() {
            let na = step(a, &sa, l);
            let nb = step(&bc, &sb, l);
            if na.is_empty() && nb.is_empty() {
                continue;
            }
            let mut w2 = w.clone();
            w2.push(l);
            stack.push((w2, na, nb));
        }
    }
    None
}
