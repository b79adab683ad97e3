use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::syntax::{Letter, SimpleProgram};

/// A finite automaton `⟨Σ, Q, I, δ, F⟩` over simple programs and tests.
/// States are `0..num_states()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAutomaton {
    initial: Vec<u32>,
    finals: BitSet,
    delta: Vec<Vec<(Letter, u32)>>,
}

impl FiniteAutomaton {
    pub fn new(num_states: u32) -> Self {
        FiniteAutomaton { initial: Vec::new(), finals: BitSet::new(), delta: vec![Vec::new(); num_states as usize] }
    }

    /// The two-state automaton accepting exactly the word `σ`.
    pub fn single(s: SimpleProgram) -> Self {
        let mut a = FiniteAutomaton::new(2);
        a.add_initial(0);
        a.add_final(1);
        a.add_transition(0, Letter::Simple(s), 1);
        a
    }

    pub fn num_states(&self) -> u32 {
        self.delta.len() as u32
    }

    pub fn add_state(&mut self) -> u32 {
        self.delta.push(Vec::new());
        self.delta.len() as u32 - 1
    }

    pub fn add_initial(&mut self, q: u32) {
        assert!(q < self.num_states());
        if !self.initial.contains(&q) {
            self.initial.push(q);
            self.initial.sort_unstable();
        }
    }

    pub fn add_final(&mut self, q: u32) {
        assert!(q < self.num_states());
        self.finals.insert(q as usize);
    }

    pub fn add_transition(&mut self, from: u32, letter: Letter, to: u32) {
        assert!(from < self.num_states() && to < self.num_states());
        let out = &mut self.delta[from as usize];
        if let Err(pos) = out.binary_search(&(letter, to)) {
            out.insert(pos, (letter, to));
        }
    }

    pub fn initial(&self) -> &[u32] {
        &self.initial
    }

    pub fn is_final(&self, q: u32) -> bool {
        self.finals.contains(q as usize)
    }

    pub fn finals(&self) -> impl Iterator<Item = u32> + '_ {
        self.finals.iter().map(|q| q as u32)
    }

    /// `δ(q)`: the outgoing `(letter, target)` pairs of `q`, sorted.
    pub fn delta(&self, q: u32) -> &[(Letter, u32)] {
        &self.delta[q as usize]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (u32, Letter, u32)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, out)| out.iter().map(move |&(l, t)| (q as u32, l, t)))
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        let set: BTreeSet<Letter> = self.transitions().map(|(_, l, _)| l).collect();
        set.into_iter().collect()
    }

    pub fn has_tests(&self) -> bool {
        self.transitions().any(|(_, l, _)| matches!(l, Letter::Test(_)))
    }

    /// Subset simulation.
    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut current: BitSet = self.initial.iter().map(|&q| q as usize).collect();
        for &letter in word {
            let mut next = BitSet::new();
            for q in current.iter() {
                for &(l, t) in self.delta(q as u32) {
                    if l == letter {
                        next.insert(t as usize);
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.iter().any(|q| self.is_final(q as u32))
    }

    /// States reachable from an initial state and co-reachable to a final one.
    fn useful_states(&self) -> BitSet {
        let mut fwd = BitSet::new();
        let mut stack: Vec<u32> = self.initial.clone();
        while let Some(q) = stack.pop() {
            if fwd.insert(q as usize) {
                stack.extend(self.delta(q).iter().map(|&(_, t)| t));
            }
        }
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); self.delta.len()];
        for (q, _, t) in self.transitions() {
            rev[t as usize].push(q);
        }
        let mut bwd = BitSet::new();
        let mut stack: Vec<u32> = self.finals().collect();
        while let Some(q) = stack.pop() {
            if bwd.insert(q as usize) {
                stack.extend(rev[q as usize].iter().copied());
            }
        }
        fwd.iter().filter(|&q| bwd.contains(q)).collect()
    }

    /// Removes useless states. Surviving states keep their relative order.
    pub fn trim(&self) -> FiniteAutomaton {
        let useful = self.useful_states();
        let mut map = vec![u32::MAX; self.delta.len()];
        for (new, old) in useful.iter().enumerate() {
            map[old] = new as u32;
        }
        let mut out = FiniteAutomaton::new(useful.len() as u32);
        for old in useful.iter() {
            let q = map[old];
            if self.initial.contains(&(old as u32)) {
                out.add_initial(q);
            }
            if self.is_final(old as u32) {
                out.add_final(q);
            }
            for &(l, t) in self.delta(old as u32) {
                if map[t as usize] != u32::MAX {
                    out.add_transition(q, l, map[t as usize]);
                }
            }
        }
        out
    }

    /// The automaton for the converse language: transitions reversed,
    /// simple letters conversed, initial and final states swapped.
    pub fn converse(&self) -> FiniteAutomaton {
        let mut out = FiniteAutomaton::new(self.num_states());
        for q in self.finals() {
            out.add_initial(q);
        }
        for &q in &self.initial {
            out.add_final(q);
        }
        for (q, l, t) in self.transitions() {
            let l = match l {
                Letter::Simple(s) => Letter::Simple(s.converse()),
                test => test,
            };
            out.add_transition(t, l, q);
        }
        out
    }

    pub fn is_well_formed(&self) -> bool {
        let n = self.num_states();
        self.initial.iter().all(|&q| q < n)
            && self.finals().all(|q| q < n)
            && self.transitions().all(|(q, _, t)| q < n && t < n)
    }

    /// All accepted words of length at most `max_len`, in length-then-letter
    /// order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<Letter>> {
        let mut out = Vec::new();
        let start: BitSet = self.initial.iter().map(|&q| q as usize).collect();
        let mut layer = vec![(Vec::new(), start)];
        for len in 0..=max_len {
            for (w, set) in &layer {
                if set.iter().any(|q| self.is_final(q as u32)) {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, set) in &layer {
                for letter in self.alphabet() {
                    let mut succ = BitSet::new();
                    for q in set.iter() {
                        for &(l, t) in self.delta(q as u32) {
                            if l == letter {
                                succ.insert(t as usize);
                            }
                        }
                    }
                    if !succ.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(letter);
                        next.push((w2, succ));
                    }
                }
            }
            layer = next;
        }
        out
    }
}

/// An automaton with ε-moves, used while compiling programs.
#[derive(Default)]
pub(crate) struct EpsilonNfa {
    eps: Vec<Vec<u32>>,
    delta: Vec<Vec<(Letter, u32)>>,
}

impl EpsilonNfa {
    pub fn add_state(&mut self) -> u32 {
        self.eps.push(Vec::new());
        self.delta.push(Vec::new());
        self.eps.len() as u32 - 1
    }

    pub fn add_eps(&mut self, from: u32, to: u32) {
        self.eps[from as usize].push(to);
    }

    pub fn add_transition(&mut self, from: u32, letter: Letter, to: u32) {
        self.delta[from as usize].push((letter, to));
    }

    fn closure(&self, q: u32) -> BitSet {
        let mut seen = BitSet::new();
        let mut stack = vec![q];
        while let Some(p) = stack.pop() {
            if seen.insert(p as usize) {
                stack.extend(self.eps[p as usize].iter().copied());
            }
        }
        seen
    }

    /// Eliminates ε-moves and trims.
    pub fn finish(&self, start: u32, accept: u32) -> FiniteAutomaton {
        let n = self.eps.len() as u32;
        let mut out = FiniteAutomaton::new(n);
        out.add_initial(start);
        for q in 0..n {
            let cl = self.closure(q);
            if cl.contains(accept as usize) {
                out.add_final(q);
            }
            for p in cl.iter() {
                for &(l, t) in &self.delta[p] {
                    out.add_transition(q, l, t);
                }
            }
        }
        out.trim()
    }
}
