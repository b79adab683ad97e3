use std::collections::{HashMap, HashSet};

use super::kripke::KripkeModel;
use crate::automata::LogicSpec;
use crate::syntax::{Atom, Context, Formula, FormulaId, FormulaSet, Letter, Program, ProgramId, Prop, SimpleProgram};

/// Largest number of state-proposition bits enumerated for valuations.
const MAX_VALUATION_BITS: usize = 20;

/// Searches all models with at most `max_states` states over the symbols of
/// `goal ∪ gamma` for one that validates `gamma` and satisfies `goal` at some
/// state. Returns the first found, smallest first, closed under every
/// inclusion axiom of `logic`.
///
/// Formulas must be in the base language with converse only on atomic
/// programs. Relations are enumerated up to permutation of states;
/// valuations are checked all at once, one bit per valuation.
pub fn bounded_sat(
    ctx: &Context,
    logic: &LogicSpec,
    goal: &FormulaSet,
    gamma: &FormulaSet,
    max_states: usize,
) -> Option<KripkeModel> {
    let sig = Signature::of(ctx, logic, goal, gamma);
    (1..=max_states)
        .find_map(|n| search(ctx, logic, &sig, goal, gamma, n))
        .map(|m| super::kripke::close_model(&m, logic))
}

struct Signature {
    props: Vec<Prop>,
    atoms: Vec<Atom>,
}

impl Signature {
    fn of(ctx: &Context, logic: &LogicSpec, goal: &FormulaSet, gamma: &FormulaSet) -> Self {
        let mut props = Vec::new();
        let mut atoms = Vec::new();
        for f in goal.iter().chain(gamma.iter()) {
            ctx.props_of(f, &mut props);
            ctx.atoms_of(f, &mut atoms);
        }
        // Atoms reachable through the logic's automata matter too.
        let mut i = 0;
        while i < atoms.len() {
            let a = atoms[i];
            for s in [SimpleProgram::positive(a), SimpleProgram::positive(a).converse()] {
                for l in logic.aut(s).alphabet() {
                    if let Letter::Simple(t) = l {
                        if !atoms.contains(&t.atom) {
                            atoms.push(t.atom);
                        }
                    }
                }
            }
            i += 1;
        }
        props.sort();
        atoms.sort();
        Signature { props, atoms }
    }
}

/// Per-state lane masks: bit `v` of state `x` says whether the formula
/// holds at `x` under valuation number `v`.
type Ext = Vec<u64>;

struct Space<'a> {
    ctx: &'a Context,
    n: usize,
    lanes: usize,
    used: u64,
    prop_index: HashMap<Prop, usize>,
    atom_index: HashMap<Atom, usize>,
    prop_masks: Vec<Ext>,
    /// `rel[a][x]`: successor bits of `x` for atom `a`.
    rel: Vec<Vec<u64>>,
    memo: HashMap<FormulaId, Ext>,
}

impl<'a> Space<'a> {
    fn zero(&self) -> Ext {
        vec![0; self.n * self.lanes]
    }

    fn full(&self) -> Ext {
        let mut e = vec![!0; self.n * self.lanes];
        if self.lanes == 1 {
            e.iter_mut().for_each(|w| *w = self.used);
        }
        e
    }

    fn not(&self, a: &Ext) -> Ext {
        let full = self.full();
        a.iter().zip(&full).map(|(x, f)| !x & f).collect()
    }

    fn and(a: &Ext, b: &Ext) -> Ext {
        a.iter().zip(b).map(|(x, y)| x & y).collect()
    }

    fn or(a: &Ext, b: &Ext) -> Ext {
        a.iter().zip(b).map(|(x, y)| x | y).collect()
    }

    fn formula(&mut self, f: FormulaId) -> Ext {
        if let Some(e) = self.memo.get(&f) {
            return e.clone();
        }
        let e = match self.ctx.formula(f) {
            Formula::Top => self.full(),
            Formula::Bottom => self.zero(),
            Formula::Prop(p) => self.prop_masks[self.prop_index[&p]].clone(),
            Formula::Not(a) => {
                let a = self.formula(a);
                self.not(&a)
            }
            Formula::And(a, b) => Self::and(&self.formula(a), &self.formula(b)),
            Formula::Or(a, b) => Self::or(&self.formula(a), &self.formula(b)),
            Formula::Implies(a, b) => {
                let a = self.formula(a);
                Self::or(&self.not(&a), &self.formula(b))
            }
            Formula::Diamond(p, a) => {
                let a = self.formula(a);
                self.diamond(p, &a)
            }
            Formula::Box(p, a) => {
                let a = self.formula(a);
                let na = self.not(&a);
                let d = self.diamond(p, &na);
                self.not(&d)
            }
            _ => panic!("bounded search takes base-language formulas"),
        };
        self.memo.insert(f, e.clone());
        e
    }

    fn simple(&self, s: SimpleProgram, e: &Ext) -> Ext {
        let a = self.atom_index[&s.atom];
        let mut out = self.zero();
        for x in 0..self.n {
            for y in 0..self.n {
                let edge = if s.conversed { self.rel[a][y] >> x & 1 == 1 } else { self.rel[a][x] >> y & 1 == 1 };
                if edge {
                    for l in 0..self.lanes {
                        out[x * self.lanes + l] |= e[y * self.lanes + l];
                    }
                }
            }
        }
        out
    }

    /// `⟨p⟩` as a transformer on extensions.
    fn diamond(&mut self, p: ProgramId, e: &Ext) -> Ext {
        match self.ctx.program(p) {
            Program::Simple(s) => self.simple(s, e),
            Program::Seq(a, b) => {
                let inner = self.diamond(b, e);
                self.diamond(a, &inner)
            }
            Program::Union(a, b) => Self::or(&self.diamond(a, e), &self.diamond(b, e)),
            Program::Star(a) => {
                let mut x = e.clone();
                loop {
                    let step = self.diamond(a, &x);
                    let next = Self::or(e, &step);
                    if next == x {
                        return x;
                    }
                    x = next;
                }
            }
            Program::Test(f) => Self::and(&self.formula(f), e),
            Program::Converse(_) => panic!("bounded search takes programs in normal form"),
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Relation bit `a·n² + x·n + y` encodes `(x, y) ∈ a`.
fn decode(code: u64, atoms: usize, n: usize) -> Vec<Vec<u64>> {
    (0..atoms).map(|a| (0..n).map(|x| (code >> (a * n * n + x * n)) & ((1 << n) - 1)).collect()).collect()
}

fn is_canonical(code: u64, bits: usize, maps: &[Vec<usize>]) -> bool {
    maps.iter().all(|map| {
        let mut permuted = 0u64;
        for (i, &j) in map.iter().enumerate().take(bits) {
            permuted |= (code >> i & 1) << j;
        }
        permuted >= code
    })
}

/// Closes relation rows under the logic, one bitmask row per state.
fn close_rows(rel: &mut [Vec<u64>], atoms: &[Atom], logic: &LogicSpec, n: usize) {
    let idx: HashMap<Atom, usize> = atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let autos: Vec<(SimpleProgram, _)> = atoms
        .iter()
        .flat_map(|&a| [SimpleProgram::positive(a), SimpleProgram::positive(a).converse()])
        .filter(|&s| logic.is_explicit(s) || logic.is_explicit(s.converse()))
        .map(|s| (s, logic.aut(s)))
        .collect();
    if autos.is_empty() {
        return;
    }
    let edge = |rel: &[Vec<u64>], s: SimpleProgram, x: usize, y: usize| {
        let a = idx[&s.atom];
        if s.conversed {
            rel[a][y] >> x & 1 == 1
        } else {
            rel[a][x] >> y & 1 == 1
        }
    };
    loop {
        let mut changed = false;
        for (s, aut) in &autos {
            let q = aut.num_states() as usize;
            for x in 0..n {
                let mut seen = vec![false; n * q];
                let mut stack = Vec::new();
                for &i in aut.initial() {
                    seen[x * q + i as usize] = true;
                    stack.push((x, i));
                }
                while let Some((y, p)) = stack.pop() {
                    if aut.is_final(p) {
                        let (from, to) = if s.conversed { (y, x) } else { (x, y) };
                        let a = idx[&s.atom];
                        if rel[a][from] >> to & 1 == 0 {
                            rel[a][from] |= 1 << to;
                            changed = true;
                        }
                    }
                    for &(l, t) in aut.delta(p) {
                        let Letter::Simple(u) = l else { continue };
                        for z in 0..n {
                            if edge(rel, u, y, z) && !seen[z * q + t as usize] {
                                seen[z * q + t as usize] = true;
                                stack.push((z, t));
                            }
                        }
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

fn search(
    ctx: &Context,
    logic: &LogicSpec,
    sig: &Signature,
    goal: &FormulaSet,
    gamma: &FormulaSet,
    n: usize,
) -> Option<KripkeModel> {
    let k = sig.props.len();
    let vbits = k * n;
    assert!(vbits <= MAX_VALUATION_BITS, "too many valuations to enumerate");
    let valuations = 1usize << vbits;
    let lanes = valuations.div_ceil(64);
    let used = if valuations >= 64 { !0 } else { (1u64 << valuations) - 1 };
    let mut prop_masks = vec![vec![0u64; n * lanes]; k];
    for (j, masks) in prop_masks.iter_mut().enumerate() {
        for x in 0..n {
            for v in 0..valuations {
                if v >> (x * k + j) & 1 == 1 {
                    masks[x * lanes + v / 64] |= 1 << (v % 64);
                }
            }
        }
    }
    let m = sig.atoms.len();
    let bits = m * n * n;
    assert!(bits < 64, "too many relation bits to enumerate");
    let maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
        .map(|p| {
            let mut map = Vec::with_capacity(bits);
            for a in 0..m {
                for x in 0..n {
                    for y in 0..n {
                        map.push(a * n * n + p[x] * n + p[y]);
                    }
                }
            }
            map
        })
        .collect();
    let mut space = Space {
        ctx,
        n,
        lanes,
        used,
        prop_index: sig.props.iter().enumerate().map(|(i, &p)| (p, i)).collect(),
        atom_index: sig.atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect(),
        prop_masks,
        rel: Vec::new(),
        memo: HashMap::new(),
    };
    let mut closed_seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    for code in 0..(1u64 << bits) {
        if !is_canonical(code, bits, &maps) {
            continue;
        }
        let mut rel = decode(code, m, n);
        close_rows(&mut rel, &sig.atoms, logic, n);
        if !closed_seen.insert(rel.clone()) {
            continue;
        }
        space.rel = rel;
        space.memo.clear();
        let mut everywhere = space.full();
        for g in gamma.iter() {
            everywhere = Space::and(&everywhere, &space.formula(g));
        }
        let mut here = space.full();
        for g in goal.iter() {
            here = Space::and(&here, &space.formula(g));
        }
        let here = Space::and(&here, &everywhere);
        let mut valid = vec![!0u64; lanes];
        let mut some = vec![0u64; lanes];
        for x in 0..n {
            for l in 0..lanes {
                valid[l] &= everywhere[x * lanes + l];
                some[l] |= here[x * lanes + l];
            }
        }
        for l in 0..lanes {
            let hit = valid[l] & some[l] & if lanes == 1 { used } else { !0 };
            if hit != 0 {
                let v = l * 64 + hit.trailing_zeros() as usize;
                return Some(to_model(sig, &space.rel, n, k, v));
            }
        }
    }
    None
}

fn to_model(sig: &Signature, rel: &[Vec<u64>], n: usize, k: usize, v: usize) -> KripkeModel {
    let mut model = KripkeModel::new(n);
    for x in 0..n {
        for (j, &p) in sig.props.iter().enumerate() {
            if v >> (x * k + j) & 1 == 1 {
                model.set_prop(p, x);
            }
        }
    }
    for (rows, &atom) in rel.iter().zip(&sig.atoms) {
        for (x, &row) in rows.iter().enumerate().take(n) {
            for y in 0..n {
                if row >> y & 1 == 1 {
                    model.add_edge(atom, x, y);
                }
            }
        }
    }
    model
}
