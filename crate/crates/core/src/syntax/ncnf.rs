//! Negation-and-converse normal form.
//!
//! Negation is pushed down to propositions, `->` is eliminated and converse
//! is pushed down to atomic programs using
//! `(a;b)^ = b^;a^`, `(a+b)^ = a^+b^`, `(a*)^ = (a^)*` and `(F?)^ = F?`.
//! Sequences are re-associated to the right so that the result does not
//! depend on how the input happened to be bracketed.

use std::collections::HashMap;

use super::{Context, Formula, FormulaId, Letter, Program, ProgramId};

/// The NCNF of `f`.
pub fn to_ncnf(ctx: &mut Context, f: FormulaId) -> FormulaId {
    let mut n = Normalizer { memo: HashMap::new(), pmemo: HashMap::new() };
    n.formula(ctx, f, true)
}

/// The NCNF of `¬f`, for `f` already in NCNF (extended operators allowed).
pub fn negate(ctx: &mut Context, f: FormulaId) -> FormulaId {
    if let Some(n) = ctx.negation_cache(f) {
        return n;
    }
    let mut n = Normalizer { memo: HashMap::new(), pmemo: HashMap::new() };
    let neg = n.formula(ctx, f, false);
    ctx.set_negation_cache(f, neg);
    neg
}

/// The NCNF of a program, with converse pushed to atoms.
pub fn normalize_program(ctx: &mut Context, p: ProgramId) -> ProgramId {
    let mut n = Normalizer { memo: HashMap::new(), pmemo: HashMap::new() };
    n.program(ctx, p, false)
}

struct Normalizer {
    memo: HashMap<(FormulaId, bool), FormulaId>,
    pmemo: HashMap<(ProgramId, bool), ProgramId>,
}

impl Normalizer {
    fn formula(&mut self, ctx: &mut Context, f: FormulaId, pos: bool) -> FormulaId {
        if let Some(&r) = self.memo.get(&(f, pos)) {
            return r;
        }
        let r = match ctx.formula(f) {
            Formula::Top => {
                if pos {
                    ctx.top()
                } else {
                    ctx.bottom()
                }
            }
            Formula::Bottom => {
                if pos {
                    ctx.bottom()
                } else {
                    ctx.top()
                }
            }
            Formula::Prop(_) => {
                if pos {
                    f
                } else {
                    ctx.not(f)
                }
            }
            Formula::Not(a) => self.formula(ctx, a, !pos),
            Formula::Implies(a, b) => {
                let a = self.formula(ctx, a, !pos);
                let b = self.formula(ctx, b, pos);
                if pos {
                    ctx.or(a, b)
                } else {
                    ctx.and(a, b)
                }
            }
            Formula::And(a, b) => {
                let a = self.formula(ctx, a, pos);
                let b = self.formula(ctx, b, pos);
                if pos {
                    ctx.and(a, b)
                } else {
                    ctx.or(a, b)
                }
            }
            Formula::Or(a, b) => {
                let a = self.formula(ctx, a, pos);
                let b = self.formula(ctx, b, pos);
                if pos {
                    ctx.or(a, b)
                } else {
                    ctx.and(a, b)
                }
            }
            Formula::Diamond(p, a) => {
                let p = self.program(ctx, p, false);
                let a = self.formula(ctx, a, pos);
                if pos {
                    ctx.diamond(p, a)
                } else {
                    ctx.boxed(p, a)
                }
            }
            Formula::Box(p, a) => {
                let p = self.program(ctx, p, false);
                let a = self.formula(ctx, a, pos);
                if pos {
                    ctx.boxed(p, a)
                } else {
                    ctx.diamond(p, a)
                }
            }
            Formula::LetterBox(l, a) => {
                let l = match l {
                    Letter::Test(t) => Letter::Test(self.formula(ctx, t, true)),
                    s => s,
                };
                let a = self.formula(ctx, a, pos);
                if pos {
                    ctx.letter_box(l, a)
                } else {
                    ctx.letter_diamond(l, a)
                }
            }
            Formula::AutBox(r, q, a) => {
                let a = self.formula(ctx, a, pos);
                if pos {
                    ctx.intern(Formula::AutBox(r, q, a))
                } else {
                    ctx.intern(Formula::AutDiamond(r, q, a))
                }
            }
            Formula::AutDiamond(r, q, a) => {
                let a = self.formula(ctx, a, pos);
                if pos {
                    ctx.intern(Formula::AutDiamond(r, q, a))
                } else {
                    ctx.intern(Formula::AutBox(r, q, a))
                }
            }
        };
        self.memo.insert((f, pos), r);
        r
    }

    fn program(&mut self, ctx: &mut Context, p: ProgramId, conv: bool) -> ProgramId {
        if let Some(&r) = self.pmemo.get(&(p, conv)) {
            return r;
        }
        let r = match ctx.program(p) {
            Program::Simple(s) => {
                let s = if conv { s.converse() } else { s };
                ctx.simple(s)
            }
            Program::Seq(a, b) => {
                let (first, second) = if conv { (b, a) } else { (a, b) };
                let x = self.program(ctx, first, conv);
                let y = self.program(ctx, second, conv);
                right_seq(ctx, x, y)
            }
            Program::Union(a, b) => {
                let a = self.program(ctx, a, conv);
                let b = self.program(ctx, b, conv);
                ctx.union(a, b)
            }
            Program::Star(a) => {
                let a = self.program(ctx, a, conv);
                ctx.star(a)
            }
            Program::Converse(a) => self.program(ctx, a, !conv),
            Program::Test(f) => {
                let f = self.formula(ctx, f, true);
                ctx.test(f)
            }
        };
        self.pmemo.insert((p, conv), r);
        r
    }
}

/// `x;y` with the result nested to the right, assuming `x` and `y` already are.
fn right_seq(ctx: &mut Context, x: ProgramId, y: ProgramId) -> ProgramId {
    match ctx.program(x) {
        Program::Seq(a, b) => {
            let rest = right_seq(ctx, b, y);
            ctx.seq(a, rest)
        }
        _ => ctx.seq(x, y),
    }
}
