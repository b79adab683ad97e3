//! Printing in the surface syntax accepted by the parser.
//!
//! Auxiliary operators have no surface syntax; they print as `{s}F` for
//! `□_s F`, `[aut(A),q]F` and `<Aut(A),q>F`.

use std::fmt;

use super::{AutRef, Context, Formula, FormulaId, Letter, Program, ProgramId, SimpleProgram};

pub struct FormulaDisplay<'a> {
    ctx: &'a Context,
    id: FormulaId,
}

pub struct ProgramDisplay<'a> {
    ctx: &'a Context,
    id: ProgramId,
}

impl Context {
    pub fn show(&self, id: FormulaId) -> FormulaDisplay<'_> {
        FormulaDisplay { ctx: self, id }
    }

    pub fn show_program(&self, id: ProgramId) -> ProgramDisplay<'_> {
        ProgramDisplay { ctx: self, id }
    }

    pub fn simple_name(&self, s: SimpleProgram) -> String {
        if s.conversed {
            format!("{}^", self.atom_name(s.atom))
        } else {
            self.atom_name(s.atom).to_owned()
        }
    }
}

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn formula_prec(f: Formula) -> u8 {
    match f {
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_formula(ctx: &Context, id: FormulaId, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let f = ctx.formula(id);
    let prec = formula_prec(f);
    if prec < min {
        out.write_str("(")?;
        write_formula(ctx, id, 0, out)?;
        return out.write_str(")");
    }
    match f {
        Formula::Top => out.write_str("true"),
        Formula::Bottom => out.write_str("false"),
        Formula::Prop(p) => out.write_str(ctx.prop_name(p)),
        Formula::Not(a) => {
            out.write_str("!")?;
            write_formula(ctx, a, UNARY, out)
        }
        Formula::Implies(a, b) => {
            write_formula(ctx, a, IMPLIES + 1, out)?;
            out.write_str(" -> ")?;
            write_formula(ctx, b, IMPLIES, out)
        }
        Formula::Or(a, b) => {
            write_formula(ctx, a, OR, out)?;
            out.write_str(" | ")?;
            write_formula(ctx, b, OR + 1, out)
        }
        Formula::And(a, b) => {
            write_formula(ctx, a, AND, out)?;
            out.write_str(" & ")?;
            write_formula(ctx, b, AND + 1, out)
        }
        Formula::Diamond(p, a) => {
            out.write_str("<")?;
            write_program(ctx, p, 0, out)?;
            out.write_str(">")?;
            write_formula(ctx, a, UNARY, out)
        }
        Formula::Box(p, a) => {
            out.write_str("[")?;
            write_program(ctx, p, 0, out)?;
            out.write_str("]")?;
            write_formula(ctx, a, UNARY, out)
        }
        Formula::LetterBox(l, a) => {
            out.write_str("{")?;
            match l {
                Letter::Simple(s) => out.write_str(&ctx.simple_name(s))?,
                Letter::Test(t) => {
                    write_formula(ctx, t, UNARY, out)?;
                    out.write_str("?")?;
                }
            }
            out.write_str("}")?;
            write_formula(ctx, a, UNARY, out)
        }
        Formula::AutBox(r, q, a) => {
            out.write_str("[")?;
            write_aut(ctx, r, out)?;
            write!(out, ",{q}]")?;
            write_formula(ctx, a, UNARY, out)
        }
        Formula::AutDiamond(r, q, a) => {
            out.write_str("<")?;
            write_aut(ctx, r, out)?;
            write!(out, ",{q}>")?;
            write_formula(ctx, a, UNARY, out)
        }
    }
}

fn write_aut(ctx: &Context, r: AutRef, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    out.write_str(if r.closed { "aut(" } else { "Aut(" })?;
    write_program(ctx, r.program, 0, out)?;
    out.write_str(")")
}

const UNION: u8 = 1;
const SEQ: u8 = 2;
const POSTFIX: u8 = 3;
const ATOMIC: u8 = 4;

fn program_prec(p: Program) -> u8 {
    match p {
        Program::Union(..) => UNION,
        Program::Seq(..) => SEQ,
        Program::Star(..) | Program::Converse(..) => POSTFIX,
        Program::Test(..) => SEQ,
        Program::Simple(_) => ATOMIC,
    }
}

fn write_program(ctx: &Context, id: ProgramId, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = ctx.program(id);
    if program_prec(p) < min {
        out.write_str("(")?;
        write_program(ctx, id, 0, out)?;
        return out.write_str(")");
    }
    match p {
        Program::Simple(s) => out.write_str(&ctx.simple_name(s)),
        Program::Seq(a, b) => {
            write_program(ctx, a, SEQ, out)?;
            out.write_str(" ; ")?;
            write_program(ctx, b, SEQ, out)
        }
        Program::Union(a, b) => {
            write_program(ctx, a, UNION, out)?;
            out.write_str(" + ")?;
            write_program(ctx, b, UNION + 1, out)
        }
        Program::Star(a) => {
            write_program(ctx, a, POSTFIX, out)?;
            out.write_str("*")
        }
        Program::Converse(a) => {
            write_program(ctx, a, POSTFIX, out)?;
            out.write_str("^")
        }
        Program::Test(f) => {
            write_formula(ctx, f, UNARY, out)?;
            out.write_str("?")
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self.ctx, self.id, 0, f)
    }
}

impl fmt::Display for ProgramDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_program(self.ctx, self.id, 0, f)
    }
}
