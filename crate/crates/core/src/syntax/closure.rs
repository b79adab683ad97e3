use super::{negate, Context, Formula, FormulaId, FormulaSet, Letter, Program, ProgramId};

/// All subformulas of `f`, including `f` itself and formulas inside tests.
pub fn subformulas(ctx: &Context, f: FormulaId) -> FormulaSet {
    let mut out = FormulaSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if !out.insert(g) {
            continue;
        }
        match ctx.formula(g) {
            Formula::Top | Formula::Bottom | Formula::Prop(_) => {}
            Formula::Not(a) => stack.push(a),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            Formula::Diamond(p, a) | Formula::Box(p, a) => {
                program_tests(ctx, p, &mut stack);
                stack.push(a);
            }
            Formula::LetterBox(l, a) => {
                if let Letter::Test(t) = l {
                    stack.push(t);
                }
                stack.push(a);
            }
            Formula::AutBox(_, _, a) | Formula::AutDiamond(_, _, a) => stack.push(a),
        }
    }
    out
}

fn program_tests(ctx: &Context, p: ProgramId, out: &mut Vec<FormulaId>) {
    match ctx.program(p) {
        Program::Simple(_) => {}
        Program::Seq(a, b) | Program::Union(a, b) => {
            program_tests(ctx, a, out);
            program_tests(ctx, b, out);
        }
        Program::Star(a) | Program::Converse(a) => program_tests(ctx, a, out),
        Program::Test(f) => out.push(f),
    }
}

/// The basic subformulas of `y`: every subformula of a member of `y`
/// together with its negation.
pub fn bsf(ctx: &mut Context, y: &FormulaSet) -> FormulaSet {
    let mut subs = FormulaSet::new();
    for f in y.iter() {
        subs.union_with(&subformulas(ctx, f));
    }
    let mut out = subs.clone();
    for f in subs.iter() {
        let n = negate(ctx, f);
        out.insert(n);
    }
    out
}
