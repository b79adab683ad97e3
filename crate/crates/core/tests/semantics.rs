mod common;

use std::collections::BTreeSet;

use common::{example1_logic, Gen, Naive};
use cpdlreg::automata::LogicSpec;
use cpdlreg::io::{parse_formula, parse_problem};
use cpdlreg::semantics::{bounded_sat, check_model, close_model, eval, extract_model, KripkeModel};
use cpdlreg::syntax::{to_ncnf, Context, FormulaSet, SimpleProgram};
use cpdlreg::{solve, SolveOptions, Verdict};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn pairs(m: &KripkeModel, ctx: &Context) -> Vec<BTreeSet<(usize, usize)>> {
    ctx.atoms().map(|a| m.relation(a).pairs().collect()).collect()
}

fn random_model(ctx: &mut Context, rng: &mut StdRng, size: usize) -> KripkeModel {
    let mut m = KripkeModel::new(size);
    let props: Vec<_> = ["p", "q"].iter().map(|n| ctx.prop(n)).collect();
    let atoms: Vec<_> = ctx.atoms().collect();
    for x in 0..size {
        for &p in &props {
            if rng.gen() {
                m.set_prop(p, x);
            }
        }
        for &a in &atoms {
            for y in 0..size {
                if rng.gen_ratio(1, 3) {
                    m.add_edge(a, x, y);
                }
            }
        }
    }
    m
}

/// States a, b, c as 0, 1, 2 with `s = {(b,a), (b,c)}`.
fn abc_model(ctx: &mut Context) -> (KripkeModel, LogicSpec) {
    let logic = example1_logic(ctx);
    let s = ctx.lookup_atom("s").unwrap();
    let mut m = KripkeModel::new(3);
    m.add_edge(s, 1, 0);
    m.add_edge(s, 1, 2);
    (m, logic)
}

#[test]
fn close_worked_example_model() {
    let mut ctx = Context::new();
    let (m, logic) = abc_model(&mut ctx);
    let c = close_model(&m, &logic);
    let r = SimpleProgram::positive(ctx.lookup_atom("r").unwrap());
    let got: BTreeSet<_> = c.simple_relation(r).pairs().collect();
    // s^;s from a and from c reaches both a and c; s itself gives (b,a), (b,c).
    let expected: BTreeSet<_> = [(0, 0), (0, 2), (2, 0), (2, 2), (1, 0), (1, 2)].into();
    assert_eq!(got, expected);
    let back: BTreeSet<_> = c.simple_relation(r.converse()).pairs().collect();
    assert_eq!(back, expected.iter().map(|&(x, y)| (y, x)).collect());
}

#[test]
fn eval_on_worked_example_model() {
    let mut ctx = Context::new();
    let (mut m, logic) = abc_model(&mut ctx);
    let f = parse_formula(&mut ctx, "[r]!p").unwrap();
    let p = ctx.lookup_prop("p").unwrap();
    for p_at_c in [false, true] {
        if p_at_c {
            m.set_prop(p, 2);
        }
        let c = close_model(&m, &logic);
        assert_eq!(eval(&ctx, &c, f).contains(0), !p_at_c);
    }
}

#[test]
fn identity_logic_leaves_model_alone() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut ctx = Context::new();
    ctx.atom("s");
    ctx.atom("t");
    let m = random_model(&mut ctx, &mut rng, 4);
    assert_eq!(pairs(&close_model(&m, &LogicSpec::identity()), &ctx), pairs(&m, &ctx));
}

#[test]
fn eval_examples() {
    let mut ctx = Context::new();
    let s = ctx.atom("s");
    let p = ctx.prop("p");
    let mut m = KripkeModel::new(1);
    m.add_edge(s, 0, 0);
    m.set_prop(p, 0);
    let top = ctx.top();
    assert_eq!(eval(&ctx, &m, top).len(), 1);
    let f = parse_formula(&mut ctx, "<s*>p").unwrap();
    assert!(eval(&ctx, &m, f).contains(0));
}

#[test]
fn bounded_examples() {
    let mut ctx = Context::new();
    let logic = LogicSpec::identity();
    let dp = parse_formula(&mut ctx, "<s>p").unwrap();
    let goal: FormulaSet = [dp].into_iter().collect();
    let m = bounded_sat(&ctx, &logic, &goal, &FormulaSet::new(), 3).expect("a model");
    assert_eq!(m.size(), 1);
    let s = ctx.lookup_atom("s").unwrap();
    assert!(m.relation(s).contains(0, 0));
    assert!(m.holds(ctx.lookup_prop("p").unwrap(), 0));

    let clash: FormulaSet = ["p", "!p"].iter().map(|t| parse_formula(&mut ctx, t).unwrap()).collect();
    assert!(bounded_sat(&ctx, &logic, &clash, &FormulaSet::new(), 3).is_none());

    let conv: FormulaSet = ["p", "<s>[s^]!p"].iter().map(|t| parse_formula(&mut ctx, t).unwrap()).collect();
    assert!(bounded_sat(&ctx, &logic, &conv, &FormulaSet::new(), 3).is_none());
}

#[test]
fn extract_single_world() {
    let p = parse_problem("goal { p; }").unwrap();
    let out = solve(&p, &SolveOptions::default()).unwrap();
    assert_eq!(out.verdict, Verdict::Sat);
    let g = extract_model(&out.tableau).unwrap();
    assert_eq!(g.worlds.len(), 1);
    assert!(g.edges.is_empty());
    let ctx = &out.tableau.session().ctx;
    assert!(g.worlds[0].content.iter().any(|f| ctx.show(f).to_string() == "p"));
}

#[test]
fn extract_one_successor() {
    let p = parse_problem("goal { <s>p; }").unwrap();
    let out = solve(&p, &SolveOptions::default()).unwrap();
    let g = extract_model(&out.tableau).unwrap();
    assert_eq!(g.worlds.len(), 2);
    assert_eq!(g.edges.len(), 1);
    let (_, from, to) = g.edges[0];
    assert_eq!(from, g.root);
    let ctx = &out.tableau.session().ctx;
    assert!(g.worlds[to].content.iter().any(|f| ctx.show(f).to_string() == "p"));
    check_model(ctx, &p.logic, &g, &p.goal, &p.assumptions).unwrap();
}

#[test]
fn extract_refuses_unsat_root() {
    let p = parse_problem("goal { p; !p; }").unwrap();
    let out = solve(&p, &SolveOptions::default()).unwrap();
    assert!(extract_model(&out.tableau).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closure_is_idempotent_and_monotone(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut ctx = Context::new();
        let logic = example1_logic(&mut ctx);
        let m = random_model(&mut ctx, &mut rng, 3);
        let c = close_model(&m, &logic);
        prop_assert_eq!(pairs(&close_model(&c, &logic), &ctx), pairs(&c, &ctx));
        for (before, after) in pairs(&m, &ctx).iter().zip(pairs(&c, &ctx)) {
            prop_assert!(before.is_subset(&after));
        }
        for a in ctx.atoms() {
            let s = SimpleProgram::positive(a);
            let fwd: BTreeSet<_> = c.simple_relation(s).pairs().map(|(x, y)| (y, x)).collect();
            let back: BTreeSet<_> = c.simple_relation(s.converse()).pairs().collect();
            prop_assert_eq!(fwd, back);
        }
        let mut naive = Naive::from_model(&ctx, &m);
        naive.close(&ctx, &logic);
        prop_assert_eq!(naive.rel, pairs(&c, &ctx));
    }

    #[test]
    fn eval_agrees_with_naive(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut ctx = Context::new();
        ctx.atom("s");
        ctx.atom("t");
        let m = random_model(&mut ctx, &mut rng, 3);
        let f = Gen { rng: &mut rng, props: vec!["p", "q"], atoms: vec!["s", "t"] }.formula(&mut ctx, 4);
        let f = to_ncnf(&mut ctx, f);
        let naive = Naive::from_model(&ctx, &m);
        let got = eval(&ctx, &m, f);
        for x in 0..3 {
            prop_assert_eq!(got.contains(x), naive.holds(&ctx, f, x), "{}", ctx.show(f));
        }
    }

    #[test]
    fn bounded_models_really_satisfy(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = common::random_problem(&mut rng, seed % 2 == 0, 2);
        if let Some(m) = bounded_sat(&p.ctx, &p.logic, &p.goal, &p.assumptions, 2) {
            let mut naive = Naive::from_model(&p.ctx, &m);
            naive.close(&p.ctx, &p.logic);
            let goal: Vec<_> = p.goal.iter().collect();
            let gamma: Vec<_> = p.assumptions.iter().collect();
            prop_assert!(naive.satisfies_somewhere(&p.ctx, &goal, &gamma));
        }
    }
}
