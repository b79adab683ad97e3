mod common;

use common::{random_problem, EXAMPLE1_LOGIC};
use cpdlreg::consistency::{in_marking, induced_marking, productive_nodes, solve_batch, solve_onthefly, TraceGraph};
use cpdlreg::io::parse_problem;
use cpdlreg::semantics::bounded_sat;
use cpdlreg::syntax::{Context, Formula, FormulaId};
use cpdlreg::tableau::{invariants, NodeKind, Status, Tableau, TableauOptions};
use cpdlreg::{solve, Error, Problem, Session, SolveOptions, Strategy, Verdict};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn fresh(p: &Problem) -> Tableau {
    let session = Session::new(p.ctx.clone(), p.logic.clone());
    let opts = TableauOptions { check_invariants: true, node_budget: 100_000, ..Default::default() };
    Tableau::new(session, p.goal.clone(), p.assumptions.clone(), opts)
}

fn batch(text: &str) -> (bool, Tableau) {
    let mut t = fresh(&parse_problem(text).unwrap());
    t.build().unwrap();
    let sat = solve_batch(&mut t).unwrap();
    (sat, t)
}

fn onthefly(text: &str) -> bool {
    let mut t = fresh(&parse_problem(text).unwrap());
    let (sat, errors) = solve_onthefly(&mut t, true).unwrap();
    assert!(errors.is_empty(), "{errors:?}");
    sat
}

fn is_eventuality(ctx: &Context, f: FormulaId) -> bool {
    match ctx.formula(f) {
        Formula::AutDiamond(..) => true,
        _ => ctx.as_letter_diamond(f).is_some_and(|(_, g)| matches!(ctx.formula(g), Formula::AutDiamond(..))),
    }
}

/// The four marking conditions over the induced marking.
fn assert_marking(t: &Tableau) {
    let m = induced_marking(t).unwrap();
    assert!(m.contains(t.root()));
    for &v in m.nodes() {
        let n = t.node(v);
        let kept = m.edges.iter().filter(|e| e.0 == v).count();
        match n.kind {
            NodeKind::State => assert_eq!(kept, n.succs.len(), "state ({v})"),
            NodeKind::NonState if n.expansion.is_some() => assert!(kept >= 1, "non-state ({v})"),
            NodeKind::NonState => {}
        }
    }
    for &(v, w) in &m.edges {
        assert!(m.contains(v) && m.contains(w));
    }
}

#[test]
fn batch_examples() {
    let (sat, t) = batch("goal { p; <s>q; }");
    assert!(sat);
    assert_eq!(t.stats().prune_iterations, 0);
    assert_marking(&t);

    let (sat, _) = batch("goal { false; }");
    assert!(!sat);

    let (sat, _) = batch("goal { <s*>p; [s*]!p; }");
    assert!(!sat);

    let (sat, _) = batch(&format!("{EXAMPLE1_LOGIC}\ngoal {{ <s>(p & [r]!p); }}"));
    assert!(!sat);
}

#[test]
fn unfulfilled_eventuality_is_pruned() {
    // Every s-successor must keep going and never reach p.
    let text = "assumptions { !p; } goal { <s*>p; }";
    let (sat, t) = batch(text);
    assert!(!sat);
    assert!(t.stats().prune_iterations >= 1 || t.node(t.root()).status == Status::Unsat);
    assert!(!onthefly(text));
}

#[test]
fn onthefly_examples() {
    assert!(onthefly("goal { p; }"));
    assert!(!onthefly(&format!("{EXAMPLE1_LOGIC}\ngoal {{ <s>(p & [r]!p); }}")));
    assert!(onthefly("goal { <s*>p; [s]!p; }"));
}

#[test]
fn trace_graph_shape() {
    let (sat, t) = batch("goal { <(s + t)*>(p & q); [s]!p; <t>true; }");
    assert!(sat);
    assert_marking(&t);
    let g = TraceGraph::build(&t);
    let ctx = &t.session().ctx;
    assert!(!g.is_empty());
    for i in 0..g.len() as u32 {
        let (v, phi) = g.key(i);
        assert!(t.node(v).label.contains(phi));
        if g.is_end(i) {
            assert!(ctx.is_base(phi));
        }
        if !g.successors(i).is_empty() {
            assert!(in_marking(&t, v));
            assert!(is_eventuality(ctx, phi), "{}", ctx.show(phi));
        }
    }
    let productive = productive_nodes(&t);
    assert!(productive.iter().all(|&(v, _)| in_marking(&t, v)));
    assert!(!productive.is_empty());
}

#[test]
fn strategies_agree_and_are_sound() {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut checked = 0;
    for i in 0..300 {
        let example = rng.gen();
        let depth = rng.gen_range(2..=4);
        let p = random_problem(&mut rng, example, depth);
        let mut verdicts = Vec::new();
        for strategy in [Strategy::Batch, Strategy::OnTheFly] {
            let opts = SolveOptions {
                strategy,
                node_budget: 100_000,
                check_invariants: true,
                verify_incremental: true,
                ..Default::default()
            };
            match solve(&p, &opts) {
                Ok(mut out) => {
                    let v = invariants::check_all(&mut out.tableau);
                    assert!(v.is_empty(), "#{i} {strategy:?}: {v:?}");
                    verdicts.push(out.verdict);
                }
                Err(Error::ResourceLimit(_)) => {}
                Err(e) => panic!("#{i} {strategy:?}: {e}"),
            }
        }
        if verdicts.len() < 2 {
            continue;
        }
        checked += 1;
        assert_eq!(verdicts[0], verdicts[1], "#{i}: {}", cpdlreg::io::print_problem(&p));
        if bounded_sat(&p.ctx, &p.logic, &p.goal, &p.assumptions, 2).is_some() {
            assert_eq!(verdicts[0], Verdict::Sat, "#{i}: {}", cpdlreg::io::print_problem(&p));
        }
    }
    assert!(checked >= 250);
}
