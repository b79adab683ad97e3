//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use common::{random_problem, Gen, Naive, EXAMPLE1_LOGIC};
use cpdlreg::semantics::{bounded_sat, check_model, close_model, extract_model};
use cpdlreg::syntax::{to_ncnf, Context, Formula, FormulaId, FormulaSet, Letter, SimpleProgram};
use cpdlreg::tableau::{invariants, rule_for, NodeKind, RuleTag, Status};
use cpdlreg::{io, solve, Error, Outcome, Problem, SolveOptions, Strategy, Verdict};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const RANDOM_BUDGET: usize = 200_000;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, n: u32, ok: bool, what: &str, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("criterion {n}: {} - {what} ({detail})", if ok { "PASS" } else { "FAIL" });
    }
}

fn run(p: &Problem, strategy: Strategy, budget: Option<usize>) -> Result<Outcome, Error> {
    let mut opts = SolveOptions { strategy, check_invariants: true, ..Default::default() };
    opts.verify_incremental = strategy == Strategy::OnTheFly;
    if let Some(b) = budget {
        opts.node_budget = b;
    }
    solve(p, &opts)
}

/// Structural checks on a finished run.
fn structural(out: &mut Outcome) -> Vec<String> {
    invariants::check_all(&mut out.tableau)
}

/// Extracts and checks a model for a Sat outcome, with both the library
/// check and the naive evaluator.
fn verify_sat(p: &Problem, out: &Outcome) -> Result<(), String> {
    let g = extract_model(&out.tableau).map_err(|e| e.to_string())?;
    let ctx = &out.tableau.session().ctx;
    let closed = check_model(ctx, &p.logic, &g, &p.goal, &p.assumptions).map_err(|e| e.to_string())?;
    let mut naive = Naive::from_model(ctx, &g.to_kripke(ctx));
    naive.close(ctx, &p.logic);
    if Naive::from_model(ctx, &closed).rel != naive.rel {
        return Err("model closure disagrees with the naive closure".into());
    }
    let goal: Vec<FormulaId> = p.goal.iter().collect();
    let gamma: Vec<FormulaId> = p.assumptions.iter().collect();
    if !naive.satisfies(ctx, &goal, &gamma, g.root) {
        return Err("naive evaluation rejects the extracted model".into());
    }
    Ok(())
}

fn parse(text: &str) -> Problem {
    io::parse_problem(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Criteria 7 and 8 are checked on every problem of criteria 4-6.
#[derive(Default)]
struct Cross {
    runs: usize,
    disagreements: Vec<String>,
    violations: Vec<String>,
}

impl Cross {
    fn both(&mut self, name: &str, p: &Problem, budget: Option<usize>) -> Result<(Outcome, Outcome), Error> {
        let mut a = run(p, Strategy::Batch, budget)?;
        let mut b = run(p, Strategy::OnTheFly, budget)?;
        self.runs += 1;
        if a.verdict != b.verdict {
            self.disagreements.push(format!("{name}: batch {:?}, on-the-fly {:?}", a.verdict, b.verdict));
        }
        for (s, out) in [("batch", &mut a), ("on-the-fly", &mut b)] {
            for v in structural(out) {
                self.violations.push(format!("{name} ({s}): {v}"));
            }
        }
        Ok((a, b))
    }
}

fn criterion1(r: &mut Report) {
    let start = Instant::now();
    let p = parse(&format!("{EXAMPLE1_LOGIC}\ngoal {{ <s>(p & [r]!p); }}"));
    let mut notes = Vec::new();
    let mut ok = true;
    for strategy in [Strategy::Batch, Strategy::OnTheFly] {
        let out = run(&p, strategy, None).expect("example 1");
        let t = &out.tableau;
        let ctx = &t.session().ctx;
        let sc_ok = t.nodes().any(|(_, n)| {
            n.status == Status::Incomplete
                && n.formula_sc.map(|f| ctx.show(f).to_string()).as_deref() == Some("[aut(r),0]!p")
        });
        let conv = t.nodes().filter(|(_, n)| n.expansion.as_ref().is_some_and(|e| e.rule == RuleTag::Conv)).count();
        let size = t.live_count();
        ok &= out.verdict == Verdict::Unsat && sc_ok && out.stats.conv_applications >= 1 && conv >= 1;
        ok &= (14..=22).contains(&size);
        notes.push(format!(
            "{strategy:?}: {:?}, {} Incomplete, {} Conv, {size} nodes",
            out.verdict, out.stats.incomplete_states, out.stats.conv_applications
        ));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    notes.push(format!("{elapsed:.2?}"));
    r.line(1, ok, "worked example is UNSAT with the Incomplete/Conv events", notes.join("; "));
}

fn criterion2(r: &mut Report) {
    let mut ctx = Context::new();
    let input = io::parse_formula(&mut ctx, "![((s1 + s2); s3*; (!!p)?)^](q | !r)").unwrap();
    let expected = io::parse_formula(&mut ctx, "<p?; (s3^)*; (s1^ + s2^)>(!q & r)").unwrap();
    let got = to_ncnf(&mut ctx, input);
    let ok = got == expected;
    r.line(2, ok, "NCNF of the syntax example", format!("got {}", ctx.show(got)));
}

fn criterion3(r: &mut Report) {
    let mut problem = Problem::default();
    let ctx = &mut problem.ctx;
    let s = SimpleProgram::positive(ctx.atom("s"));
    let (p, q, rr, sp) = (ctx.var("p"), ctx.var("q"), ctx.var("r"), ctx.var("s"));
    let dp = ctx.letter_diamond(Letter::Simple(s), p);
    let dq = ctx.letter_diamond(Letter::Simple(s), q);
    let br = ctx.letter_box(Letter::Simple(s), rr);
    let label: FormulaSet = [dp, dq, br].into_iter().collect();
    let gamma: FormulaSet = [sp].into_iter().collect();
    let mut session = cpdlreg::Session::new(problem.ctx.clone(), problem.logic.clone());
    let choice = rule_for(&mut session, NodeKind::State, &label, &FormulaSet::new(), &gamma).expect("a rule");
    let mut got: Vec<FormulaSet> = choice.conclusions.iter().map(|c| c.label.clone()).collect();
    got.sort_by_key(|s| s.iter().collect::<Vec<_>>());
    let mut want: Vec<FormulaSet> = vec![[p, rr, sp].into_iter().collect(), [q, rr, sp].into_iter().collect()];
    want.sort_by_key(|s| s.iter().collect::<Vec<_>>());
    let ok = choice.rule == RuleTag::Trans && got == want;
    let shown: Vec<String> = got
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(|f| session.ctx.show(f).to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    r.line(3, ok, "transitional rule instance", shown.join(" "));
}

const VALID: &[(&str, &str)] = &[
    ("", "[s*]p -> (p & [s][s*]p)"),
    ("", "(p & [s][s*]p) -> [s*]p"),
    ("", "p -> [s]<s^>p"),
    ("", "p -> [s^]<s>p"),
    ("", "<s*>p -> (p | <s><s*>p)"),
    ("", "(p | <s><s*>p) -> <s*>p"),
    ("", "[s](p -> q) -> ([s]p -> [s]q)"),
    ("", "[s*](p & <s>q) -> (p & <s>q & [s][s*](p & <s>q))"),
    ("", "(p | <s>q) -> [s^]<s>(p | <s>q)"),
    ("", "<s*>(p & q) -> ((p & q) | <s><s*>(p & q))"),
    ("", "[(s + t)*]p -> [s*][t*]p"),
    ("", "[s*](p -> [s]p) -> (p -> [s*]p)"),
    (EXAMPLE1_LOGIC, "[r]p -> [s]p"),
    (EXAMPLE1_LOGIC, "[r]q -> [s]q"),
];

fn criterion4(r: &mut Report, cross: &mut Cross) {
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for (logic, f) in VALID {
        let text = format!("{logic}\ngoal {{ !({f}); }}");
        let p = parse(&text);
        let start = Instant::now();
        match cross.both(f, &p, None) {
            Ok((a, b)) => {
                let elapsed = start.elapsed() / 2;
                slowest = slowest.max(elapsed);
                if a.verdict != Verdict::Unsat || b.verdict != Verdict::Unsat || elapsed >= Duration::from_secs(1) {
                    bad.push(f.to_string());
                }
            }
            Err(e) => bad.push(format!("{f}: {e}")),
        }
    }
    r.line(
        4,
        bad.is_empty(),
        "validity suite is UNSAT when negated",
        format!("{} formulas, slowest {slowest:.2?}, failing: {bad:?}", VALID.len()),
    );
}

/// Each entry is `(logic, assumptions, goal)`.
const SAT: &[(&str, &str, &str)] = &[
    ("", "", "<s>p;"),
    ("", "", "<s*>p; !p;"),
    ("", "", "p; [s]false;"),
    ("", "", "<(p?;s)*>q;"),
    ("", "", "<s>p; <s>!p;"),
    ("", "", "<s^>p; [s^][s]p;"),
    ("", "", "[s*]<s>true;"),
    ("", "<s>p; <s>!p;", "true;"),
    ("", "", "<s;t>p; [s][t]!q;"),
    ("", "", "<(s + t)*>(p & q); [s]!p;"),
    ("", "", "p; [s]<s^>p; <s>true;"),
    ("", "", "<s>[s^]!p; !p;"),
    ("", "p -> <s>!p; !p -> <s>p;", "p;"),
    ("", "", "<s*>(p & <s>!p);"),
    ("", "", "[s*](p | q); <s>!p;"),
    ("", "", "<(s;s)*>p; !p; [s]!p;"),
    ("", "", "<p?>true; <(s^)*>q;"),
    ("", "[s]p;", "<s>true; !p;"),
    ("", "", "<s^><s>!p; p; [s^]<s^^>q;"),
    ("", "", "<(s^)*>(p & [s^]false); [s*]!q;"),
    (EXAMPLE1_LOGIC, "", "<r>p; [s]!p;"),
    (EXAMPLE1_LOGIC, "", "<s^>p; [r]q;"),
    (EXAMPLE1_LOGIC, "", "<s>(p & <s^>q); q;"),
    (EXAMPLE1_LOGIC, "", "<s*>(p & [r]!p);"),
];

fn criterion5(r: &mut Report, cross: &mut Cross) {
    let mut bad = Vec::new();
    for (logic, gamma, goal) in SAT {
        let text = format!("{logic}\nassumptions {{ {gamma} }}\ngoal {{ {goal} }}");
        let p = parse(&text);
        match cross.both(goal, &p, None) {
            Ok((a, b)) => {
                for out in [&a, &b] {
                    if out.verdict != Verdict::Sat {
                        bad.push(format!("{goal}: {:?}", out.verdict));
                    } else if let Err(e) = verify_sat(&p, out) {
                        bad.push(format!("{goal}: {e}"));
                    }
                }
            }
            Err(e) => bad.push(format!("{goal}: {e}")),
        }
    }
    r.line(
        5,
        bad.is_empty(),
        "satisfiability suite is SAT with checked models",
        format!("{} problems, failing: {bad:?}", SAT.len()),
    );
}

fn criterion6(r: &mut Report, cross: &mut Cross) {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let total = 320;
    let (mut sat, mut unsat, mut oracle_models, mut limit) = (0, 0, 0, 0);
    let mut violations = Vec::new();
    for i in 0..total {
        let example = i % 2 == 1;
        let depth = rng.gen_range(1..=4);
        let p = random_problem(&mut rng, example, depth);
        let name = format!("#{i} {}", io::print_problem(&p).replace('\n', " "));
        let oracle = bounded_sat(&p.ctx, &p.logic, &p.goal, &p.assumptions, 3);
        if let Some(m) = &oracle {
            oracle_models += 1;
            let mut naive = Naive::from_model(&p.ctx, m);
            naive.close(&p.ctx, &p.logic);
            let goal: Vec<FormulaId> = p.goal.iter().collect();
            let gamma: Vec<FormulaId> = p.assumptions.iter().collect();
            if !naive.satisfies_somewhere(&p.ctx, &goal, &gamma) || close_model(m, &p.logic) != *m {
                violations.push(format!("{name}: oracle model fails naive check"));
            }
        }
        let (a, _) = match cross.both(&name, &p, Some(RANDOM_BUDGET)) {
            Ok(x) => x,
            Err(Error::ResourceLimit(_)) => {
                limit += 1;
                continue;
            }
            Err(e) => {
                violations.push(format!("{name}: {e}"));
                continue;
            }
        };
        match a.verdict {
            Verdict::Sat => {
                sat += 1;
                if let Err(e) = verify_sat(&p, &a) {
                    violations.push(format!("{name}: {e}"));
                }
            }
            Verdict::Unsat => {
                unsat += 1;
                if let Some(m) = &oracle {
                    violations.push(format!("{name}: UNSAT but a {}-state model exists", m.size()));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = violations.is_empty() && limit == 0 && elapsed < Duration::from_secs(300);
    for v in violations.iter().take(5) {
        println!("  {v}");
    }
    r.line(
        6,
        ok,
        "bounded oracle and extracted models agree with the solver",
        format!(
            "{total} problems, {sat} SAT, {unsat} UNSAT, {oracle_models} oracle models, {limit} over budget, {} violations, {elapsed:.1?}",
            violations.len()
        ),
    );
}

fn criterion9(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(9);
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut fixed: Vec<Problem> = ["<s>p; [s]!q; <s^>q;", "<s>p; [s][s]false; <t><s^>q;", "[s]<s>p; <s>!p;"]
        .iter()
        .map(|g| parse(&format!("goal {{ {g} }}")))
        .collect();
    for _ in 0..60 {
        let mut ctx = Context::new();
        let mut gen = SimpleGen { gen: Gen { rng: &mut rng, props: vec!["p", "q"], atoms: vec!["s", "t"] } };
        let fs: Vec<FormulaId> = (0..2).map(|_| gen.formula(&mut ctx, 4)).collect();
        let mut p = Problem::new(ctx, Default::default());
        for f in fs {
            p.add_goal(f);
        }
        fixed.push(p);
    }
    for p in &fixed {
        for strategy in [Strategy::Batch, Strategy::OnTheFly] {
            let out = run(p, strategy, None).expect("simple problem");
            let t = &out.tableau;
            let ctx = &t.session().ctx;
            let aut_diamonds = t
                .nodes()
                .flat_map(|(_, n)| n.label.iter().collect::<Vec<_>>())
                .any(|f| matches!(ctx.formula(f), Formula::AutDiamond(..)));
            if aut_diamonds {
                bad.push("generated an automaton diamond".to_string());
            }
            if out.stats.prune_iterations != 0 {
                bad.push(format!("{strategy:?}: {} prune iterations", out.stats.prune_iterations));
            }
            checked += 1;
        }
    }
    r.line(9, bad.is_empty(), "no trace pruning without compound programs", format!("{checked} runs, {bad:?}"));
}

/// Random formulas whose programs are all atoms or converse atoms.
struct SimpleGen<'a> {
    gen: Gen<'a>,
}

impl SimpleGen<'_> {
    fn formula(&mut self, ctx: &mut Context, depth: u32) -> FormulaId {
        let g = &mut self.gen;
        if depth == 0 || g.rng.gen_ratio(1, 4) {
            let v = ctx.var(g.props[g.rng.gen_range(0..2)]);
            return if g.rng.gen() { ctx.not(v) } else { v };
        }
        let choice = g.rng.gen_range(0..5);
        let a = ctx.atomic(g.atoms[g.rng.gen_range(0..2)]);
        let a = if g.rng.gen_ratio(1, 3) { ctx.converse(a) } else { a };
        let x = self.formula(ctx, depth - 1);
        match choice {
            0 => {
                let y = self.formula(ctx, depth - 1);
                ctx.and(x, y)
            }
            1 => {
                let y = self.formula(ctx, depth - 1);
                ctx.or(x, y)
            }
            2 => ctx.diamond(a, x),
            3 => ctx.boxed(a, x),
            _ => ctx.not(x),
        }
    }
}

fn main() {
    let mut report = Report { failures: 0 };
    let mut cross = Cross::default();
    criterion1(&mut report);
    criterion2(&mut report);
    criterion3(&mut report);
    criterion4(&mut report, &mut cross);
    criterion5(&mut report, &mut cross);
    criterion6(&mut report, &mut cross);
    for d in cross.disagreements.iter().take(5) {
        println!("  {d}");
    }
    report.line(
        7,
        cross.disagreements.is_empty(),
        "batch and on-the-fly agree",
        format!("{} problems, {} disagreements", cross.runs, cross.disagreements.len()),
    );
    for v in cross.violations.iter().take(5) {
        println!("  {v}");
    }
    report.line(
        8,
        cross.violations.is_empty(),
        "structural invariants hold after every run",
        format!("{} runs, {} violations", 2 * cross.runs, cross.violations.len()),
    );
    criterion9(&mut report);
    if report.failures > 0 {
        println!("{} criteria failed", report.failures);
        std::process::exit(1);
    }
}
