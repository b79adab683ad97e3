use crate::consistency::{solve_batch, solve_onthefly};
use crate::error::{Error, Result};
use crate::session::{Problem, Session};
use crate::tableau::{Search, Stats, Status, Tableau, TableauOptions};

/// How unproductive eventualities are detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Build the whole tableau, then prune.
    Batch,
    /// Prune while the tableau is built.
    #[default]
    OnTheFly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub strategy: Strategy,
    pub search: Search,
    pub node_budget: usize,
    /// Run structural checks after every step and fail on violations.
    pub check_invariants: bool,
    /// Compare every incremental liveness update with a full recomputation.
    pub verify_incremental: bool,
    /// Stop once the root is known to be satisfiable.
    pub stop_on_sat: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        let t = TableauOptions::default();
        SolveOptions {
            strategy: Strategy::default(),
            search: t.search,
            node_budget: t.node_budget,
            check_invariants: false,
            verify_incremental: false,
            stop_on_sat: false,
        }
    }
}

pub struct Outcome {
    pub verdict: Verdict,
    pub stats: Stats,
    pub tableau: Tableau,
}

/// Decides a problem.
pub fn solve(problem: &Problem, options: &SolveOptions) -> Result<Outcome> {
    let session = Session::new(problem.ctx.clone(), problem.logic.clone());
    let topts = TableauOptions {
        search: options.search,
        node_budget: options.node_budget,
        check_invariants: options.check_invariants,
        stop_on_sat: options.stop_on_sat,
    };
    let mut t = Tableau::new(session, problem.goal.clone(), problem.assumptions.clone(), topts);
    let sat = match options.strategy {
        Strategy::Batch => {
            t.build()?;
            solve_batch(&mut t)?
        }
        Strategy::OnTheFly => {
            let (sat, errors) = solve_onthefly(&mut t, options.verify_incremental)?;
            if let Some(e) = errors.into_iter().next() {
                return Err(Error::Inconsistency(e));
            }
            sat
        }
    };
    if options.check_invariants {
        let mut violations = crate::tableau::invariants::check_step(&t);
        violations.extend(t.status_log().iter().cloned());
        if !violations.is_empty() {
            return Err(Error::Inconsistency(violations.join("; ")));
        }
    }
    debug_assert!(!sat || t.node(t.root()).status != Status::Unsat);
    let verdict = if sat { Verdict::Sat } else { Verdict::Unsat };
    Ok(Outcome { verdict, stats: t.stats().clone(), tableau: t })
}
