use log::debug;

use super::TraceGraph;
use crate::error::Result;
use crate::tableau::{NodeId, Status, Tableau};

/// Keeps the trace graph of a tableau under construction in sync and sets
/// nodes Unsat as soon as one of their eventualities can no longer reach an
/// end node or an unexpanded part of the graph.
#[derive(Default)]
pub struct OnTheFly {
    graph: TraceGraph,
    verify: bool,
    errors: Vec<String>,
}

impl OnTheFly {
    /// With `verify` set, every incremental update is compared against a
    /// full recomputation.
    pub fn new(verify: bool) -> Self {
        OnTheFly { verify, ..Default::default() }
    }

    pub fn graph(&self) -> &TraceGraph {
        &self.graph
    }

    /// Mismatches found by verification.
    pub fn errors(&self) -> &[String] {
        &self.errors
    }

    /// Processes everything the tableau changed since the last call.
    pub fn sync(&mut self, t: &mut Tableau) {
        loop {
            let touched = t.take_touched();
            if touched.is_empty() {
                return;
            }
            let dirty = self.graph.refresh(t, &touched);
            if dirty.is_empty() {
                continue;
            }
            let dead = self.graph.update(t, &dirty, true);
            if self.verify {
                let incremental = self.graph.liveness().to_vec();
                self.graph.recompute(t, true);
                if incremental != self.graph.liveness() {
                    self.errors.push(format!("incremental liveness diverged after touching {} nodes", touched.len()));
                }
            }
            let mut victims: Vec<NodeId> = dead
                .into_iter()
                .map(|i| self.graph.key(i).0)
                .filter(|&v| t.node(v).status == Status::Expanded)
                .collect();
            victims.sort();
            victims.dedup();
            if victims.is_empty() {
                continue;
            }
            debug!("pruning {} nodes on the fly", victims.len());
            t.stats_mut().prune_iterations += 1;
            for v in victims {
                t.mark_unsat(v);
            }
        }
    }
}

/// Builds the tableau with on-the-fly pruning. Returns whether the root
/// survives.
pub fn solve_onthefly(t: &mut Tableau, verify: bool) -> Result<(bool, Vec<String>)> {
    let mut otf = OnTheFly::new(verify);
    otf.sync(t);
    while t.step() {
        otf.sync(t);
    }
    t.check_budget()?;
    Ok((t.node(t.root()).status != Status::Unsat, otf.errors))
}
