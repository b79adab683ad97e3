use log::debug;

use super::marking::induced_marking;
use super::TraceGraph;
use crate::error::{Error, Result};
use crate::tableau::{NodeId, Status, Tableau};

/// Prunes a fully built tableau until every `⟨A,q⟩φ` left in the induced
/// marking is productive. Returns whether the root survives.
pub fn solve_batch(t: &mut Tableau) -> Result<bool> {
    let convs = t.stats().conv_applications;
    loop {
        if t.node(t.root()).status == Status::Unsat {
            return Ok(false);
        }
        let mut g = TraceGraph::build(t);
        g.recompute(t, false);
        let mut victims: Vec<NodeId> =
            g.dead(t).into_iter().filter(|&i| g.is_aut_diamond(t, i)).map(|i| g.key(i).0).collect();
        victims.sort();
        victims.dedup();
        if victims.is_empty() {
            induced_marking(t)?;
            return Ok(true);
        }
        debug!("pruning {} nodes with unproductive eventualities", victims.len());
        t.stats_mut().prune_iterations += 1;
        for v in victims {
            if t.node(v).status == Status::Sat {
                return Err(Error::Inconsistency(format!("Sat node ({v}) has an unproductive eventuality")));
            }
            t.mark_unsat(v);
        }
        if t.stats().conv_applications != convs {
            return Err(Error::Inconsistency("Conv fired during pruning".into()));
        }
    }
}
