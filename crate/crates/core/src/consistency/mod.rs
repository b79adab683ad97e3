//! Global consistency: markings, the trace graph, and the two ways of
//! pruning nodes whose eventualities cannot be fulfilled.

mod batch;
mod marking;
mod onthefly;
mod trace;

pub use batch::solve_batch;
pub use marking::{induced_marking, Marking};
pub use onthefly::{solve_onthefly, OnTheFly};
pub use trace::{in_marking, trace_successors, TraceGraph};

use crate::syntax::FormulaId;
use crate::tableau::{NodeId, Tableau};

/// The productive nodes of the trace graph of the induced marking: those
/// with a path to an end node.
pub fn productive_nodes(t: &Tableau) -> Vec<(NodeId, FormulaId)> {
    let mut g = TraceGraph::build(t);
    g.recompute(t, false);
    (0..g.len() as u32).filter(|&i| g.is_live(i)).map(|i| g.key(i)).collect()
}
