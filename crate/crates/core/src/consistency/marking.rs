use super::trace::in_marking;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::tableau::{NodeId, NodeKind, Status, Tableau};

/// A subgraph of the tableau containing the root, all successors of its
/// states and at least one successor of each expanded non-state.
#[derive(Clone, Debug, Default)]
pub struct Marking {
    nodes: BitSet,
    order: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
}

impl Marking {
    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.contains(v.index())
    }

    /// Nodes in discovery order from the root.
    pub fn nodes(&self) -> &[NodeId] {
        &self.order
    }
}

/// The part of the subgraph induced by nodes that are neither Unsat nor
/// Incomplete which is reachable from the root, checked to be a marking.
pub fn induced_marking(t: &Tableau) -> Result<Marking> {
    let root = t.root();
    if !in_marking(t, root) {
        return Err(Error::Inconsistency("the root is not in the marking".into()));
    }
    let mut m = Marking::default();
    let mut stack = vec![root];
    m.nodes.insert(root.index());
    while let Some(v) = stack.pop() {
        m.order.push(v);
        let n = t.node(v);
        let kept: Vec<NodeId> = n.succs.iter().copied().filter(|&w| in_marking(t, w)).collect();
        let expanded = matches!(n.status, Status::Expanded | Status::Sat) && n.expansion.is_some();
        match n.kind {
            NodeKind::State if kept.len() != n.succs.len() => {
                return Err(Error::Inconsistency(format!("state ({v}) lost a successor")));
            }
            NodeKind::NonState if expanded && kept.is_empty() => {
                return Err(Error::Inconsistency(format!("non-state ({v}) has no successor left")));
            }
            _ => {}
        }
        for w in kept {
            m.edges.push((v, w));
            if m.nodes.insert(w.index()) {
                stack.push(w);
            }
        }
    }
    Ok(m)
}
