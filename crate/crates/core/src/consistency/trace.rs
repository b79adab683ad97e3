use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::syntax::{Formula, FormulaId};
use crate::tableau::{NodeId, RuleTag, Status, Tableau};

/// Whether a tableau node belongs to the induced marking: not deleted, not
/// Unsat, not Incomplete.
pub fn in_marking(t: &Tableau, v: NodeId) -> bool {
    let n = t.node(v);
    !n.deleted && !matches!(n.status, Status::Unsat | Status::Incomplete)
}

/// Successors of `(v, φ)` in the trace graph, ignoring whether the target
/// nodes belong to the marking. `φ` must be in the label of `v`.
fn raw_successors(t: &Tableau, v: NodeId, phi: FormulaId) -> Vec<(NodeId, FormulaId)> {
    let n = t.node(v);
    let Some(exp) = &n.expansion else {
        return Vec::new();
    };
    let ctx = &t.session().ctx;
    let mut out = Vec::new();
    match exp.rule {
        RuleTag::Trans => {
            if let Some((_, inner)) = ctx.as_simple_diamond(phi) {
                for &(w, ce) in &exp.conclusions {
                    if ce == Some(phi) {
                        out.push((w, inner));
                    }
                }
            }
        }
        _ if exp.principal == Some(phi) => {
            for &(w, f) in &exp.conclusions {
                if let Some(f) = f {
                    out.push((w, f));
                }
            }
        }
        _ => {
            for &(w, _) in &exp.conclusions {
                if t.node(w).label.contains(phi) {
                    out.push((w, phi));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All `(w, ψ)` with an edge from `(v, φ)` within the induced marking.
pub fn trace_successors(t: &Tableau, v: NodeId, phi: FormulaId) -> Vec<(NodeId, FormulaId)> {
    if !in_marking(t, v) {
        return Vec::new();
    }
    raw_successors(t, v, phi).into_iter().filter(|&(w, _)| in_marking(t, w)).collect()
}

/// The graph of traces, over eventuality-shaped formulas and end nodes.
///
/// Edges are kept regardless of node statuses; nodes of tableau nodes
/// outside the marking count as absent when liveness is computed.
#[derive(Default, Debug)]
pub struct TraceGraph {
    index: HashMap<(NodeId, FormulaId), u32>,
    keys: Vec<(NodeId, FormulaId)>,
    end: Vec<bool>,
    succs: Vec<Vec<u32>>,
    preds: Vec<Vec<u32>>,
    live: Vec<bool>,
    by_node: HashMap<NodeId, Vec<u32>>,
}

impl TraceGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// The trace graph of the whole current tableau.
    pub fn build(t: &Tableau) -> Self {
        let mut g = TraceGraph::new();
        let ids: Vec<NodeId> = t.nodes().map(|(v, _)| v).collect();
        g.refresh(t, &ids);
        g
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: u32) -> (NodeId, FormulaId) {
        self.keys[i as usize]
    }

    pub fn is_end(&self, i: u32) -> bool {
        self.end[i as usize]
    }

    pub fn successors(&self, i: u32) -> &[u32] {
        &self.succs[i as usize]
    }

    pub fn lookup(&self, v: NodeId, phi: FormulaId) -> Option<u32> {
        self.index.get(&(v, phi)).copied()
    }

    pub fn is_live(&self, i: u32) -> bool {
        self.live[i as usize]
    }

    fn intern(&mut self, t: &Tableau, v: NodeId, phi: FormulaId) -> u32 {
        if let Some(&i) = self.index.get(&(v, phi)) {
            return i;
        }
        let i = self.keys.len() as u32;
        self.index.insert((v, phi), i);
        self.keys.push((v, phi));
        let ctx = &t.session().ctx;
        self.end.push(ctx.is_base(phi));
        self.succs.push(Vec::new());
        self.preds.push(Vec::new());
        self.live.push(false);
        self.by_node.entry(v).or_default().push(i);
        i
    }

    /// Creates the nodes of `vs` and recomputes their outgoing edges.
    /// Returns the trace nodes whose edges or anchoring may have changed.
    pub fn refresh(&mut self, t: &Tableau, vs: &[NodeId]) -> Vec<u32> {
        let mut dirty = Vec::new();
        let before = self.keys.len() as u32;
        for &v in vs {
            let ctx = &t.session().ctx;
            let fresh: Vec<FormulaId> = if self.by_node.contains_key(&v) {
                Vec::new()
            } else {
                t.node(v).label.iter().filter(|&f| ctx.is_eventuality_shaped(f)).collect()
            };
            for f in fresh {
                self.intern(t, v, f);
            }
            let mine = self.by_node.entry(v).or_default().clone();
            for i in mine {
                dirty.push(i);
                if self.end[i as usize] {
                    continue;
                }
                for old in std::mem::take(&mut self.succs[i as usize]) {
                    self.preds[old as usize].retain(|&p| p != i);
                }
                let (v, phi) = self.keys[i as usize];
                let targets = if t.node(v).deleted { Vec::new() } else { raw_successors(t, v, phi) };
                let mut succ = Vec::with_capacity(targets.len());
                for (w, psi) in targets {
                    let j = self.intern(t, w, psi);
                    if !succ.contains(&j) {
                        succ.push(j);
                        self.preds[j as usize].push(i);
                    }
                }
                self.succs[i as usize] = succ;
            }
        }
        dirty.extend(before..self.keys.len() as u32);
        dirty
    }

    fn present(&self, t: &Tableau, i: u32) -> bool {
        in_marking(t, self.keys[i as usize].0)
    }

    /// Whether a node counts as a source of liveness. With `open` set,
    /// nodes on unexpanded or Sat tableau nodes count too.
    fn anchor(&self, t: &Tableau, i: u32, open: bool) -> bool {
        if !self.present(t, i) {
            return false;
        }
        if self.end[i as usize] {
            return true;
        }
        open && {
            let n = t.node(self.keys[i as usize].0);
            matches!(n.status, Status::Unexpanded | Status::Sat)
        }
    }

    /// Recomputes liveness of every node from scratch: a node is live if it
    /// reaches an anchor through present nodes.
    pub fn recompute(&mut self, t: &Tableau, open: bool) {
        let all: Vec<u32> = (0..self.keys.len() as u32).collect();
        self.live.iter_mut().for_each(|l| *l = false);
        self.spread(t, &all, open, |_| true);
    }

    /// Recomputes liveness in the backward cone of `dirty` and returns the
    /// present nodes of the cone left dead.
    pub fn update(&mut self, t: &Tableau, dirty: &[u32], open: bool) -> Vec<u32> {
        let mut in_cone = vec![false; self.keys.len()];
        let mut cone = Vec::new();
        let mut stack: Vec<u32> = dirty.to_vec();
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut in_cone[i as usize], true) {
                continue;
            }
            cone.push(i);
            stack.extend(self.preds[i as usize].iter().copied());
        }
        for &i in &cone {
            self.live[i as usize] = false;
        }
        let seeds: Vec<u32> = cone
            .iter()
            .copied()
            .filter(|&i| {
                self.present(t, i)
                    && (self.anchor(t, i, open)
                        || self.succs[i as usize].iter().any(|&j| !in_cone[j as usize] && self.live[j as usize]))
            })
            .collect();
        self.spread(t, &seeds, open, |i| in_cone[i as usize]);
        cone.into_iter().filter(|&i| self.present(t, i) && !self.live[i as usize]).collect()
    }

    pub(crate) fn liveness(&self) -> &[bool] {
        &self.live
    }

    /// Marks `seeds` that qualify, and everything present that reaches them
    /// backwards within `scope`, as live.
    fn spread(&mut self, t: &Tableau, seeds: &[u32], open: bool, scope: impl Fn(u32) -> bool) {
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &i in seeds {
            if self.present(t, i)
                && (self.anchor(t, i, open) || self.succs[i as usize].iter().any(|&j| self.live[j as usize]))
                && !self.live[i as usize]
            {
                self.live[i as usize] = true;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for k in 0..self.preds[i as usize].len() {
                let p = self.preds[i as usize][k];
                if !self.live[p as usize] && scope(p) && self.present(t, p) {
                    self.live[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
    }

    /// Present nodes that are not live.
    pub fn dead(&self, t: &Tableau) -> Vec<u32> {
        (0..self.keys.len() as u32).filter(|&i| self.present(t, i) && !self.live[i as usize]).collect()
    }

    /// Whether the formula of a trace node is `⟨A,q⟩ξ`.
    pub fn is_aut_diamond(&self, t: &Tableau, i: u32) -> bool {
        matches!(t.session().ctx.formula(self.keys[i as usize].1), Formula::AutDiamond(..))
    }

    /// A Graphviz rendering. End nodes are drawn with a double border.
    pub fn to_dot(&self, t: &Tableau) -> String {
        let ctx = &t.session().ctx;
        let mut out = String::from("digraph traces {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, &(v, phi)) in self.keys.iter().enumerate() {
            let text = format!("({}, {})", v, ctx.show(phi)).replace('\\', "\\\\").replace('"', "\\\"");
            let periph = if self.end[i] { ", peripheries=2" } else { "" };
            let style = if self.present(t, i as u32) { "" } else { ", style=dashed" };
            let _ = writeln!(out, "  t{i} [label=\"{text}\"{periph}{style}];");
        }
        for (i, succ) in self.succs.iter().enumerate() {
            for j in succ {
                let _ = writeln!(out, "  t{i} -> t{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}
