use std::collections::{HashMap, HashSet, VecDeque};

use log::{debug, trace};

use super::rules::{choose_rule, Choice};
use super::{Expansion, Node, NodeId, NodeKind, RuleTag, Search, Stats, Status};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::session::Session;
use crate::syntax::{negate, Formula, FormulaId, FormulaSet, Letter};

/// Default node budget, overridable through `CPDLREG_NODE_BUDGET`.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 22;

#[derive(Clone, Debug)]
pub struct TableauOptions {
    pub search: Search,
    pub node_budget: usize,
    /// Run the structural checks of [`super::invariants`] after every step.
    pub check_invariants: bool,
    /// Stop as soon as the root is Sat instead of building the whole graph.
    pub stop_on_sat: bool,
}

impl Default for TableauOptions {
    fn default() -> Self {
        let node_budget =
            std::env::var("CPDLREG_NODE_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_NODE_BUDGET);
        TableauOptions { search: Search::Dfs, node_budget, check_invariants: false, stop_on_sat: false }
    }
}

type Contents = (FormulaSet, FormulaSet, FormulaSet);

/// A tableau under construction.
pub struct Tableau {
    session: Session,
    nodes: Vec<Node>,
    root: NodeId,
    goal: FormulaSet,
    gamma: FormulaSet,
    state_cache: HashMap<Contents, NodeId>,
    local_cache: HashMap<(NodeId, Contents), NodeId>,
    frontier: VecDeque<NodeId>,
    created_in_step: Vec<NodeId>,
    pending_incomplete: Vec<NodeId>,
    touched: Vec<NodeId>,
    touched_set: BitSet,
    options: TableauOptions,
    stats: Stats,
    status_log: Vec<String>,
    conv_monitor: HashSet<(Contents, FormulaId)>,
    budget_exceeded: bool,
}

impl Tableau {
    /// Creates the root `(X ∪ Γ, ∅, ∅)`.
    pub fn new(session: Session, goal: FormulaSet, gamma: FormulaSet, options: TableauOptions) -> Self {
        let mut t = Tableau {
            session,
            nodes: Vec::new(),
            root: NodeId(0),
            goal: goal.clone(),
            gamma: gamma.clone(),
            state_cache: HashMap::new(),
            local_cache: HashMap::new(),
            frontier: VecDeque::new(),
            created_in_step: Vec::new(),
            pending_incomplete: Vec::new(),
            touched: Vec::new(),
            touched_set: BitSet::new(),
            options,
            stats: Stats::default(),
            status_log: Vec::new(),
            conv_monitor: HashSet::new(),
            budget_exceeded: false,
        };
        let label = goal.union(&gamma);
        t.root = t.new_succ(None, NodeKind::NonState, None, label, FormulaSet::new(), FormulaSet::new());
        t.created_in_step.clear();
        t.frontier.push_back(t.root);
        t
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    /// All nodes ever created, deleted ones included (check `deleted`).
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i as u32), n))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of nodes that were not deleted.
    pub fn live_count(&self) -> usize {
        self.nodes.iter().filter(|n| !n.deleted).count()
    }

    pub fn goal(&self) -> &FormulaSet {
        &self.goal
    }

    pub fn gamma(&self) -> &FormulaSet {
        &self.gamma
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn session_mut(&mut self) -> &mut Session {
        &mut self.session
    }

    pub fn into_session(self) -> Session {
        self.session
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn stats_mut(&mut self) -> &mut Stats {
        &mut self.stats
    }

    pub fn options(&self) -> &TableauOptions {
        &self.options
    }

    /// Status changes that broke monotonicity. Empty in a correct run.
    pub fn status_log(&self) -> &[String] {
        &self.status_log
    }

    pub fn budget_exceeded(&self) -> bool {
        self.budget_exceeded
    }

    /// Nodes created, deleted, or changed in status or successors since the
    /// last call.
    pub fn take_touched(&mut self) -> Vec<NodeId> {
        self.touched_set = BitSet::new();
        std::mem::take(&mut self.touched)
    }

    pub fn is_finished(&self) -> bool {
        let root = self.node(self.root).status;
        self.budget_exceeded
            || root == Status::Unsat
            || (self.options.stop_on_sat && root == Status::Sat)
            || !self.frontier.iter().any(|&v| self.is_pending(v))
    }

    fn is_pending(&self, v: NodeId) -> bool {
        let n = self.node(v);
        !n.deleted && n.status == Status::Unexpanded
    }

    /// Expands the whole graph.
    pub fn build(&mut self) -> Result<()> {
        while self.step() {}
        self.check_budget()
    }

    pub fn check_budget(&self) -> Result<()> {
        if self.budget_exceeded {
            Err(Error::ResourceLimit(self.options.node_budget))
        } else {
            Ok(())
        }
    }

    /// Expands one node chosen by the search strategy. Returns false when
    /// there is nothing left to do.
    pub fn step(&mut self) -> bool {
        let root = self.node(self.root).status;
        if self.budget_exceeded || root == Status::Unsat || (self.options.stop_on_sat && root == Status::Sat) {
            return false;
        }
        let v = loop {
            let next = match self.options.search {
                Search::Dfs => self.frontier.pop_back(),
                Search::Bfs => self.frontier.pop_front(),
            };
            match next {
                None => return false,
                Some(v) if self.is_pending(v) => break v,
                Some(_) => {}
            }
        };
        self.stats.steps += 1;
        self.created_in_step.clear();
        self.expand(v);

        for w in std::mem::take(&mut self.pending_incomplete) {
            self.delete_local_graph(w);
        }
        let created = std::mem::take(&mut self.created_in_step);
        match self.options.search {
            Search::Dfs => {
                for &w in created.iter().rev() {
                    if self.is_pending(w) {
                        self.frontier.push_back(w);
                    }
                }
            }
            Search::Bfs => {
                for &w in &created {
                    if self.is_pending(w) {
                        self.frontier.push_back(w);
                    }
                }
            }
        }
        // An early return in the converse check can leave `v` unexpanded
        // with some successors; start it over.
        if self.is_pending(v) && !self.node(v).succs.is_empty() {
            for w in std::mem::take(&mut self.nodes[v.index()].succs) {
                self.remove_pred(w, v);
            }
            self.nodes[v.index()].expansion = None;
            self.touch(v);
            self.frontier.push_back(v);
        }
        if self.options.check_invariants {
            for msg in super::invariants::check_step(self) {
                self.status_log.push(msg);
            }
        }
        true
    }

    fn expand(&mut self, v: NodeId) {
        if self.t_unsat(v) {
            self.set_status(v, Status::Unsat);
            self.propagate(v);
            return;
        }
        let choice = {
            let node = self.nodes[v.index()].clone();
            choose_rule(&mut self.session, &node, &self.gamma)
        };
        match choice {
            None => {
                self.set_status(v, Status::Sat);
                self.propagate(v);
            }
            Some(choice) => self.apply(v, choice),
        }
    }

    /// Whether the node's label is clashing.
    pub fn t_unsat(&mut self, v: NodeId) -> bool {
        let label = self.nodes[v.index()].label.clone();
        for f in label.iter() {
            if matches!(self.session.ctx.formula(f), Formula::Bottom) {
                return true;
            }
            let n = negate(&mut self.session.ctx, f);
            if label.contains(n) {
                return true;
            }
        }
        false
    }

    /// Whether no rule other than Conv applies to the node.
    pub fn t_sat(&mut self, v: NodeId) -> bool {
        let node = &self.nodes[v.index()];
        choose_rule(&mut self.session, node, &self.gamma).is_none()
    }

    fn apply(&mut self, v: NodeId, choice: Choice) {
        trace!("apply {} to ({})", choice.rule.name(), v);
        let (r, d) = {
            let n = self.node(v);
            (n.rformulas.clone(), n.dformulas.clone())
        };
        let mut conclusions = Vec::with_capacity(choice.conclusions.len());
        match choice.rule {
            RuleTag::Trans => {
                for c in choice.conclusions {
                    let w = self.new_succ(
                        Some(v),
                        NodeKind::NonState,
                        c.trace,
                        c.label,
                        FormulaSet::new(),
                        FormulaSet::new(),
                    );
                    conclusions.push((w, c.trace));
                }
            }
            RuleTag::FormingState => {
                let label = self.node(v).label.clone();
                let w = self.con_to_succ(v, NodeKind::State, label, r, d);
                conclusions.push((w, None));
            }
            rule => {
                let mut z = r;
                if !rule.keeps_rformulas() {
                    z.insert(choice.principal.expect("static rule without principal"));
                }
                for c in choice.conclusions {
                    let mut label = c.label;
                    label.difference_with(&z);
                    let w = self.con_to_succ(v, NodeKind::NonState, label, z.clone(), d.clone());
                    conclusions.push((w, c.trace));
                }
            }
        }
        self.nodes[v.index()].expansion =
            Some(Expansion { rule: choice.rule, principal: choice.principal, conclusions: conclusions.clone() });
        let succs: Vec<NodeId> = conclusions.iter().map(|&(w, _)| w).collect();
        self.finish_apply(v, &succs);
    }

    /// Re-expands the node before an Incomplete state.
    fn apply_conv(&mut self, v: NodeId) {
        let n = self.node(v);
        assert_eq!(n.succs.len(), 1, "Conv needs a single successor");
        let w = n.succs[0];
        let phi = self.node(w).formula_sc.expect("Incomplete state without formulaSC");
        let (l, r, d) = (n.label.clone(), n.rformulas.clone(), n.dformulas.clone());
        debug!("Conv at ({}) with formula {}", v, self.session.ctx.show(phi));
        self.stats.conv_applications += 1;
        if !self.conv_monitor.insert(((l.clone(), r.clone(), d.clone()), phi)) {
            self.stats.conv_repeats += 1;
        }
        self.nodes[v.index()].succs.clear();
        self.remove_pred(w, v);
        self.touch(v);
        let w1 = self.con_to_succ(v, NodeKind::NonState, l.with(phi), r.clone(), d.clone());
        let w2 = self.con_to_succ(v, NodeKind::NonState, l, r, d.with(phi));
        self.nodes[v.index()].expansion =
            Some(Expansion { rule: RuleTag::Conv, principal: None, conclusions: vec![(w1, None), (w2, None)] });
        self.finish_apply(v, &[w1, w2]);
    }

    fn finish_apply(&mut self, v: NodeId, succs: &[NodeId]) {
        let mut seen = Vec::with_capacity(succs.len());
        for &w in succs {
            if seen.contains(&w) {
                continue;
            }
            seen.push(w);
            if self.node(w).status != Status::Unexpanded {
                continue;
            }
            if self.t_unsat(w) {
                self.set_status(w, Status::Unsat);
                self.propagate(w);
                continue;
            }
            match self.converse_check(w) {
                ConverseCheck::Pass => {}
                ConverseCheck::Kill => {
                    self.set_status(w, Status::Unsat);
                    self.propagate(w);
                    continue;
                }
                ConverseCheck::Abort => return,
            }
            if self.t_sat(w) {
                self.set_status(w, Status::Sat);
                self.propagate(w);
            }
        }
        if self.node(v).status == Status::Unexpanded {
            self.set_status(v, Status::Expanded);
        }
        if self.node(v).status == Status::Expanded {
            self.update_status(v);
            if self.node(v).status.is_determined() {
                self.propagate(v);
            }
        }
    }

    /// Looks for `□_σ̄φ` in a non-state whose state predecessor lacks `φ`,
    /// where `⟨σ⟩ψ` is the coming edge label.
    fn converse_check(&mut self, w: NodeId) -> ConverseCheck {
        let node = self.node(w);
        if node.is_state() {
            return ConverseCheck::Pass;
        }
        let (Some(u0), Some(u1)) = (node.state_pred, node.after_trans_pred) else {
            return ConverseCheck::Pass;
        };
        let Some(ce) = self.node(u1).ce_label else {
            return ConverseCheck::Pass;
        };
        let (sigma, _) = self.session.ctx.as_simple_diamond(ce).expect("coming edge label is not ⟨σ⟩ψ");
        let back = sigma.converse();
        let pred = self.node(u0);
        let mut missing = None;
        for f in node.label.iter() {
            let Formula::LetterBox(Letter::Simple(s), phi) = self.session.ctx.formula(f) else {
                continue;
            };
            if s != back || pred.label.contains(phi) || pred.rformulas.contains(phi) {
                continue;
            }
            if pred.dformulas.contains(phi) {
                return ConverseCheck::Kill;
            }
            missing.get_or_insert(phi);
        }
        let Some(phi) = missing else {
            return ConverseCheck::Pass;
        };
        match pred.status {
            Status::Sat | Status::Unsat => ConverseCheck::Kill,
            Status::Incomplete => ConverseCheck::Abort,
            _ => {
                debug!("state ({}) incomplete, missing {}", u0, self.session.ctx.show(phi));
                self.set_status(u0, Status::Incomplete);
                self.nodes[u0.index()].formula_sc = Some(phi);
                self.stats.incomplete_states += 1;
                self.pending_incomplete.push(u0);
                self.propagate(u0);
                ConverseCheck::Abort
            }
        }
    }

    fn update_status(&mut self, v: NodeId) {
        let node = self.node(v);
        debug_assert_eq!(node.status, Status::Expanded);
        let statuses: Vec<Status> = node.succs.iter().map(|&w| self.node(w).status).collect();
        match node.kind {
            NodeKind::NonState => {
                if statuses.contains(&Status::Sat) {
                    self.set_status(v, Status::Sat);
                } else if statuses.iter().all(|&s| s == Status::Unsat) {
                    self.set_status(v, Status::Unsat);
                } else if statuses.contains(&Status::Incomplete) {
                    self.apply_conv(v);
                }
            }
            NodeKind::State => {
                if statuses.contains(&Status::Unsat) {
                    self.set_status(v, Status::Unsat);
                } else if statuses.iter().all(|&s| s == Status::Sat) {
                    self.set_status(v, Status::Sat);
                }
            }
        }
    }

    fn propagate(&mut self, v: NodeId) {
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let preds = self.node(u).preds.clone();
            for p in preds {
                if self.node(p).status != Status::Expanded || self.node(p).deleted {
                    continue;
                }
                self.update_status(p);
                if self.node(p).status.is_determined() {
                    stack.push(p);
                }
            }
        }
    }

    /// Sets a node Unsat from outside (the global consistency check) and
    /// propagates.
    pub fn mark_unsat(&mut self, v: NodeId) {
        if self.node(v).status == Status::Unsat {
            return;
        }
        self.set_status(v, Status::Unsat);
        self.stats.pruned_nodes += 1;
        self.propagate(v);
        for w in std::mem::take(&mut self.pending_incomplete) {
            self.delete_local_graph(w);
        }
    }

    fn set_status(&mut self, v: NodeId, s: Status) {
        let old = self.node(v).status;
        if old == s {
            return;
        }
        let ok = match old {
            Status::Unexpanded => true,
            Status::Expanded => s != Status::Unexpanded,
            Status::Incomplete | Status::Unsat | Status::Sat => false,
        };
        if !ok {
            self.status_log.push(format!("node ({v}) changed from {old:?} to {s:?}"));
        }
        trace!("({}) {:?} -> {:?}", v, old, s);
        self.nodes[v.index()].status = s;
        self.touch(v);
    }

    fn touch(&mut self, v: NodeId) {
        if self.touched_set.insert(v.index()) {
            self.touched.push(v);
        }
    }

    fn new_succ(
        &mut self,
        v: Option<NodeId>,
        kind: NodeKind,
        ce_label: Option<FormulaId>,
        label: FormulaSet,
        rformulas: FormulaSet,
        dformulas: FormulaSet,
    ) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        let (state_pred, after_trans_pred) = match (kind, v) {
            (NodeKind::State, _) => (None, None),
            (NodeKind::NonState, None) => (None, Some(id)),
            (NodeKind::NonState, Some(p)) if self.node(p).is_state() => (Some(p), Some(id)),
            (NodeKind::NonState, Some(p)) => (self.node(p).state_pred, self.node(p).after_trans_pred),
        };
        let key = (label.clone(), rformulas.clone(), dformulas.clone());
        match kind {
            NodeKind::State => {
                self.state_cache.insert(key, id);
                self.stats.states_created += 1;
            }
            NodeKind::NonState => {
                self.local_cache.insert((after_trans_pred.unwrap(), key), id);
            }
        }
        self.nodes.push(Node {
            kind,
            status: Status::Unexpanded,
            label,
            rformulas,
            dformulas,
            state_pred,
            ce_label,
            after_trans_pred,
            formula_sc: None,
            expansion: None,
            succs: Vec::new(),
            preds: Vec::new(),
            deleted: false,
        });
        self.stats.nodes_created += 1;
        if self.nodes.len() > self.options.node_budget {
            self.budget_exceeded = true;
        }
        self.created_in_step.push(id);
        self.touch(id);
        if let Some(p) = v {
            self.add_edge(p, id);
        }
        id
    }

    fn con_to_succ(
        &mut self,
        v: NodeId,
        kind: NodeKind,
        label: FormulaSet,
        rformulas: FormulaSet,
        dformulas: FormulaSet,
    ) -> NodeId {
        let key = (label, rformulas, dformulas);
        let hit = match kind {
            NodeKind::State => self.state_cache.get(&key).copied(),
            NodeKind::NonState => {
                let root = self.node(v).after_trans_pred.expect("non-state without after-transition predecessor");
                self.local_cache.get(&(root, key.clone())).copied()
            }
        };
        match hit {
            Some(w) => {
                self.stats.cache_hits += 1;
                self.add_edge(v, w);
                w
            }
            None => {
                let (l, r, d) = key;
                self.new_succ(Some(v), kind, None, l, r, d)
            }
        }
    }

    fn add_edge(&mut self, v: NodeId, w: NodeId) {
        if !self.nodes[v.index()].succs.contains(&w) {
            self.nodes[v.index()].succs.push(w);
            self.nodes[w.index()].preds.push(v);
            self.touch(v);
            self.touch(w);
        }
    }

    fn remove_pred(&mut self, w: NodeId, v: NodeId) {
        self.nodes[w.index()].preds.retain(|&p| p != v);
        self.touch(w);
    }

    /// Deletes the non-states reachable from the Incomplete state `w`
    /// without passing through a state, keeping `w` itself.
    fn delete_local_graph(&mut self, w: NodeId) {
        let mut set = BitSet::new();
        let mut order = Vec::new();
        let mut stack: Vec<NodeId> = self.node(w).succs.clone();
        while let Some(x) = stack.pop() {
            if self.node(x).is_state() || self.node(x).deleted || !set.insert(x.index()) {
                continue;
            }
            order.push(x);
            stack.extend(self.node(x).succs.iter().copied());
        }
        // Keep whatever is still referenced from outside, with its
        // descendants.
        let mut keep = BitSet::new();
        let mut stack: Vec<NodeId> = order
            .iter()
            .copied()
            .filter(|&x| self.node(x).preds.iter().any(|&p| p != w && !set.contains(p.index())))
            .collect();
        while let Some(x) = stack.pop() {
            if !set.contains(x.index()) || !keep.insert(x.index()) {
                continue;
            }
            stack.extend(self.node(x).succs.iter().copied());
        }
        if !keep.is_empty() {
            debug!("kept {} shared nodes below ({})", keep.len(), w);
        }
        for &x in &order {
            if keep.contains(x.index()) {
                continue;
            }
            let node = &mut self.nodes[x.index()];
            node.deleted = true;
            let succs = std::mem::take(&mut node.succs);
            let preds = std::mem::take(&mut node.preds);
            let key = (node.label.clone(), node.rformulas.clone(), node.dformulas.clone());
            let root = node.after_trans_pred.unwrap();
            if self.local_cache.get(&(root, key.clone())) == Some(&x) {
                self.local_cache.remove(&(root, key));
            }
            for y in succs {
                self.remove_pred(y, x);
            }
            for p in preds {
                self.nodes[p.index()].succs.retain(|&y| y != x);
                self.touch(p);
            }
            self.stats.nodes_deleted += 1;
            self.touch(x);
        }
    }

    /// The state cache entry for a contents triple, if any.
    pub fn find_state(&self, label: &FormulaSet, rformulas: &FormulaSet, dformulas: &FormulaSet) -> Option<NodeId> {
        self.state_cache.get(&(label.clone(), rformulas.clone(), dformulas.clone())).copied()
    }

    /// The local cache entry for a contents triple under `root`, if any.
    pub fn find_local(
        &self,
        root: NodeId,
        label: &FormulaSet,
        rformulas: &FormulaSet,
        dformulas: &FormulaSet,
    ) -> Option<NodeId> {
        self.local_cache.get(&(root, (label.clone(), rformulas.clone(), dformulas.clone()))).copied()
    }
}

enum ConverseCheck {
    Pass,
    Kill,
    Abort,
}
