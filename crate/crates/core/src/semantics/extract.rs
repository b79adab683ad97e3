use std::collections::{HashMap, HashSet, VecDeque};

use super::eval::Evaluator;
use super::kripke::{close_model, KripkeModel};
use crate::automata::LogicSpec;
use crate::consistency::{in_marking, TraceGraph};
use crate::error::{Error, Result};
use crate::syntax::{Atom, Context, Formula, FormulaId, FormulaSet, SimpleProgram};
use crate::tableau::{NodeId, RuleTag, Status, Tableau};

/// A Hintikka structure: worlds labelled with formula sets, and edges per
/// atomic program.
#[derive(Clone, Debug, Default)]
pub struct ModelGraph {
    pub worlds: Vec<World>,
    /// `(atom, from, to)`, sorted.
    pub edges: Vec<(Atom, usize, usize)>,
    pub root: usize,
}

#[derive(Clone, Debug)]
pub struct World {
    /// The tableau node the saturation path ended in.
    pub node: NodeId,
    pub content: FormulaSet,
}

impl ModelGraph {
    /// The Kripke model read off the graph: `p` holds where `p` is in the
    /// content, relations are the edges. Not closed under the logic.
    pub fn to_kripke(&self, ctx: &Context) -> KripkeModel {
        let mut m = KripkeModel::new(self.worlds.len());
        for (x, w) in self.worlds.iter().enumerate() {
            for f in w.content.iter() {
                if let Formula::Prop(p) = ctx.formula(f) {
                    m.set_prop(p, x);
                }
            }
        }
        for &(a, x, y) in &self.edges {
            m.add_edge(a, x, y);
        }
        m
    }

    /// No world contains `⊥` or both `p` and `¬p`.
    pub fn is_locally_consistent(&self, ctx: &Context) -> bool {
        self.worlds.iter().all(|w| {
            w.content.iter().all(|f| match ctx.formula(f) {
                Formula::Bottom => false,
                Formula::Not(a) => !w.content.contains(a),
                _ => true,
            })
        })
    }
}

/// Checks that the closed model of `g` validates `gamma` and satisfies
/// `goal` at the root world. Returns the closed model.
pub fn check_model(
    ctx: &Context,
    logic: &LogicSpec,
    g: &ModelGraph,
    goal: &FormulaSet,
    gamma: &FormulaSet,
) -> Result<KripkeModel> {
    if !g.is_locally_consistent(ctx) {
        return Err(Error::Extraction("a world is locally inconsistent".into()));
    }
    let m = close_model(&g.to_kripke(ctx), logic);
    let mut ev = Evaluator::new(ctx, &m);
    for f in gamma.iter() {
        if ev.formula(f).len() != m.size() {
            return Err(Error::Extraction(format!("assumption {} fails somewhere", ctx.show(f))));
        }
    }
    for f in goal.iter() {
        if !ev.formula(f).contains(g.root) {
            return Err(Error::Extraction(format!("goal {} fails at the root world", ctx.show(f))));
        }
    }
    Ok(m)
}

/// Builds a model graph from a tableau whose root is not Unsat.
///
/// When the root is Sat only Sat nodes are used; otherwise the whole
/// induced marking, in which every eventuality is assumed productive.
pub fn extract_model(t: &Tableau) -> Result<ModelGraph> {
    if !in_marking(t, t.root()) {
        return Err(Error::Extraction("the root is not satisfiable".into()));
    }
    Extractor::new(t).run()
}

struct Extractor<'a> {
    t: &'a Tableau,
    sat_only: bool,
    trace: TraceGraph,
    dist: Vec<u32>,
    worlds: HashMap<(NodeId, FormulaSet), usize>,
    graph: ModelGraph,
}

impl<'a> Extractor<'a> {
    fn new(t: &'a Tableau) -> Self {
        let sat_only = t.node(t.root()).status == Status::Sat;
        let trace = TraceGraph::build(t);
        let mut ex =
            Extractor { t, sat_only, trace, dist: Vec::new(), worlds: HashMap::new(), graph: ModelGraph::default() };
        ex.distances();
        ex
    }

    fn allowed(&self, v: NodeId) -> bool {
        if self.sat_only {
            self.t.node(v).status == Status::Sat && !self.t.node(v).deleted
        } else {
            in_marking(self.t, v)
        }
    }

    /// Length of the shortest trace path to an end node, within allowed
    /// nodes.
    fn distances(&mut self) {
        let n = self.trace.len();
        let mut preds = vec![Vec::new(); n];
        for i in 0..n as u32 {
            for &j in self.trace.successors(i) {
                preds[j as usize].push(i);
            }
        }
        self.dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        for i in 0..n as u32 {
            if self.trace.is_end(i) && self.allowed(self.trace.key(i).0) {
                self.dist[i as usize] = 0;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &p in &preds[i as usize] {
                if self.dist[p as usize] == u32::MAX && self.allowed(self.trace.key(p).0) {
                    self.dist[p as usize] = self.dist[i as usize] + 1;
                    queue.push_back(p);
                }
            }
        }
    }

    fn distance(&self, v: NodeId, phi: FormulaId) -> u32 {
        self.trace.lookup(v, phi).map_or(u32::MAX, |i| self.dist[i as usize])
    }

    fn run(mut self) -> Result<ModelGraph> {
        let root = self.t.root();
        let mut pending = VecDeque::new();
        let (r, fresh) = self.world_from(root, None)?;
        self.graph.root = r;
        if fresh {
            pending.push_back(r);
        }
        while let Some(w) = pending.pop_front() {
            let s = self.graph.worlds[w].node;
            let node = self.t.node(s);
            let Some(exp) = &node.expansion else { continue };
            if exp.rule != RuleTag::Trans {
                continue;
            }
            for &(u, ce) in &exp.conclusions {
                let ce = ce.expect("transition without coming edge label");
                if !self.allowed(u) {
                    return Err(Error::Extraction(format!("successor ({u}) of state ({s}) is not usable")));
                }
                let (sigma, inner) = self.t.session().ctx.as_simple_diamond(ce).unwrap();
                let track = self.t.session().ctx.is_eventuality_shaped(inner).then_some(inner);
                let (x, fresh) = self.world_from(u, track)?;
                if fresh {
                    pending.push_back(x);
                }
                self.edge(sigma, w, x);
            }
        }
        self.graph.edges.sort();
        self.graph.edges.dedup();
        Ok(self.graph)
    }

    fn edge(&mut self, s: SimpleProgram, from: usize, to: usize) {
        let e = if s.conversed { (s.atom, to, from) } else { (s.atom, from, to) };
        self.graph.edges.push(e);
    }

    /// Follows a saturation path from `v` and returns its world, and
    /// whether the world is new.
    fn world_from(&mut self, v: NodeId, mut track: Option<FormulaId>) -> Result<(usize, bool)> {
        let mut content = FormulaSet::new();
        let mut u = v;
        let mut visited = HashSet::new();
        loop {
            let node = self.t.node(u);
            content.union_with(&node.label);
            content.union_with(&node.rformulas);
            if node.is_state() {
                break;
            }
            let Some(exp) = &node.expansion else {
                if node.status != Status::Sat {
                    return Err(Error::Extraction(format!("path reached unexpanded node ({u})")));
                }
                break;
            };
            let options: Vec<(NodeId, Option<FormulaId>)> =
                exp.conclusions.iter().copied().filter(|&(w, _)| self.allowed(w)).collect();
            if options.is_empty() {
                return Err(Error::Extraction(format!("node ({u}) has no usable successor")));
            }
            let principal = exp.principal;
            if track.is_none() {
                // Follow the principal eventuality until it is fulfilled; its
                // distance drops at every step, so the path cannot cycle.
                track = principal.filter(|&f| self.t.session().ctx.is_eventuality_shaped(f));
            }
            if !visited.insert((u, track)) {
                return Err(Error::Extraction(format!("saturation path from ({v}) cycles at ({u})")));
            }
            // Where the tracked eventuality goes in each option.
            let tracked_in = |f: Option<FormulaId>| -> Option<FormulaId> {
                let phi = track?;
                if principal == Some(phi) {
                    f
                } else {
                    Some(phi)
                }
            };
            let best = options
                .iter()
                .copied()
                .min_by_key(|&(w, f)| (tracked_in(f).map_or(0, |phi| self.distance(w, phi)), w))
                .unwrap();
            track = tracked_in(best.1).filter(|&phi| !self.t.session().ctx.is_base(phi));
            u = best.0;
        }
        let key = (u, content.clone());
        if let Some(&w) = self.worlds.get(&key) {
            return Ok((w, false));
        }
        let w = self.graph.worlds.len();
        self.graph.worlds.push(World { node: u, content });
        self.worlds.insert(key, w);
        Ok((w, true))
    }
}
