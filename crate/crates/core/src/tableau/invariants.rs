//! Structural checks on a tableau. Each returns a list of violations.

use std::collections::HashSet;

use super::{NodeId, NodeKind, Status, Tableau};
use crate::syntax::{Formula, FormulaSet, Letter, Program};

/// Checks run after every step when enabled: no state has a state
/// successor, caches are unique.
pub fn check_step(t: &Tableau) -> Vec<String> {
    let mut out = state_edges(t);
    out.extend(cache_uniqueness(t));
    out
}

/// All checks, for a finished tableau.
pub fn check_all(t: &mut Tableau) -> Vec<String> {
    let mut out = check_step(t);
    out.extend(labels_in_closure(t));
    out.extend(formula_shapes(t));
    out.extend(no_reachable_incomplete(t));
    out.extend(t.status_log().iter().cloned());
    out
}

fn live(t: &Tableau) -> impl Iterator<Item = (NodeId, &super::Node)> {
    t.nodes().filter(|(_, n)| !n.deleted)
}

pub fn state_edges(t: &Tableau) -> Vec<String> {
    let mut out = Vec::new();
    for (v, n) in live(t) {
        if !n.is_state() {
            continue;
        }
        for &w in &n.succs {
            if t.node(w).is_state() {
                out.push(format!("state ({v}) has state successor ({w})"));
            }
        }
    }
    out
}

pub fn cache_uniqueness(t: &Tableau) -> Vec<String> {
    let mut out = Vec::new();
    let mut states = HashSet::new();
    let mut locals = HashSet::new();
    for (v, n) in live(t) {
        let key = (n.label.clone(), n.rformulas.clone(), n.dformulas.clone());
        let fresh = match n.kind {
            NodeKind::State => states.insert(key),
            NodeKind::NonState => locals.insert((n.after_trans_pred, key)),
        };
        if !fresh {
            out.push(format!("node ({v}) duplicates the contents of another node"));
        }
    }
    out
}

/// Every label and reduced set is within `cls(X ∪ Γ)`.
pub fn labels_in_closure(t: &mut Tableau) -> Vec<String> {
    let input = t.goal().union(t.gamma());
    let cls = t.session_mut().closure(&input);
    let mut out = Vec::new();
    for (v, n) in live(t) {
        if !n.label.is_subset(&cls) || !n.rformulas.is_subset(&cls) || !n.dformulas.is_subset(&cls) {
            out.push(format!("node ({v}) has formulas outside the closure"));
        }
    }
    out
}

/// Reduced sets hold no `⟨A,q⟩φ` or `⟨ψ?⟩φ`; state labels are saturated.
pub fn formula_shapes(t: &Tableau) -> Vec<String> {
    let ctx = &t.session().ctx;
    let mut out = Vec::new();
    let bad_r = |f| match ctx.formula(f) {
        Formula::AutDiamond(..) => true,
        Formula::Diamond(p, _) => matches!(ctx.program(p), Program::Test(_)),
        _ => false,
    };
    let bad_state = |f| match ctx.formula(f) {
        Formula::And(..) | Formula::Or(..) | Formula::Box(..) | Formula::AutBox(..) | Formula::AutDiamond(..) => true,
        Formula::LetterBox(Letter::Test(_), _) => true,
        Formula::Diamond(p, _) => !matches!(ctx.program(p), Program::Simple(_)),
        _ => false,
    };
    for (v, n) in live(t) {
        if n.rformulas.iter().any(bad_r) {
            out.push(format!("node ({v}) has a diamond in its reduced formulas"));
        }
        if n.is_state() && n.label.iter().any(bad_state) {
            out.push(format!("state ({v}) has an unsaturated label"));
        }
        if n.is_state() && n.label.intersects(&n.rformulas) {
            out.push(format!("state ({v}) label meets its reduced formulas"));
        }
    }
    out
}

pub fn no_reachable_incomplete(t: &Tableau) -> Vec<String> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![t.root()];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        let n = t.node(v);
        if n.status == Status::Incomplete {
            out.push(format!("Incomplete node ({v}) reachable from the root"));
        }
        stack.extend(n.succs.iter().copied());
    }
    out
}

/// The union of all labels, used by tests.
pub fn all_label_formulas(t: &Tableau) -> FormulaSet {
    let mut s = FormulaSet::new();
    for (_, n) in live(t) {
        s.union_with(&n.label);
    }
    s
}
