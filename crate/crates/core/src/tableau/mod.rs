//! The and-or graph engine.
//!
//! Non-states (or-nodes) are expanded by static rules, states (and-nodes) by
//! the transitional rule. States are cached globally by their
//! `(label, rformulas, dformulas)` triple, non-states within the local graph
//! of their after-transition predecessor.

mod engine;
pub mod invariants;
mod rules;

pub use engine::{Tableau, TableauOptions, DEFAULT_NODE_BUDGET};
pub use rules::{Choice, Conclusion};

use crate::session::Session;
use crate::syntax::{FormulaId, FormulaSet};

/// The rule the engine would apply to a fresh node with the given contents.
pub fn rule_for(
    session: &mut Session,
    kind: NodeKind,
    label: &FormulaSet,
    rformulas: &FormulaSet,
    gamma: &FormulaSet,
) -> Option<Choice> {
    let node = Node {
        kind,
        status: Status::Unexpanded,
        label: label.clone(),
        rformulas: rformulas.clone(),
        dformulas: FormulaSet::new(),
        state_pred: None,
        ce_label: None,
        after_trans_pred: None,
        formula_sc: None,
        expansion: None,
        succs: Vec::new(),
        preds: Vec::new(),
        deleted: false,
    };
    rules::choose_rule(session, &node, gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    State,
    NonState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Unexpanded,
    Expanded,
    Incomplete,
    Unsat,
    Sat,
}

impl Status {
    /// Incomplete, Unsat or Sat.
    pub fn is_determined(self) -> bool {
        matches!(self, Status::Incomplete | Status::Unsat | Status::Sat)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    And,
    Or,
    AutBox,
    AutDmd,
    Box,
    Dmd,
    BoxFinal,
    DmdFinal,
    BoxTest,
    DmdTest,
    Trans,
    FormingState,
    Conv,
}

impl RuleTag {
    /// Whether successors inherit the parent's reduced formulas unchanged
    /// (instead of gaining the principal formula).
    pub fn keeps_rformulas(self) -> bool {
        matches!(self, RuleTag::Dmd | RuleTag::DmdFinal | RuleTag::DmdTest | RuleTag::Conv)
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::And => "And",
            RuleTag::Or => "Or",
            RuleTag::AutBox => "AutBox",
            RuleTag::AutDmd => "AutDmd",
            RuleTag::Box => "Box",
            RuleTag::Dmd => "Dmd",
            RuleTag::BoxFinal => "BoxFinal",
            RuleTag::DmdFinal => "DmdFinal",
            RuleTag::BoxTest => "BoxTest",
            RuleTag::DmdTest => "DmdTest",
            RuleTag::Trans => "Trans",
            RuleTag::FormingState => "FormingState",
            RuleTag::Conv => "Conv",
        }
    }
}

/// How a node was (last) expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub rule: RuleTag,
    pub principal: Option<FormulaId>,
    /// One entry per conclusion, in rule order. The formula is the one the
    /// principal formula turned into in that conclusion, recorded for the
    /// diamond rules and the transitional rule.
    pub conclusions: Vec<(NodeId, Option<FormulaId>)>,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub kind: NodeKind,
    pub status: Status,
    pub label: FormulaSet,
    pub rformulas: FormulaSet,
    pub dformulas: FormulaSet,
    pub state_pred: Option<NodeId>,
    pub ce_label: Option<FormulaId>,
    pub after_trans_pred: Option<NodeId>,
    pub formula_sc: Option<FormulaId>,
    pub expansion: Option<Expansion>,
    pub succs: Vec<NodeId>,
    pub preds: Vec<NodeId>,
    pub deleted: bool,
}

impl Node {
    /// `label ∪ rformulas`.
    pub fn aformulas(&self) -> FormulaSet {
        self.label.union(&self.rformulas)
    }

    pub fn is_state(&self) -> bool {
        self.kind == NodeKind::State
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Search {
    #[default]
    Dfs,
    Bfs,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub nodes_created: usize,
    pub states_created: usize,
    pub cache_hits: usize,
    pub conv_applications: usize,
    pub incomplete_states: usize,
    pub nodes_deleted: usize,
    /// Rounds of the consistency check that set at least one node Unsat.
    pub prune_iterations: usize,
    /// Nodes set Unsat by the consistency check.
    pub pruned_nodes: usize,
    pub steps: usize,
    /// Conv re-expansions of a contents triple already re-expanded with the
    /// same formula.
    pub conv_repeats: usize,
}
