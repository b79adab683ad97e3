use super::{Node, NodeKind, RuleTag};
use crate::session::Session;
use crate::syntax::{negate, AutRef, Formula, FormulaId, FormulaSet, Letter, Program};

/// A rule instance selected for a node, with its conclusions computed.
#[derive(Clone, Debug)]
pub struct Choice {
    pub rule: RuleTag,
    pub principal: Option<FormulaId>,
    pub conclusions: Vec<Conclusion>,
}

#[derive(Clone, Debug)]
pub struct Conclusion {
    /// The conclusion as written in the rule, before reduced formulas are
    /// taken out.
    pub label: FormulaSet,
    /// What the principal formula became (diamond rules), or the coming
    /// edge label (transitional rule).
    pub trace: Option<FormulaId>,
}

impl Choice {
    pub fn priority(&self) -> u8 {
        self.rule.priority()
    }
}

impl RuleTag {
    /// Unary static rules 5, other static rules 4, FormingState 3, Trans 2,
    /// Conv 1. Arity is that of the rule schema, not of an instance.
    pub fn priority(self) -> u8 {
        match self {
            RuleTag::And | RuleTag::AutBox | RuleTag::Box | RuleTag::BoxFinal | RuleTag::DmdTest => 5,
            RuleTag::Or | RuleTag::AutDmd | RuleTag::Dmd | RuleTag::DmdFinal | RuleTag::BoxTest => 4,
            RuleTag::FormingState => 3,
            RuleTag::Trans => 2,
            RuleTag::Conv => 1,
        }
    }
}

/// The rule to apply to an unexpanded node, or `None` if no rule other
/// than Conv applies (the node is then a Sat leaf).
pub fn choose_rule(session: &mut Session, node: &Node, gamma: &FormulaSet) -> Option<Choice> {
    match node.kind {
        NodeKind::State => trans(session, node, gamma),
        NodeKind::NonState => {
            let mut first_branching = None;
            for f in node.label.iter() {
                let Some(rule) = static_candidate(session, f, &node.rformulas) else {
                    continue;
                };
                if rule.priority() == 5 {
                    return Some(static_choice(session, node, rule, f));
                }
                if first_branching.is_none() {
                    first_branching = Some((rule, f));
                }
            }
            if let Some((rule, f)) = first_branching {
                return Some(static_choice(session, node, rule, f));
            }
            let ctx = &session.ctx;
            let transitional = node.label.iter().any(|f| {
                ctx.as_simple_diamond(f).is_some() || matches!(ctx.formula(f), Formula::LetterBox(Letter::Simple(_), _))
            });
            transitional.then(|| Choice {
                rule: RuleTag::FormingState,
                principal: None,
                conclusions: vec![Conclusion { label: node.label.clone(), trace: None }],
            })
        }
    }
}

fn blocked_by_r(rule: RuleTag) -> bool {
    !rule.keeps_rformulas()
}

/// The static rule with principal `f`, if any.
fn static_candidate(session: &mut Session, f: FormulaId, r: &FormulaSet) -> Option<RuleTag> {
    let rule = match session.ctx.formula(f) {
        Formula::And(..) => RuleTag::And,
        Formula::Or(..) => RuleTag::Or,
        Formula::Box(..) => RuleTag::AutBox,
        Formula::Diamond(p, _) => match session.ctx.program(p) {
            Program::Simple(_) => return None,
            Program::Test(_) => RuleTag::DmdTest,
            _ => RuleTag::AutDmd,
        },
        Formula::AutBox(a, q, _) => {
            if session.automaton(a).is_final(q) {
                RuleTag::BoxFinal
            } else {
                RuleTag::Box
            }
        }
        Formula::AutDiamond(a, q, _) => {
            if session.automaton(a).is_final(q) {
                RuleTag::DmdFinal
            } else {
                RuleTag::Dmd
            }
        }
        Formula::LetterBox(Letter::Test(_), _) => RuleTag::BoxTest,
        _ => return None,
    };
    if blocked_by_r(rule) && r.contains(f) {
        return None;
    }
    Some(rule)
}

fn static_choice(session: &mut Session, node: &Node, rule: RuleTag, f: FormulaId) -> Choice {
    let mut y = node.label.clone();
    y.remove(f);
    let one = |extra: &[FormulaId]| {
        let mut l = y.clone();
        l.extend(extra.iter().copied());
        l
    };
    let conclusions = match session.ctx.formula(f) {
        Formula::And(a, b) => vec![plain(one(&[a, b]))],
        Formula::Or(a, b) => vec![plain(one(&[a])), plain(one(&[b]))],
        Formula::Box(p, phi) => {
            let r = AutRef::closed(p);
            let aut = session.automaton(r);
            let fs: Vec<FormulaId> =
                aut.initial().iter().map(|&q| session.ctx.intern(Formula::AutBox(r, q, phi))).collect();
            vec![plain(one(&fs))]
        }
        Formula::Diamond(p, phi) => match session.ctx.program(p) {
            Program::Test(psi) => {
                let trace = matches!(session.ctx.formula(phi), Formula::AutDiamond(..)).then_some(phi);
                vec![Conclusion { label: one(&[psi, phi]), trace }]
            }
            _ => {
                let r = AutRef::plain(p);
                let aut = session.automaton(r);
                aut.initial()
                    .iter()
                    .map(|&q| {
                        let g = session.ctx.intern(Formula::AutDiamond(r, q, phi));
                        plain(one(&[g]))
                    })
                    .collect()
            }
        },
        Formula::AutBox(a, q, phi) => {
            let aut = session.automaton(a);
            let mut fs: Vec<FormulaId> = aut
                .delta(q)
                .iter()
                .map(|&(l, t)| {
                    let inner = session.ctx.intern(Formula::AutBox(a, t, phi));
                    session.ctx.letter_box(l, inner)
                })
                .collect();
            if aut.is_final(q) {
                fs.push(phi);
            }
            vec![plain(one(&fs))]
        }
        Formula::AutDiamond(a, q, phi) => {
            let aut = session.automaton(a);
            let mut out: Vec<Conclusion> = aut
                .delta(q)
                .iter()
                .map(|&(l, t)| {
                    let inner = session.ctx.intern(Formula::AutDiamond(a, t, phi));
                    let g = session.ctx.letter_diamond(l, inner);
                    Conclusion { label: one(&[g]), trace: Some(g) }
                })
                .collect();
            if aut.is_final(q) {
                out.push(Conclusion { label: one(&[phi]), trace: Some(phi) });
            }
            out
        }
        Formula::LetterBox(Letter::Test(psi), phi) => {
            let npsi = negate(&mut session.ctx, psi);
            vec![plain(one(&[npsi])), plain(one(&[phi]))]
        }
        other => unreachable!("no static rule for {other:?}"),
    };
    Choice { rule, principal: Some(f), conclusions }
}

fn plain(label: FormulaSet) -> Conclusion {
    Conclusion { label, trace: None }
}

fn trans(session: &mut Session, node: &Node, gamma: &FormulaSet) -> Option<Choice> {
    let ctx = &session.ctx;
    let mut conclusions = Vec::new();
    for f in node.label.iter() {
        let Some((s, phi)) = ctx.as_simple_diamond(f) else {
            continue;
        };
        let mut label = gamma.clone();
        label.insert(phi);
        for g in node.label.iter() {
            if let Formula::LetterBox(Letter::Simple(t), psi) = ctx.formula(g) {
                if t == s {
                    label.insert(psi);
                }
            }
        }
        conclusions.push(Conclusion { label, trace: Some(f) });
    }
    (!conclusions.is_empty()).then_some(Choice { rule: RuleTag::Trans, principal: None, conclusions })
}
