//! The explicit one-pass tree tableau, used as a reference engine for the
//! encoding.
//!
//! Node labels are sets of closure ids. Expansion rules decompose the first
//! non-elementary formula (by id) until a node is poised; poised nodes are
//! checked for contradiction and acceptance against the solver, then
//! stepped. The tree is explored by iterative deepening on the number of
//! poised nodes, so the first accepted branch found is a shortest one.

mod dot;

use std::collections::BTreeSet;

use crate::encoder::{label_step, omega, BranchSummary, GroundFormula, SteppedSymbol};
use crate::formula::{ClosureId, ClosureNode, ClosureTable, FoFormula, Signature};
use crate::smt::{CheckResult, Session, SmtError, SolverConfig};
use crate::solver::{extract_trace, SolveOutcome, UnknownReason};

use dot::Dot;

pub type Label = BTreeSet<ClosureId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Disjunction,
    Conjunction,
    Until,
    Release,
    Step,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Disjunction => "or",
            Rule::Conjunction => "and",
            Rule::Until => "until",
            Rule::Release => "release",
            Rule::Step => "step",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableauOptions {
    /// Largest number of poised nodes on a branch; 0 means unbounded.
    pub max_poised: usize,
    /// Record the last explored tree as a DOT graph.
    pub dot: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauResult {
    pub outcome: SolveOutcome,
    pub checks: usize,
    pub model_incomplete: Vec<String>,
    pub dot: Option<String>,
}

pub fn is_poised(ct: &ClosureTable, label: &Label) -> bool {
    label.iter().all(|&id| ct.node(id).is_elementary())
}

/// Applies the expansion rule for the first non-elementary formula, or
/// returns `None` for a poised label.
pub fn expand(ct: &ClosureTable, label: &Label) -> Option<(Rule, Vec<Label>)> {
    let &psi = label.iter().find(|&&id| !ct.node(id).is_elementary())?;
    let mut rest = label.clone();
    rest.remove(&psi);
    let with = |ids: &[ClosureId]| {
        let mut l = rest.clone();
        l.extend(ids.iter().copied());
        l
    };
    Some(match *ct.node(psi) {
        ClosureNode::Or(a, b) => (Rule::Disjunction, vec![with(&[a]), with(&[b])]),
        ClosureNode::And(a, b) => (Rule::Conjunction, vec![with(&[a, b])]),
        ClosureNode::U(a, b) => {
            let next = ct.x_of(psi).expect("closure holds X of every until");
            (Rule::Until, vec![with(&[b]), with(&[a, next])])
        }
        ClosureNode::R(a, b) => {
            let next = ct.wx_of(psi).expect("closure holds wX of every release");
            (Rule::Release, vec![with(&[a, b]), with(&[b, next])])
        }
        _ => unreachable!("elementary formulas are not expanded"),
    })
}

/// Label of the successor of a poised node: the operands of its tomorrow
/// and weak-tomorrow formulas.
pub fn step(ct: &ClosureTable, label: &Label) -> Label {
    label.iter().filter_map(|&id| ct.tomorrow_operand(id)).collect()
}

pub fn has_tomorrow(ct: &ClosureTable, label: &Label) -> bool {
    label.iter().any(|&id| matches!(ct.node(id), ClosureNode::X(_)))
}

pub fn first_order_labels(ct: &ClosureTable, label: &Label) -> Vec<FoFormula> {
    label
        .iter()
        .filter_map(|&id| match ct.node(id) {
            ClosureNode::Fo(f) => Some(f.clone()),
            _ => None,
        })
        .collect()
}

fn one_shot(s: &mut Session, extra: &[GroundFormula]) -> Result<CheckResult, SmtError> {
    s.push()?;
    for g in extra {
        s.assert_formula(g)?;
    }
    let r = s.check();
    s.pop()?;
    r
}

/// Contradiction rule: `Some(true)` when `Ω(β)` is unsatisfiable, `None`
/// when the backend cannot tell.
pub fn check_contradiction(s: &mut Session, b: &BranchSummary) -> Result<Option<bool>, SmtError> {
    Ok(match one_shot(s, &[omega(b)])? {
        CheckResult::Unsat => Some(true),
        CheckResult::Sat => Some(false),
        CheckResult::Unknown(_) => None,
    })
}

/// Empty rule: the last poised label has no tomorrow formula and
/// `Ω(β) ∧ ¬ℓ^{m-1}` is satisfiable.
pub fn check_empty(s: &mut Session, b: &BranchSummary, last_has_tomorrow: bool) -> Result<Option<bool>, SmtError> {
    if last_has_tomorrow || b.poised_labels.is_empty() {
        return Ok(Some(false));
    }
    let last = GroundFormula::negate(GroundFormula::Symbol(SteppedSymbol::StepLiteral(b.poised_labels.len() - 1)));
    Ok(match one_shot(s, &[omega(b), last])? {
        CheckResult::Sat => Some(true),
        CheckResult::Unsat => Some(false),
        CheckResult::Unknown(_) => None,
    })
}

enum Explored {
    Done(SolveOutcome, Vec<String>),
    Exhausted,
}

struct Search<'a> {
    ct: &'a ClosureTable,
    witness_sig: &'a Signature,
    s: Session,
    bound: usize,
    trimmed: bool,
    dot: Option<Dot>,
}

impl Search<'_> {
    fn saturate(&mut self, label: Label, node: usize, out: &mut Vec<(Label, usize)>) {
        match expand(self.ct, &label) {
            None => out.push((label, node)),
            Some((rule, children)) => {
                for child in children {
                    let n = self.node(&child, node, rule);
                    self.saturate(child, n, out);
                }
            }
        }
    }

    fn node(&mut self, label: &Label, parent: usize, rule: Rule) -> usize {
        match &mut self.dot {
            Some(d) => d.node(self.ct, label, Some((parent, rule))),
            None => 0,
        }
    }

    fn mark(&mut self, node: usize, status: &'static str) {
        if let Some(d) = &mut self.dot {
            d.mark(node, status);
        }
    }

    /// Explores every branch below a node whose label is `label`, the
    /// `i`-th poised node of its branch once saturated.
    fn explore(&mut self, label: Label, node: usize, i: usize) -> Result<Explored, SmtError> {
        let mut poised = Vec::new();
        self.saturate(label, node, &mut poised);
        for (label, n) in poised {
            self.s.push()?;
            if i > 0 {
                self.s.assert_formula(&GroundFormula::Symbol(SteppedSymbol::StepLiteral(i - 1)))?;
            }
            for f in first_order_labels(self.ct, &label) {
                self.s.assert_formula(&label_step(&f, i))?;
            }
            match self.s.check()? {
                CheckResult::Unsat => {
                    self.mark(n, "rejected");
                    self.s.pop()?;
                    continue;
                }
                CheckResult::Unknown(r) => return Ok(Explored::Done(unknown(r), Vec::new())),
                CheckResult::Sat => {}
            }
            if !has_tomorrow(self.ct, &label) {
                self.s.push()?;
                self.s.assert_formula(&GroundFormula::negate(GroundFormula::Symbol(SteppedSymbol::StepLiteral(i))))?;
                match self.s.check()? {
                    CheckResult::Sat => {
                        self.mark(n, "accepted");
                        let (trace, missing) = extract_trace(&mut self.s, self.witness_sig, i)?;
                        return Ok(Explored::Done(SolveOutcome::Sat { trace, k: i }, missing));
                    }
                    CheckResult::Unknown(r) => return Ok(Explored::Done(unknown(r), Vec::new())),
                    CheckResult::Unsat => {}
                }
                self.s.pop()?;
            }
            if i + 1 >= self.bound {
                self.mark(n, "trimmed");
                self.trimmed = true;
            } else {
                let next = step(self.ct, &label);
                let child = self.node(&next, n, Rule::Step);
                if let Explored::Done(o, m) = self.explore(next, child, i + 1)? {
                    return Ok(Explored::Done(o, m));
                }
            }
            self.s.pop()?;
        }
        Ok(Explored::Exhausted)
    }
}

fn unknown(reason: String) -> SolveOutcome {
    SolveOutcome::Unknown(if reason == "timeout" {
        UnknownReason::Timeout
    } else {
        UnknownReason::BackendUnknown(reason)
    })
}

/// Breadth-first search for an accepted branch. `sig` declares every
/// symbol of the closure; witnesses are reported over `witness_sig`.
pub fn search(
    ct: &ClosureTable,
    sig: &Signature,
    witness_sig: &Signature,
    backend: &SolverConfig,
    opts: &TableauOptions,
) -> Result<TableauResult, SmtError> {
    let s = Session::open(backend, sig)?;
    let mut st = Search { ct, witness_sig, s, bound: 1, trimmed: false, dot: None };
    let root: Label = [ct.root()].into_iter().collect();
    let (outcome, model_incomplete) = loop {
        st.trimmed = false;
        st.dot = opts.dot.then(Dot::default);
        let node = match &mut st.dot {
            Some(d) => d.node(ct, &root, None),
            None => 0,
        };
        let depth = st.s.depth();
        match st.explore(root.clone(), node, 0)? {
            Explored::Done(o, m) => break (o, m),
            Explored::Exhausted if !st.trimmed => break (SolveOutcome::Unsat { k: st.bound - 1 }, Vec::new()),
            Explored::Exhausted => {}
        }
        debug_assert_eq!(st.s.depth(), depth);
        if opts.max_poised != 0 && st.bound >= opts.max_poised {
            break (SolveOutcome::Unknown(UnknownReason::BoundExhausted), Vec::new());
        }
        st.bound += 1;
    };
    let checks = st.s.checks;
    let dot = st.dot.take().map(|d| d.render());
    st.s.close();
    Ok(TableauResult { outcome, checks, model_incomplete, dot })
}

#[cfg(test)]
mod tests;
