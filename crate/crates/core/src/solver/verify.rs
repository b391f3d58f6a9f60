use std::collections::BTreeSet;
use std::fmt;

use super::trace_elements;
use crate::encoder::{step_term, GroundFormula, SteppedSymbol};
use crate::formula::{classify_atom, Atom, AtomStrength, FoFormula, Signature, Sort, TemporalFormula, Term};
use crate::semantics::{sat_fo, sat_lazy_with, EvalError, Trace};
use crate::smt::{element_name, quote, value_text, CheckResult, Session, SmtError, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
    /// A delegated check came back unknown.
    Unknown(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("verified"),
            Verdict::Invalid => f.write_str("NOT verified"),
            Verdict::Unknown(r) => write!(f, "verification unknown ({r})"),
        }
    }
}

fn lookahead(t: &Term) -> usize {
    match t {
        Term::Next(inner) | Term::WNext(inner) => 1 + lookahead(inner),
        _ => t.children().into_iter().map(lookahead).max().unwrap_or(0),
    }
}

/// The first-order formula `f` at state `i` of a trace of length `n`, with
/// every atom that looks past the end replaced by its truth value there.
fn ground_at(f: &FoFormula, i: usize, n: usize) -> GroundFormula {
    let atom = |a: &Atom| {
        let depth = a.args.iter().map(lookahead).max().unwrap_or(0);
        if i + depth < n {
            GroundFormula::Atom(a.pred.clone(), a.args.iter().map(|t| step_term(t, i)).collect())
        } else if classify_atom(a) == AtomStrength::Strong {
            GroundFormula::False
        } else {
            GroundFormula::True
        }
    };
    match f {
        FoFormula::True => GroundFormula::True,
        FoFormula::False => GroundFormula::False,
        FoFormula::Atom(a) => atom(a),
        FoFormula::NegAtom(a) => GroundFormula::negate(atom(a)),
        FoFormula::And(a, b) => GroundFormula::and(vec![ground_at(a, i, n), ground_at(b, i, n)]),
        FoFormula::Or(a, b) => GroundFormula::or(vec![ground_at(a, i, n), ground_at(b, i, n)]),
        FoFormula::Exists(v, s, b) => GroundFormula::Exists(v.clone(), s.clone(), Box::new(ground_at(b, i, n))),
        FoFormula::Forall(v, s, b) => GroundFormula::Forall(v.clone(), s.clone(), Box::new(ground_at(b, i, n))),
    }
}

/// A solver session holding the witness's rigid interpretation, for
/// first-order checks the trace semantics cannot decide on its own.
struct Delegate<'a> {
    session: Session,
    sig: &'a Signature,
    trace: &'a Trace,
}

impl<'a> Delegate<'a> {
    fn open(trace: &'a Trace, sig: &'a Signature, backend: &SolverConfig) -> Result<Self, SmtError> {
        let mut cfg = backend.clone();
        cfg.logic = None;
        cfg.transcript = None;
        let mut defs = trace.interp.smt_definitions.clone();
        let declared: BTreeSet<String> = defs
            .iter()
            .filter_map(|d| d.strip_prefix("(declare-fun ").and_then(|r| r.split_whitespace().next()))
            .map(|n| n.trim_matches('|').to_string())
            .collect();
        for (sort, ids) in trace_elements(trace) {
            let names: Vec<String> = ids.iter().map(|id| element_name(&sort, *id)).collect();
            for n in &names {
                if !declared.contains(n) {
                    defs.push(format!("(declare-fun {} () {})", quote(n), quote(&sort)));
                }
            }
            if names.len() > 1 {
                let quoted: Vec<_> = names.iter().map(|n| quote(n)).collect();
                defs.push(format!("(assert (distinct {}))", quoted.join(" ")));
            }
        }
        let mut session = Session::open_with_definitions(&cfg, sig, &defs)?;
        for (c, v) in &trace.interp.consts {
            if let Some(sort) = sig.constants.get(c) {
                session.command(&format!("(assert (= {} {}))", quote(c), value_text(v, sort)))?;
            }
        }
        Ok(Delegate { session, sig, trace })
    }

    /// Whether `f` holds at state `i`: its negation, with the state values
    /// fixed, must be unsatisfiable.
    fn holds(&mut self, f: &FoFormula, i: usize) -> Result<Result<bool, String>, SmtError> {
        let g = ground_at(f, i, self.trace.len());
        let mut fixed = Vec::new();
        for sym in g.symbols() {
            if let SteppedSymbol::Var(x, j) = &sym {
                let sort = self.sig.state_vars.get(x).cloned().unwrap_or(Sort::Int);
                if let Some(v) = self.trace.states.get(*j).and_then(|s| s.get(x)) {
                    fixed.push(format!("(assert (= {} {}))", quote(&sym.to_string()), value_text(v, &sort)));
                }
            }
        }
        self.session.push()?;
        for s in g.symbols() {
            self.session.declare(&s)?;
        }
        self.session.raw(&fixed)?;
        self.session.assert_formula(&GroundFormula::negate(g))?;
        let r = self.session.check()?;
        self.session.pop()?;
        Ok(match r {
            CheckResult::Unsat => Ok(true),
            CheckResult::Sat => Ok(false),
            CheckResult::Unknown(reason) => Err(reason),
        })
    }
}

enum Stop {
    Backend(SmtError),
    Unknown(String),
    Eval,
}

/// Whether `trace` satisfies `phi` at its first state. Quantifier-free
/// leaves over interpreted symbols are evaluated directly; quantified
/// leaves and leaves applying uninterpreted functions are checked by the
/// backend against the trace's interpretation.
pub fn verify_witness(
    trace: &Trace,
    phi: &TemporalFormula,
    sig: &Signature,
    backend: &SolverConfig,
) -> Result<Verdict, SmtError> {
    if trace.is_empty() {
        return Ok(Verdict::Invalid);
    }
    let mut delegate: Option<Delegate> = None;
    let mut leaf = |f: &FoFormula, i: usize| -> Result<bool, Stop> {
        match sat_fo(f, trace, i, &mut Vec::new(), None) {
            Ok(b) => Ok(b),
            Err(EvalError::Delegate(_) | EvalError::IncompleteInterpretation(_)) => {
                if delegate.is_none() {
                    delegate = Some(Delegate::open(trace, sig, backend).map_err(Stop::Backend)?);
                }
                let d = delegate.as_mut().expect("just opened");
                match d.holds(f, i).map_err(Stop::Backend)? {
                    Ok(b) => Ok(b),
                    Err(reason) => Err(Stop::Unknown(reason)),
                }
            }
            Err(_) => Err(Stop::Eval),
        }
    };
    let result = sat_lazy_with(phi, trace.len(), 0, &mut leaf);
    if let Some(d) = delegate {
        d.session.close();
    }
    match result {
        Ok(v) => Ok(if v { Verdict::Valid } else { Verdict::Invalid }),
        Err(Stop::Backend(e)) => Err(e),
        Err(Stop::Unknown(r)) => Ok(Verdict::Unknown(r)),
        // a malformed witness (missing variable, division by zero) is not a model
        Err(Stop::Eval) => Ok(Verdict::Invalid),
    }
}
