//! The incremental satisfiability loop, witness extraction and witness
//! verification.

mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::time::Duration;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::encoder::{empty_encoding, unravel_base, unravel_delta, SteppedSymbol};
use crate::formula::{closure, flatten_next, ClosureTable, FormulaError, Signature, Sort, TemporalFormula};
use crate::semantics::{Trace, Value};
use crate::smt::{element_index, infer_logic, quote, CheckResult, ModelValue, Session, SmtError, SolverConfig};
use crate::tableau::{self, TableauOptions};

pub use verify::{verify_witness, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Encoding,
    Tableau,
    /// Runs both and fails on any disagreement.
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    /// Largest unraveling depth tried; 0 means unbounded.
    pub max_k: usize,
    pub backend: SolverConfig,
    pub verify_witness: bool,
    pub engine: Engine,
    /// Limit per satisfiability check.
    pub timeout: Option<Duration>,
    /// DOT dump of the explored tableau.
    pub dump_tableau: Option<PathBuf>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_k: 300,
            backend: SolverConfig::from_env(),
            verify_witness: false,
            engine: Engine::Encoding,
            timeout: Some(Duration::from_secs(60)),
            dump_tableau: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnknownReason {
    BoundExhausted,
    BackendUnknown(String),
    Timeout,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::BoundExhausted => f.write_str("bound-exhausted"),
            UnknownReason::BackendUnknown(r) => write!(f, "backend-unknown: {r}"),
            UnknownReason::Timeout => f.write_str("timeout"),
        }
    }
}

impl UnknownReason {
    fn from_backend(reason: String) -> Self {
        if reason == "timeout" {
            UnknownReason::Timeout
        } else {
            UnknownReason::BackendUnknown(reason)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A witness of length `k + 1`.
    Sat {
        trace: Trace,
        k: usize,
    },
    Unsat {
        k: usize,
    },
    Unknown(UnknownReason),
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveOutcome::Unsat { .. })
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            SolveOutcome::Sat { k, .. } | SolveOutcome::Unsat { k } => Some(*k),
            SolveOutcome::Unknown(_) => None,
        }
    }

    /// Same verdict and depth, ignoring the witness.
    pub fn agrees_with(&self, other: &SolveOutcome) -> bool {
        match (self, other) {
            (SolveOutcome::Unknown(_), SolveOutcome::Unknown(_)) => true,
            _ => self.is_sat() == other.is_sat() && self.is_unsat() == other.is_unsat() && self.k() == other.k(),
        }
    }
}

impl fmt::Display for SolveOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveOutcome::Sat { .. } => f.write_str("SAT"),
            SolveOutcome::Unsat { .. } => f.write_str("UNSAT"),
            SolveOutcome::Unknown(r) => write!(f, "UNKNOWN ({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    /// Present when verification was requested and a witness was found.
    pub verdict: Option<Verdict>,
    /// Stepped variables the model left unassigned, filled with defaults.
    pub model_incomplete: Vec<String>,
    /// Satisfiability checks issued.
    pub checks: usize,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Backend(#[from] SmtError),
    #[error("engines disagree: encoding says {encoding}, tableau says {tableau}")]
    Divergence { encoding: String, tableau: String },
    #[error("cannot write tableau dump: {0}")]
    Dump(String),
}

/// Everything both engines need: the flattened formula over the extended
/// signature and its closure.
pub(crate) struct Prepared {
    pub sig: Signature,
    pub ct: ClosureTable,
    pub backend: SolverConfig,
}

pub(crate) fn prepare(phi: &TemporalFormula, sig: &Signature, opts: &SolveOptions) -> Result<Prepared, SolveError> {
    let mut full = sig.clone();
    let flat = flatten_next(phi, &mut full)?;
    let mut backend = opts.backend.clone();
    if backend.logic.is_none() {
        backend.logic = Some(infer_logic(&full, [&flat]));
    }
    if backend.timeout_ms.is_none() {
        backend.timeout_ms = opts.timeout.map(|d| d.as_millis() as u64);
    }
    Ok(Prepared { ct: closure(&flat), sig: full, backend })
}

/// Decides `phi`. The formula must be in negation normal form and
/// sort-checked against `sig`; nested next terms are flattened here.
pub fn solve(phi: &TemporalFormula, sig: &Signature, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let mut report = match opts.engine {
        Engine::Encoding => solve_encoding(phi, sig, opts)?,
        Engine::Tableau => solve_tableau(phi, sig, opts)?,
        Engine::Both => {
            let enc = solve_encoding(phi, sig, opts)?;
            let tab = solve_tableau(phi, sig, opts)?;
            if !enc.outcome.agrees_with(&tab.outcome) {
                let show = |o: &SolveOutcome| match o.k() {
                    Some(k) => format!("{o} at k={k}"),
                    None => o.to_string(),
                };
                return Err(SolveError::Divergence { encoding: show(&enc.outcome), tableau: show(&tab.outcome) });
            }
            SolveReport { checks: enc.checks + tab.checks, ..enc }
        }
    };
    if opts.verify_witness {
        if let SolveOutcome::Sat { trace, .. } = &report.outcome {
            report.verdict = Some(verify_witness(trace, phi, sig, &opts.backend)?);
        }
    }
    Ok(report)
}

fn solve_encoding(phi: &TemporalFormula, sig: &Signature, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let prep = prepare(phi, sig, opts)?;
    let ct = &prep.ct;
    let mut s = Session::open(&prep.backend, &prep.sig)?;
    let mut report = SolveReport {
        outcome: SolveOutcome::Unknown(UnknownReason::BoundExhausted),
        verdict: None,
        model_incomplete: Vec::new(),
        checks: 0,
    };
    s.assert_formula(&unravel_base(ct))?;
    let mut k = 0;
    report.outcome = loop {
        match s.check()? {
            CheckResult::Unsat => break SolveOutcome::Unsat { k },
            CheckResult::Unknown(r) => break SolveOutcome::Unknown(UnknownReason::from_backend(r)),
            CheckResult::Sat => {}
        }
        s.push()?;
        s.assert_formula(&empty_encoding(ct, k))?;
        match s.check()? {
            CheckResult::Sat => {
                let (trace, missing) = extract_trace(&mut s, sig, k)?;
                report.model_incomplete = missing;
                break SolveOutcome::Sat { trace, k };
            }
            CheckResult::Unknown(r) => break SolveOutcome::Unknown(UnknownReason::from_backend(r)),
            CheckResult::Unsat => {}
        }
        s.pop()?;
        if opts.max_k != 0 && k >= opts.max_k {
            break SolveOutcome::Unknown(UnknownReason::BoundExhausted);
        }
        s.assert_formula(&unravel_delta(ct, k))?;
        k += 1;
    };
    report.checks = s.checks;
    s.close();
    Ok(report)
}

fn solve_tableau(phi: &TemporalFormula, sig: &Signature, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let prep = prepare(phi, sig, opts)?;
    let topts = TableauOptions {
        max_poised: if opts.max_k == 0 { 0 } else { opts.max_k + 1 },
        dot: opts.dump_tableau.is_some(),
    };
    let result = tableau::search(&prep.ct, &prep.sig, sig, &prep.backend, &topts)?;
    if let (Some(path), Some(dot)) = (&opts.dump_tableau, &result.dot) {
        std::fs::write(path, dot).map_err(|e| SolveError::Dump(e.to_string()))?;
    }
    Ok(SolveReport {
        outcome: result.outcome,
        verdict: None,
        model_incomplete: result.model_incomplete,
        checks: result.checks,
    })
}

fn default_value(sort: &Sort, fresh: &mut BTreeMap<String, usize>) -> Value {
    match sort {
        Sort::Int | Sort::Real => Value::Num(BigRational::zero()),
        Sort::Uninterpreted(name) => {
            let id = fresh.entry(name.clone()).or_insert(0);
            *id += 1;
            Value::Elem { sort: name.clone(), id: *id - 1 }
        }
    }
}

/// Reads a witness of length `k + 1` over the variables of `sig` from the
/// current model: the value of `x` at state `i` is the value of `x@i`.
/// Stepped variables the session never declared are don't-cares; they get
/// a default value and are listed in the second component.
pub fn extract_trace(s: &mut Session, sig: &Signature, k: usize) -> Result<(Trace, Vec<String>), SmtError> {
    let mut wanted = Vec::new();
    let mut missing = Vec::new();
    for i in 0..=k {
        for (x, sort) in &sig.state_vars {
            let sym = SteppedSymbol::Var(x.clone(), i);
            if s.is_declared(&sym) {
                wanted.push((i, x.clone(), sort.clone()));
            } else {
                missing.push((i, x.clone(), sort.clone()));
            }
        }
    }
    let mut terms: Vec<String> = wanted.iter().map(|(i, x, _)| quote(&format!("{x}@{i}"))).collect();
    let consts: Vec<_> = sig.constants.iter().collect();
    terms.extend(consts.iter().map(|(c, _)| quote(c)));
    let values = s.get_values(&terms)?;

    let mut elements: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut convert = |v: ModelValue, sort: &Sort| -> Result<Value, SmtError> {
        match (v, sort) {
            (ModelValue::Num(r), Sort::Int | Sort::Real) => Ok(Value::Num(r)),
            (ModelValue::Element(name), Sort::Uninterpreted(sn)) => {
                let seen = elements.entry(sn.clone()).or_default();
                let next = seen.len();
                let id = *seen.entry(name.clone()).or_insert_with(|| element_index(&name).unwrap_or(next));
                Ok(Value::Elem { sort: sn.clone(), id })
            }
            (v, _) => Err(SmtError::Protocol(format!("{v:?} is not a value of sort {sort}"))),
        }
    };
    let mut trace = Trace::new(vec![BTreeMap::new(); k + 1]);
    let mut values = values.into_iter();
    for ((i, x, sort), v) in wanted.iter().zip(values.by_ref()) {
        trace.states[*i].insert(x.clone(), convert(v, sort)?);
    }
    for ((c, sort), v) in consts.iter().zip(values) {
        trace.interp.consts.insert((*c).clone(), convert(v, sort)?);
    }

    let mut fresh: BTreeMap<String, usize> = BTreeMap::new();
    for (sort, ids) in &elements {
        let max = ids.values().max().map_or(0, |m| m + 1);
        fresh.insert(sort.clone(), max);
    }
    let mut names = Vec::new();
    for (i, x, sort) in missing {
        trace.states[i].insert(x.clone(), default_value(&sort, &mut fresh));
        names.push(format!("{x}@{i}"));
    }
    if !sig.constants.is_empty() || sig.uses_uninterpreted() {
        trace.interp.smt_definitions = s.user_definitions()?;
    }
    Ok((trace, names))
}

/// Names of every abstract element a trace mentions, by sort.
pub(crate) fn trace_elements(trace: &Trace) -> BTreeMap<String, BTreeSet<usize>> {
    let mut out: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    let values = trace.states.iter().flat_map(|s| s.values()).chain(trace.interp.consts.values());
    for v in values {
        if let Value::Elem { sort, id } = v {
            out.entry(sort.clone()).or_default().insert(*id);
        }
    }
    out
}
