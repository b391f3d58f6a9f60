//! Finite-trace semantics: term evaluation, first-order and temporal
//! satisfaction over explicit traces, and a brute-force enumeration oracle.

mod enumerate;
mod json;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::formula::{classify_atom, ArithOp, Atom, AtomStrength, FoFormula, Predicate, Sort, TemporalFormula, Term};

pub use enumerate::{enumerate_sat, Domains, EnumError};
pub use json::{trace_from_json, trace_to_json, TraceJsonError};

/// A value of the shared domain. Integers and reals are both exact
/// rationals; the sort fixes which ones may occur.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Num(BigRational),
    Elem { sort: String, id: usize },
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Num(BigRational::from_integer(v.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Value {
        Value::Num(BigRational::new(n.into(), d.into()))
    }

    pub fn as_num(&self) -> Option<&BigRational> {
        match self {
            Value::Num(r) => Some(r),
            Value::Elem { .. } => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(r) => write!(f, "{r}"),
            Value::Elem { sort, id } => write!(f, "{sort}#{id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("incomplete interpretation: no value for {0}")]
    IncompleteInterpretation(String),
    #[error("state {state} assigns no value to {var}")]
    MissingVariable { var: String, state: usize },
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("arithmetic on a non-numeric value")]
    NotNumeric,
    #[error("quantifier over sort {0}: delegate to SMT verification")]
    Delegate(Sort),
}

/// Interpretation of the rigid symbols, shared by every state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub consts: BTreeMap<String, Value>,
    pub funcs: BTreeMap<String, BTreeMap<Vec<Value>, Value>>,
    pub preds: BTreeMap<String, BTreeMap<Vec<Value>, bool>>,
    /// Solver-side definitions (SMT-LIB `define-fun` text) of the same
    /// symbols, used when a check has to be delegated back to a solver.
    pub smt_definitions: Vec<String>,
}

/// A finite, non-empty sequence of states over one interpretation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<BTreeMap<String, Value>>,
    pub interp: Interpretation,
}

impl Trace {
    pub fn new(states: Vec<BTreeMap<String, Value>>) -> Trace {
        Trace { states, interp: Interpretation::default() }
    }

    /// Integer-valued trace, mostly for tests: `Trace::ints(&[&[("x", 0)], &[("x", 1)]])`.
    pub fn ints(states: &[&[(&str, i64)]]) -> Trace {
        Trace::new(states.iter().map(|s| s.iter().map(|(n, v)| (n.to_string(), Value::int(*v))).collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_last(&self, i: usize) -> bool {
        i + 1 == self.states.len()
    }

    fn var(&self, name: &str, i: usize) -> Result<Value, EvalError> {
        self.states[i].get(name).cloned().ok_or_else(|| EvalError::MissingVariable { var: name.to_string(), state: i })
    }
}

/// Values of the enclosing quantifiers, innermost last.
pub type Env = Vec<(String, Value)>;

fn num(v: Value) -> Result<BigRational, EvalError> {
    match v {
        Value::Num(r) => Ok(r),
        Value::Elem { .. } => Err(EvalError::NotNumeric),
    }
}

/// Evaluates `t` at position `i`. `Ok(None)` means undefined: the term looks
/// past the end of the trace.
pub fn eval_term(t: &Term, trace: &Trace, i: usize, env: &Env) -> Result<Option<Value>, EvalError> {
    Ok(Some(match t {
        Term::Var(x) => trace.var(x, i)?,
        Term::Bound(y) => env
            .iter()
            .rev()
            .find(|(n, _)| n == y)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| EvalError::Unbound(y.clone()))?,
        Term::Const(c) => {
            trace.interp.consts.get(c).cloned().ok_or_else(|| EvalError::IncompleteInterpretation(c.clone()))?
        }
        Term::Int(v) => Value::Num(BigRational::from_integer(v.clone())),
        Term::Real(r) => Value::Num(r.clone()),
        Term::Apply(f, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                match eval_term(a, trace, i, env)? {
                    Some(v) => vals.push(v),
                    None => return Ok(None),
                }
            }
            let table = trace.interp.funcs.get(f);
            match table.and_then(|t| t.get(&vals)) {
                Some(v) => v.clone(),
                None => return Err(EvalError::IncompleteInterpretation(format!("{f}{}", tuple(&vals)))),
            }
        }
        Term::Neg(inner) => match eval_term(inner, trace, i, env)? {
            Some(v) => Value::Num(-num(v)?),
            None => return Ok(None),
        },
        Term::Arith(op, a, b) => {
            let (Some(a), Some(b)) = (eval_term(a, trace, i, env)?, eval_term(b, trace, i, env)?) else {
                return Ok(None);
            };
            let (a, b) = (num(a)?, num(b)?);
            Value::Num(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div if b.is_zero() => return Err(EvalError::DivisionByZero),
                ArithOp::Div => a / b,
            })
        }
        Term::Next(inner) | Term::WNext(inner) => {
            if trace.is_last(i) {
                return Ok(None);
            }
            return eval_term(inner, trace, i + 1, env);
        }
    }))
}

fn tuple(vals: &[Value]) -> String {
    let parts: Vec<_> = vals.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Strong atoms are false and weak atoms true when some term is undefined.
pub fn sat_atom(a: &Atom, trace: &Trace, i: usize, env: &Env) -> Result<bool, EvalError> {
    let mut vals = Vec::with_capacity(a.args.len());
    for t in &a.args {
        match eval_term(t, trace, i, env)? {
            Some(v) => vals.push(v),
            None => return Ok(classify_atom(a) != AtomStrength::Strong),
        }
    }
    Ok(match &a.pred {
        Predicate::Eq => vals[0] == vals[1],
        Predicate::User(p) => *trace
            .interp
            .preds
            .get(p)
            .and_then(|t| t.get(&vals))
            .ok_or_else(|| EvalError::IncompleteInterpretation(format!("{p}{}", tuple(&vals))))?,
        rel => {
            let (l, r) = (num(vals[0].clone())?, num(vals[1].clone())?);
            match rel {
                Predicate::Lt => l < r,
                Predicate::Le => l <= r,
                Predicate::Gt => l > r,
                _ => l >= r,
            }
        }
    })
}

/// First-order satisfaction. Quantifiers are evaluated by enumeration and
/// need a finite domain for their sort in `domains`.
pub fn sat_fo(
    f: &FoFormula,
    trace: &Trace,
    i: usize,
    env: &mut Env,
    domains: Option<&Domains>,
) -> Result<bool, EvalError> {
    Ok(match f {
        FoFormula::True => true,
        FoFormula::False => false,
        FoFormula::Atom(a) => sat_atom(a, trace, i, env)?,
        FoFormula::NegAtom(a) => !sat_atom(a, trace, i, env)?,
        FoFormula::And(a, b) => sat_fo(a, trace, i, env, domains)? && sat_fo(b, trace, i, env, domains)?,
        FoFormula::Or(a, b) => sat_fo(a, trace, i, env, domains)? || sat_fo(b, trace, i, env, domains)?,
        FoFormula::Exists(v, s, body) | FoFormula::Forall(v, s, body) => {
            let exists = matches!(f, FoFormula::Exists(..));
            let values = domains.and_then(|d| d.get(s)).ok_or_else(|| EvalError::Delegate(s.clone()))?;
            let mut result = !exists;
            for val in values {
                env.push((v.clone(), val.clone()));
                let r = sat_fo(body, trace, i, env, domains);
                env.pop();
                if r? == exists {
                    result = exists;
                    break;
                }
            }
            result
        }
    })
}

/// Temporal satisfaction at position `i`, following the definition clause
/// by clause.
pub fn sat_temporal(
    phi: &TemporalFormula,
    trace: &Trace,
    i: usize,
    domains: Option<&Domains>,
) -> Result<bool, EvalError> {
    use TemporalFormula as T;
    let n = trace.len();
    Ok(match phi {
        T::True => true,
        T::Fo(fo) => sat_fo(fo, trace, i, &mut Vec::new(), domains)?,
        T::And(a, b) => sat_temporal(a, trace, i, domains)? && sat_temporal(b, trace, i, domains)?,
        T::Or(a, b) => sat_temporal(a, trace, i, domains)? || sat_temporal(b, trace, i, domains)?,
        T::X(a) => i + 1 < n && sat_temporal(a, trace, i + 1, domains)?,
        T::WX(a) => i + 1 == n || sat_temporal(a, trace, i + 1, domains)?,
        T::U(a, b) => {
            // some j ≥ i satisfies b and every k in [i, j) satisfies a
            for j in i..n {
                if sat_temporal(b, trace, j, domains)? {
                    return Ok(true);
                }
                if !sat_temporal(a, trace, j, domains)? {
                    return Ok(false);
                }
            }
            false
        }
        T::R(a, b) => {
            // every j ≥ i satisfies b, unless some k in [i, j) satisfies a
            for j in i..n {
                if !sat_temporal(b, trace, j, domains)? {
                    return Ok(false);
                }
                if sat_temporal(a, trace, j, domains)? {
                    return Ok(true);
                }
            }
            true
        }
    })
}

/// Truth value of `phi` at every position of a trace of length `n`,
/// computed backwards in linear time. First-order leaves are decided by
/// `leaf`, which lets callers substitute a different oracle.
pub fn eval_positions_with<E>(
    phi: &TemporalFormula,
    n: usize,
    leaf: &mut impl FnMut(&FoFormula, usize) -> Result<bool, E>,
) -> Result<Vec<bool>, E> {
    use TemporalFormula as T;
    Ok(match phi {
        T::True => vec![true; n],
        T::Fo(fo) => (0..n).map(|i| leaf(fo, i)).collect::<Result<_, _>>()?,
        T::And(a, b) | T::Or(a, b) => {
            let (va, vb) = (eval_positions_with(a, n, leaf)?, eval_positions_with(b, n, leaf)?);
            let and = matches!(phi, T::And(..));
            va.iter().zip(&vb).map(|(x, y)| if and { *x && *y } else { *x || *y }).collect()
        }
        T::X(a) | T::WX(a) => {
            let va = eval_positions_with(a, n, leaf)?;
            let at_end = matches!(phi, T::WX(_));
            (0..n).map(|i| if i + 1 < n { va[i + 1] } else { at_end }).collect()
        }
        T::U(a, b) | T::R(a, b) => {
            let (va, vb) = (eval_positions_with(a, n, leaf)?, eval_positions_with(b, n, leaf)?);
            let until = matches!(phi, T::U(..));
            let mut out = vec![false; n];
            let mut later = !until;
            for i in (0..n).rev() {
                out[i] = if until { vb[i] || (va[i] && later) } else { vb[i] && (va[i] || later) };
                later = out[i];
            }
            out
        }
    })
}

/// Truth value of `phi` at position `i` of a trace of length `n`, asking
/// `leaf` only about the first-order leaves the verdict depends on. Results
/// are memoised per subformula and position.
pub fn sat_lazy_with<E>(
    phi: &TemporalFormula,
    n: usize,
    i: usize,
    leaf: &mut impl FnMut(&FoFormula, usize) -> Result<bool, E>,
) -> Result<bool, E> {
    let mut memo = HashMap::new();
    lazy(phi, n, i, leaf, &mut memo)
}

fn lazy<E>(
    phi: &TemporalFormula,
    n: usize,
    i: usize,
    leaf: &mut impl FnMut(&FoFormula, usize) -> Result<bool, E>,
    memo: &mut HashMap<(*const TemporalFormula, usize), bool>,
) -> Result<bool, E> {
    use TemporalFormula as T;
    let key = (phi as *const TemporalFormula, i);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let v = match phi {
        T::True => true,
        T::Fo(fo) => leaf(fo, i)?,
        T::And(a, b) => lazy(a, n, i, leaf, memo)? && lazy(b, n, i, leaf, memo)?,
        T::Or(a, b) => lazy(a, n, i, leaf, memo)? || lazy(b, n, i, leaf, memo)?,
        T::X(a) => i + 1 < n && lazy(a, n, i + 1, leaf, memo)?,
        T::WX(a) => i + 1 == n || lazy(a, n, i + 1, leaf, memo)?,
        T::U(a, b) => {
            lazy(b, n, i, leaf, memo)? || (lazy(a, n, i, leaf, memo)? && i + 1 < n && lazy(phi, n, i + 1, leaf, memo)?)
        }
        T::R(a, b) => {
            lazy(b, n, i, leaf, memo)? && (lazy(a, n, i, leaf, memo)? || i + 1 == n || lazy(phi, n, i + 1, leaf, memo)?)
        }
    };
    memo.insert(key, v);
    Ok(v)
}

/// Linear-time evaluation at every position with direct first-order checks.
pub fn eval_positions(phi: &TemporalFormula, trace: &Trace, domains: Option<&Domains>) -> Result<Vec<bool>, EvalError> {
    eval_positions_with(phi, trace.len(), &mut |fo, i| sat_fo(fo, trace, i, &mut Vec::new(), domains))
}

#[cfg(test)]
mod tests;
