use std::collections::BTreeMap;

use thiserror::Error;

use super::{eval_positions, EvalError, Interpretation, Trace, Value};
use crate::formula::{Signature, Sort, TemporalFormula};

/// Finite carrier for each sort, used by quantifier evaluation and by the
/// enumeration oracle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Domains(BTreeMap<Sort, Vec<Value>>);

impl Domains {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, sort: Sort, values: Vec<Value>) -> Self {
        self.0.insert(sort, values);
        self
    }

    /// `Int` ranging over `lo..=hi`.
    pub fn int_range(lo: i64, hi: i64) -> Self {
        Domains::new().with(Sort::Int, (lo..=hi).map(Value::int).collect())
    }

    /// Adds an uninterpreted sort with `size` anonymous elements.
    pub fn with_elements(self, sort: &str, size: usize) -> Self {
        let values = (0..size).map(|id| Value::Elem { sort: sort.to_string(), id }).collect();
        self.with(Sort::Uninterpreted(sort.to_string()), values)
    }

    pub fn get(&self, sort: &Sort) -> Option<&Vec<Value>> {
        self.0.get(sort)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("search space exceeds the cap of {0} candidate traces")]
    CapExceeded(u128),
    #[error("no finite domain given for sort {0}")]
    MissingDomain(Sort),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

enum Slot {
    Const(String),
    Func(String, Vec<Value>),
    Pred(String, Vec<Value>),
}

/// Every tuple over the given carriers, in lexicographic order.
fn tuples(carriers: &[&Vec<Value>]) -> Vec<Vec<Value>> {
    carriers.iter().fold(vec![Vec::new()], |acc, carrier| {
        acc.into_iter()
            .flat_map(|prefix| {
                carrier.iter().map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect()
    })
}

/// Advances a mixed-radix counter; false once it wraps around.
fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, r) in digits.iter_mut().zip(radix).rev() {
        *d += 1;
        if *d < *r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Shortest satisfying trace of length at most `max_len` with every sort
/// restricted to `domains`, searching lengths in increasing order and, per
/// length, interpretations and state sequences lexicographically.
pub fn enumerate_sat(
    phi: &TemporalFormula,
    sig: &Signature,
    domains: &Domains,
    max_len: usize,
    cap: u128,
) -> Result<Option<Trace>, EnumError> {
    let carrier = |s: &Sort| domains.get(s).ok_or_else(|| EnumError::MissingDomain(s.clone()));

    let var_carriers = sig.state_vars.values().map(carrier).collect::<Result<Vec<_>, _>>()?;
    let states: Vec<BTreeMap<String, Value>> =
        tuples(&var_carriers).into_iter().map(|vals| sig.state_vars.keys().cloned().zip(vals).collect()).collect();

    let mut slots = Vec::new();
    let mut radix = Vec::new();
    let mut choices: Vec<Vec<Value>> = Vec::new();
    for (c, s) in &sig.constants {
        slots.push(Slot::Const(c.clone()));
        choices.push(carrier(s)?.clone());
    }
    for (f, fs) in &sig.functions {
        let args = fs.args.iter().map(carrier).collect::<Result<Vec<_>, _>>()?;
        let result = carrier(&fs.result)?;
        for t in tuples(&args) {
            slots.push(Slot::Func(f.clone(), t));
            choices.push(result.clone());
        }
    }
    let booleans = vec![Value::int(0), Value::int(1)];
    for (p, sorts) in &sig.predicates {
        let args = sorts.iter().map(carrier).collect::<Result<Vec<_>, _>>()?;
        for t in tuples(&args) {
            slots.push(Slot::Pred(p.clone(), t));
            choices.push(booleans.clone());
        }
    }
    radix.extend(choices.iter().map(Vec::len));

    let interp_count = radix.iter().try_fold(1u128, |acc, r| acc.checked_mul(*r as u128));
    let mut total = Some(0u128);
    for len in 1..=max_len {
        let per_len = (0..len).try_fold(1u128, |acc, _| acc.checked_mul(states.len() as u128));
        total = match (total, per_len, interp_count) {
            (Some(t), Some(p), Some(i)) => p.checked_mul(i).and_then(|x| x.checked_add(t)),
            _ => None,
        };
    }
    match total {
        Some(t) if t <= cap => {}
        _ => return Err(EnumError::CapExceeded(cap)),
    }
    if states.is_empty() || radix.contains(&0) {
        return Ok(None);
    }

    for len in 1..=max_len {
        let mut interp_digits = vec![0; slots.len()];
        loop {
            let interp = build_interp(&slots, &choices, &interp_digits);
            let state_radix = vec![states.len(); len];
            let mut seq = vec![0; len];
            loop {
                let trace = Trace { states: seq.iter().map(|&s| states[s].clone()).collect(), interp: interp.clone() };
                if eval_positions(phi, &trace, Some(domains))?[0] {
                    return Ok(Some(trace));
                }
                if !advance(&mut seq, &state_radix) {
                    break;
                }
            }
            if !advance(&mut interp_digits, &radix) {
                break;
            }
        }
    }
    Ok(None)
}

fn build_interp(slots: &[Slot], choices: &[Vec<Value>], digits: &[usize]) -> Interpretation {
    let mut interp = Interpretation::default();
    for ((slot, options), &d) in slots.iter().zip(choices).zip(digits) {
        let v = options[d].clone();
        match slot {
            Slot::Const(c) => {
                interp.consts.insert(c.clone(), v);
            }
            Slot::Func(f, args) => {
                interp.funcs.entry(f.clone()).or_default().insert(args.clone(), v);
            }
            Slot::Pred(p, args) => {
                interp.preds.entry(p.clone()).or_default().insert(args.clone(), d == 1);
            }
        }
    }
    interp
}
