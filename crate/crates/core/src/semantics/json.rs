use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Trace, Value};

#[derive(Serialize, Deserialize)]
struct TraceJson {
    length: usize,
    states: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceJsonError {
    #[error("malformed trace document: {0}")]
    Syntax(String),
    #[error("length {length} does not match {states} states")]
    Length { length: usize, states: usize },
    #[error("a trace needs at least one state")]
    Empty,
    #[error("state {state} does not assign the same variables as state 0")]
    Variables { state: usize },
    #[error("bad value `{0}`")]
    Value(String),
}

/// `{"length": n, "states": [{"x": "3", "r": "1/10"}, …]}`; numbers are
/// exact integer or fraction strings, elements of uninterpreted sorts are
/// written `Sort#id`.
pub fn trace_to_json(trace: &Trace) -> String {
    let doc = TraceJson {
        length: trace.len(),
        states: trace.states.iter().map(|s| s.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("string maps always serialize")
}

pub fn trace_from_json(text: &str) -> Result<Trace, TraceJsonError> {
    let doc: TraceJson = serde_json::from_str(text).map_err(|e| TraceJsonError::Syntax(e.to_string()))?;
    if doc.length != doc.states.len() {
        return Err(TraceJsonError::Length { length: doc.length, states: doc.states.len() });
    }
    let Some(first) = doc.states.first() else {
        return Err(TraceJsonError::Empty);
    };
    let mut states = Vec::with_capacity(doc.states.len());
    for (i, s) in doc.states.iter().enumerate() {
        if !s.keys().eq(first.keys()) {
            return Err(TraceJsonError::Variables { state: i });
        }
        let state = s
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_value(v).ok_or_else(|| TraceJsonError::Value(v.clone()))?)))
            .collect::<Result<_, TraceJsonError>>()?;
        states.push(state);
    }
    Ok(Trace::new(states))
}

pub(crate) fn parse_value(s: &str) -> Option<Value> {
    if let Some((sort, id)) = s.rsplit_once('#') {
        if sort.is_empty() {
            return None;
        }
        return Some(Value::Elem { sort: sort.to_string(), id: id.parse().ok()? });
    }
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (BigInt, BigInt) = (n.parse().ok()?, d.parse().ok()?);
        if d.is_zero() {
            return None;
        }
        return Some(Value::Num(BigRational::new(n, d)));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let whole: BigInt = int.parse().ok()?;
        let digits: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = BigRational::new(whole.magnitude().clone().into(), 1.into()) + BigRational::new(digits, scale);
        return Some(Value::Num(if negative { -magnitude } else { magnitude }));
    }
    Some(Value::Num(BigRational::from_integer(s.parse().ok()?)))
}
