use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::SmtError;
use crate::encoder::{GroundFormula, GroundTerm, SteppedSymbol};
use crate::formula::{ArithOp, Predicate, Signature, Sort};
use crate::semantics::Value;

/// `|name|`; every symbol is quoted so user names never clash with
/// SMT-LIB keywords.
pub fn quote(name: &str) -> String {
    format!("|{name}|")
}

pub fn sort_text(s: &Sort) -> String {
    match s {
        Sort::Int => "Int".into(),
        Sort::Real => "Real".into(),
        Sort::Uninterpreted(n) => quote(n),
    }
}

fn int_text(v: &BigInt, real: bool) -> String {
    let suffix = if real { ".0" } else { "" };
    if v.is_negative() {
        format!("(- {}{suffix})", -v)
    } else {
        format!("{v}{suffix}")
    }
}

/// A rational literal at the given sort (integers at `Int`).
pub fn rational_text(r: &BigRational, sort: &Sort) -> String {
    let real = *sort != Sort::Int;
    if r.denom().is_one() {
        return int_text(r.numer(), real);
    }
    let body = format!("(/ {}.0 {}.0)", r.numer().abs(), r.denom());
    if r.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

/// Solver-side name of an element of an uninterpreted sort.
pub fn element_name(sort: &str, id: usize) -> String {
    format!("{sort}!val!{id}")
}

pub fn value_text(v: &Value, sort: &Sort) -> String {
    match v {
        Value::Num(r) => rational_text(r, sort),
        Value::Elem { sort, id } => quote(&element_name(sort, *id)),
    }
}

/// Serializes ground formulas, inferring the sort of every arithmetic
/// context so literals are emitted at the right sort.
pub struct Emitter<'a> {
    sig: &'a Signature,
    scope: Vec<(String, Sort)>,
}

#[derive(Clone, PartialEq)]
enum Inferred {
    Exact(Sort),
    Numeral,
}

impl<'a> Emitter<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Emitter { sig, scope: Vec::new() }
    }

    pub fn symbol_sort(&self, s: &SteppedSymbol) -> Result<Sort, SmtError> {
        match s {
            SteppedSymbol::Var(x, _) => self
                .sig
                .state_vars
                .get(x)
                .cloned()
                .ok_or_else(|| SmtError::Unsupported(format!("undeclared state variable {x}"))),
            _ => Err(SmtError::Unsupported("Boolean symbol has no term sort".into())),
        }
    }

    fn infer(&self, t: &GroundTerm) -> Result<Inferred, SmtError> {
        let unknown = |n: &str| SmtError::Unsupported(format!("undeclared symbol {n}"));
        Ok(match t {
            GroundTerm::Var(x, _) => Inferred::Exact(self.sig.state_vars.get(x).cloned().ok_or_else(|| unknown(x))?),
            GroundTerm::Bound(y) => Inferred::Exact(
                self.scope.iter().rev().find(|(n, _)| n == y).map(|(_, s)| s.clone()).ok_or_else(|| unknown(y))?,
            ),
            GroundTerm::Const(c) => Inferred::Exact(self.sig.constants.get(c).cloned().ok_or_else(|| unknown(c))?),
            GroundTerm::Int(_) => Inferred::Numeral,
            GroundTerm::Real(_) => Inferred::Exact(Sort::Real),
            GroundTerm::Apply(f, _) => {
                Inferred::Exact(self.sig.functions.get(f).map(|fs| fs.result.clone()).ok_or_else(|| unknown(f))?)
            }
            GroundTerm::Neg(a) => self.infer(a)?,
            GroundTerm::Arith(ArithOp::Div, ..) => Inferred::Exact(Sort::Real),
            GroundTerm::Arith(_, a, b) => match (self.infer(a)?, self.infer(b)?) {
                (Inferred::Numeral, other) | (other, Inferred::Numeral) => other,
                (a, _) => a,
            },
        })
    }

    fn term(&self, t: &GroundTerm, sort: &Sort) -> Result<String, SmtError> {
        Ok(match t {
            GroundTerm::Var(x, i) => quote(&format!("{x}@{i}")),
            GroundTerm::Bound(n) | GroundTerm::Const(n) => quote(n),
            GroundTerm::Int(v) => int_text(v, *sort == Sort::Real),
            GroundTerm::Real(r) => rational_text(r, &Sort::Real),
            GroundTerm::Apply(f, args) => {
                let fs = self
                    .sig
                    .functions
                    .get(f)
                    .ok_or_else(|| SmtError::Unsupported(format!("undeclared function {f}")))?;
                if args.is_empty() {
                    return Ok(quote(f));
                }
                let parts = args.iter().zip(&fs.args).map(|(a, s)| self.term(a, s)).collect::<Result<Vec<_>, _>>()?;
                format!("({} {})", quote(f), parts.join(" "))
            }
            GroundTerm::Neg(a) => format!("(- {})", self.term(a, sort)?),
            GroundTerm::Arith(op, a, b) => {
                // division always happens at Real
                let inner = if *op == ArithOp::Div { Sort::Real } else { sort.clone() };
                format!("({} {} {})", op.symbol(), self.term(a, &inner)?, self.term(b, &inner)?)
            }
        })
    }

    pub fn formula(&mut self, g: &GroundFormula) -> Result<String, SmtError> {
        Ok(match g {
            GroundFormula::True => "true".into(),
            GroundFormula::False => "false".into(),
            GroundFormula::Symbol(s) => quote(&s.to_string()),
            GroundFormula::Atom(Predicate::User(p), args) => {
                let sorts = self
                    .sig
                    .predicates
                    .get(p)
                    .ok_or_else(|| SmtError::Unsupported(format!("undeclared predicate {p}")))?;
                if args.is_empty() {
                    return Ok(quote(p));
                }
                let parts = args.iter().zip(sorts).map(|(a, s)| self.term(a, s)).collect::<Result<Vec<_>, _>>()?;
                format!("({} {})", quote(p), parts.join(" "))
            }
            GroundFormula::Atom(rel, args) => {
                let [l, r] = args.as_slice() else {
                    return Err(SmtError::Unsupported("relation with other than two arguments".into()));
                };
                let sort = match (self.infer(l)?, self.infer(r)?) {
                    (Inferred::Exact(s), _) | (Inferred::Numeral, Inferred::Exact(s)) => s,
                    (Inferred::Numeral, Inferred::Numeral) => Sort::Int,
                };
                let op = rel.relation_symbol().expect("interpreted relation");
                format!("({op} {} {})", self.term(l, &sort)?, self.term(r, &sort)?)
            }
            GroundFormula::Not(a) => format!("(not {})", self.formula(a)?),
            GroundFormula::And(gs) | GroundFormula::Or(gs) => {
                let and = matches!(g, GroundFormula::And(_));
                match gs.len() {
                    0 => (if and { "true" } else { "false" }).into(),
                    1 => self.formula(&gs[0])?,
                    _ => {
                        let parts = gs.iter().map(|x| self.formula(x)).collect::<Result<Vec<_>, _>>()?;
                        format!("({} {})", if and { "and" } else { "or" }, parts.join(" "))
                    }
                }
            }
            GroundFormula::Implies(a, b) => format!("(=> {} {})", self.formula(a)?, self.formula(b)?),
            GroundFormula::Iff(a, b) => format!("(= {} {})", self.formula(a)?, self.formula(b)?),
            GroundFormula::Exists(v, s, body) | GroundFormula::Forall(v, s, body) => {
                let q = if matches!(g, GroundFormula::Exists(..)) { "exists" } else { "forall" };
                self.scope.push((v.clone(), s.clone()));
                let body = self.formula(body);
                self.scope.pop();
                format!("({q} (({} {})) {})", quote(v), sort_text(s), body?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::label_step;
    use crate::parser::parse;

    fn emit(decls: &str, body: &str, i: usize) -> String {
        let (sig, phi) = parse(&format!("{decls}\nformula: {body};")).unwrap();
        let crate::formula::TemporalFormula::Fo(fo) = phi else { panic!("not first-order") };
        Emitter::new(&sig).formula(&label_step(&fo, i)).unwrap()
    }

    #[test]
    fn literals_follow_context_sort() {
        assert_eq!(emit("var r : Real;", "r = 1", 0), "(= |r@0| 1.0)");
        assert_eq!(emit("var r : Real;", "r < -0.5", 0), "(< |r@0| (- (/ 1.0 2.0)))");
        assert_eq!(emit("var x : Int;", "x = -3", 2), "(= |x@2| (- 3))");
        assert_eq!(emit("var r : Real;", "wnext(r) = r / 10", 0), "(=> |_l@0| (= |r@1| (/ |r@0| 10.0)))");
    }

    #[test]
    fn quantifiers_and_functions() {
        assert_eq!(
            emit("var x : Int;", "forall y:Int . x != y + y", 0),
            "(forall ((|y| Int)) (not (= |x@0| (+ |y| |y|))))"
        );
        assert_eq!(
            emit("var n : Int;\nfun f(Int) : Int;", "f(n) = 2 * f(n - 1)", 1),
            "(= (|f| |n@1|) (* 2 (|f| (- |n@1| 1))))"
        );
    }

    #[test]
    fn values() {
        assert_eq!(value_text(&Value::ratio(-1, 10), &Sort::Real), "(- (/ 1.0 10.0))");
        assert_eq!(value_text(&Value::int(4), &Sort::Real), "4.0");
        assert_eq!(value_text(&Value::Elem { sort: "T".into(), id: 2 }, &Sort::Uninterpreted("T".into())), "|T!val!2|");
    }
}
