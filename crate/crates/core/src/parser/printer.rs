use std::fmt::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::formula::{ArithOp, Atom, FoFormula, Predicate, Signature, TemporalFormula, Term};

// Formula binding levels, loosest first.
const OR: u8 = 1;
const AND: u8 = 2;
const BINARY_TEMPORAL: u8 = 3;
const UNARY: u8 = 4;

// Term binding levels.
const SUM: u8 = 0;
const PRODUCT: u8 = 1;
const NEGATION: u8 = 2;

/// Canonical concrete syntax; parsing the result gives back `phi`.
pub fn print(phi: &TemporalFormula) -> String {
    phi.to_string()
}

/// Declarations followed by a single `formula:` item.
pub fn print_source(sig: &Signature, phi: &TemporalFormula) -> String {
    let mut out = String::new();
    for s in &sig.sorts {
        let _ = writeln!(out, "sort {s};");
    }
    for (name, sort) in &sig.state_vars {
        let _ = writeln!(out, "var {name} : {sort};");
    }
    for (name, sort) in &sig.constants {
        let _ = writeln!(out, "const {name} : {sort};");
    }
    for (name, fs) in &sig.functions {
        let args: Vec<_> = fs.args.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "fun {name}({}) : {};", args.join(", "), fs.result);
    }
    for (name, args) in &sig.predicates {
        let args: Vec<_> = args.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "pred {name}({});", args.join(", "));
    }
    let _ = writeln!(out, "formula: {phi};");
    out
}

fn paren(
    f: &mut fmt::Formatter<'_>,
    needed: bool,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if needed {
        f.write_char('(')?;
        body(f)?;
        f.write_char(')')
    } else {
        body(f)
    }
}

pub(crate) fn write_decimal(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    let (numer, denom) = (r.numer(), r.denom());
    let mut d = denom.clone();
    let mut digits = 0usize;
    let ten = BigInt::from(10);
    let mut scale = BigInt::one();
    // denominators of the form 2^a 5^b have a finite expansion
    for p in [2, 5] {
        let p = BigInt::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
    }
    if !d.is_one() {
        return write!(f, "({}.0 / {}.0)", numer, denom);
    }
    while !(&scale % denom).is_zero() {
        scale *= &ten;
        digits += 1;
    }
    let scaled = numer * (&scale / denom);
    let sign = if scaled.is_negative() { "-" } else { "" };
    let (int_part, frac_part) = scaled.abs().div_rem(&scale);
    if digits == 0 {
        write!(f, "{sign}{int_part}.0")
    } else {
        write!(f, "{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

impl Term {
    fn level(&self) -> u8 {
        match self {
            Term::Arith(ArithOp::Add | ArithOp::Sub, ..) => SUM,
            Term::Arith(..) => PRODUCT,
            Term::Neg(_) => NEGATION,
            _ => NEGATION + 1,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        paren(f, self.level() < min, |f| match self {
            Term::Var(n) | Term::Bound(n) | Term::Const(n) => f.write_str(n),
            Term::Int(v) => write!(f, "{v}"),
            Term::Real(r) => write_decimal(f, r),
            Term::Apply(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.fmt_at(f, SUM)?;
                }
                f.write_char(')')
            }
            Term::Neg(inner) => {
                f.write_char('-')?;
                // `-3` would read back as a literal
                let literal = matches!(&**inner, Term::Int(v) if !v.is_negative())
                    || matches!(&**inner, Term::Real(r) if !r.is_negative());
                if literal {
                    f.write_char('(')?;
                    inner.fmt_at(f, SUM)?;
                    f.write_char(')')
                } else {
                    inner.fmt_at(f, NEGATION)
                }
            }
            Term::Arith(op, a, b) => {
                let lvl = self.level();
                a.fmt_at(f, lvl)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_at(f, lvl + 1)
            }
            Term::Next(inner) => {
                f.write_str("next(")?;
                inner.fmt_at(f, SUM)?;
                f.write_char(')')
            }
            Term::WNext(inner) => {
                f.write_str("wnext(")?;
                inner.fmt_at(f, SUM)?;
                f.write_char(')')
            }
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, SUM)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.pred, self.args.as_slice()) {
            (Predicate::User(p), args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_char(')')
            }
            (rel, [lhs, rhs]) => write!(f, "{lhs} {} {rhs}", rel.relation_symbol().unwrap_or("?")),
            (rel, args) => write!(f, "{rel:?}{args:?}"),
        }
    }
}

impl FoFormula {
    fn level(&self) -> u8 {
        match self {
            FoFormula::Or(..) => OR,
            FoFormula::And(..) => AND,
            FoFormula::Exists(..) | FoFormula::Forall(..) => UNARY,
            _ => UNARY + 1,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        paren(f, self.level() < min, |f| match self {
            FoFormula::True => f.write_str("true"),
            FoFormula::False => f.write_str("false"),
            FoFormula::Atom(a) => write!(f, "{a}"),
            FoFormula::NegAtom(a) if a.pred == Predicate::Eq && a.args.len() == 2 => {
                write!(f, "{} != {}", a.args[0], a.args[1])
            }
            FoFormula::NegAtom(a) if matches!(a.pred, Predicate::User(_)) => write!(f, "!{a}"),
            FoFormula::NegAtom(a) => write!(f, "!({a})"),
            FoFormula::And(a, b) => {
                a.fmt_at(f, AND)?;
                f.write_str(" & ")?;
                b.fmt_at(f, AND + 1)
            }
            FoFormula::Or(a, b) => {
                a.fmt_at(f, OR)?;
                f.write_str(" | ")?;
                b.fmt_at(f, OR + 1)
            }
            FoFormula::Exists(v, s, body) => {
                write!(f, "exists {v}:{s} . ")?;
                body.fmt_at(f, UNARY)
            }
            FoFormula::Forall(v, s, body) => {
                write!(f, "forall {v}:{s} . ")?;
                body.fmt_at(f, UNARY)
            }
        })
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl TemporalFormula {
    fn level(&self) -> u8 {
        match self {
            TemporalFormula::True => UNARY + 1,
            TemporalFormula::Fo(fo) => fo.level(),
            TemporalFormula::Or(..) => OR,
            TemporalFormula::And(..) => AND,
            TemporalFormula::U(a, _) if **a == TemporalFormula::True => UNARY,
            TemporalFormula::R(a, _) if **a == TemporalFormula::falsum() => UNARY,
            TemporalFormula::U(..) | TemporalFormula::R(..) => BINARY_TEMPORAL,
            TemporalFormula::X(_) | TemporalFormula::WX(_) => UNARY,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        use TemporalFormula as T;
        paren(f, self.level() < min, |f| match self {
            T::True => f.write_str("true"),
            T::Fo(fo) => fo.fmt_at(f, 0),
            T::And(a, b) => {
                a.fmt_at(f, AND)?;
                f.write_str(" & ")?;
                b.fmt_at(f, AND + 1)
            }
            T::Or(a, b) => {
                a.fmt_at(f, OR)?;
                f.write_str(" | ")?;
                b.fmt_at(f, OR + 1)
            }
            T::X(a) => {
                f.write_str("X ")?;
                a.fmt_at(f, UNARY)
            }
            T::WX(a) => {
                f.write_str("wX ")?;
                a.fmt_at(f, UNARY)
            }
            T::U(a, b) if **a == T::True => {
                f.write_str("F ")?;
                b.fmt_at(f, UNARY)
            }
            T::R(a, b) if **a == T::falsum() => {
                f.write_str("G ")?;
                b.fmt_at(f, UNARY)
            }
            T::U(a, b) | T::R(a, b) => {
                a.fmt_at(f, BINARY_TEMPORAL + 1)?;
                f.write_str(if matches!(self, T::U(..)) { " U " } else { " R " })?;
                b.fmt_at(f, BINARY_TEMPORAL)
            }
        })
    }
}

impl fmt::Display for TemporalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_print_exactly() {
        let show = |n: i64, d: i64| Term::Real(BigRational::new(n.into(), d.into())).to_string();
        assert_eq!(show(1, 4), "0.25");
        assert_eq!(show(-5, 2), "-2.5");
        assert_eq!(show(3, 1), "3.0");
        assert_eq!(show(1, 100), "0.01");
    }

    #[test]
    fn negation_of_literal_keeps_parentheses() {
        assert_eq!(Term::Neg(Box::new(Term::int(3))).to_string(), "-(3)");
        assert_eq!(Term::Neg(Box::new(Term::var("x"))).to_string(), "-x");
        assert_eq!(Term::int(-3).to_string(), "-3");
    }

    #[test]
    fn shortcuts_and_associativity() {
        let p = TemporalFormula::atom(Atom::eq(Term::var("x"), Term::int(0)));
        let g = TemporalFormula::always(TemporalFormula::eventually(p.clone()));
        assert_eq!(g.to_string(), "G F x = 0");
        let u = TemporalFormula::until(TemporalFormula::until(p.clone(), p.clone()), p.clone());
        assert_eq!(u.to_string(), "(x = 0 U x = 0) U x = 0");
        let sum = Term::var("x") - (Term::var("y") - Term::int(1));
        assert_eq!(sum.to_string(), "x - (y - 1)");
    }
}
