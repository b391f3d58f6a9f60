use std::collections::BTreeSet;
use std::fmt::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::SteppedSymbol;
use crate::formula::{ArithOp, Predicate, Sort};
use crate::parser::write_decimal;

/// A term over the stepped signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundTerm {
    /// `x@i`
    Var(String, usize),
    Bound(String),
    Const(String),
    Int(BigInt),
    Real(BigRational),
    Apply(String, Vec<GroundTerm>),
    Neg(Box<GroundTerm>),
    Arith(ArithOp, Box<GroundTerm>, Box<GroundTerm>),
}

/// A first-order formula over the stepped signature. `_l@i` and `_g@n@i`
/// are Boolean constants ([`GroundFormula::Symbol`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundFormula {
    True,
    False,
    Symbol(SteppedSymbol),
    Atom(Predicate, Vec<GroundTerm>),
    Not(Box<GroundFormula>),
    And(Vec<GroundFormula>),
    Or(Vec<GroundFormula>),
    Implies(Box<GroundFormula>, Box<GroundFormula>),
    Iff(Box<GroundFormula>, Box<GroundFormula>),
    Exists(String, Sort, Box<GroundFormula>),
    Forall(String, Sort, Box<GroundFormula>),
}

impl GroundTerm {
    pub fn for_each_var(&self, f: &mut impl FnMut(&str, usize)) {
        match self {
            GroundTerm::Var(x, i) => f(x, *i),
            GroundTerm::Apply(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
            GroundTerm::Neg(a) => a.for_each_var(f),
            GroundTerm::Arith(_, a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
            _ => {}
        }
    }
}

impl GroundFormula {
    /// Conjunction dropping `true` members; `false` absorbs.
    pub fn and(items: Vec<GroundFormula>) -> GroundFormula {
        let mut kept = Vec::with_capacity(items.len());
        for g in items {
            match g {
                GroundFormula::True => {}
                GroundFormula::False => return GroundFormula::False,
                g => kept.push(g),
            }
        }
        match kept.len() {
            0 => GroundFormula::True,
            1 => kept.pop().expect("one member"),
            _ => GroundFormula::And(kept),
        }
    }

    /// Disjunction dropping `false` members; `true` absorbs.
    pub fn or(items: Vec<GroundFormula>) -> GroundFormula {
        let mut kept = Vec::with_capacity(items.len());
        for g in items {
            match g {
                GroundFormula::False => {}
                GroundFormula::True => return GroundFormula::True,
                g => kept.push(g),
            }
        }
        match kept.len() {
            0 => GroundFormula::False,
            1 => kept.pop().expect("one member"),
            _ => GroundFormula::Or(kept),
        }
    }

    pub fn negate(g: GroundFormula) -> GroundFormula {
        GroundFormula::Not(Box::new(g))
    }

    /// Every stepped symbol occurring in the formula.
    pub fn symbols(&self) -> BTreeSet<SteppedSymbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<SteppedSymbol>) {
        match self {
            GroundFormula::True | GroundFormula::False => {}
            GroundFormula::Symbol(s) => {
                out.insert(s.clone());
            }
            GroundFormula::Atom(_, args) => {
                for a in args {
                    a.for_each_var(&mut |x, i| {
                        out.insert(SteppedSymbol::Var(x.to_string(), i));
                    });
                }
            }
            GroundFormula::Not(g) | GroundFormula::Exists(_, _, g) | GroundFormula::Forall(_, _, g) => {
                g.collect_symbols(out)
            }
            GroundFormula::And(gs) | GroundFormula::Or(gs) => gs.iter().for_each(|g| g.collect_symbols(out)),
            GroundFormula::Implies(a, b) | GroundFormula::Iff(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }

    pub fn is_quantified(&self) -> bool {
        match self {
            GroundFormula::Exists(..) | GroundFormula::Forall(..) => true,
            GroundFormula::Not(g) => g.is_quantified(),
            GroundFormula::And(gs) | GroundFormula::Or(gs) => gs.iter().any(Self::is_quantified),
            GroundFormula::Implies(a, b) | GroundFormula::Iff(a, b) => a.is_quantified() || b.is_quantified(),
            _ => false,
        }
    }
}

// Display: same conventions as the source printer, with `<->` and `->`
// always parenthesised when nested.

const IFF: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;
const ATOMIC: u8 = 4;

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

impl GroundTerm {
    fn level(&self) -> u8 {
        match self {
            GroundTerm::Arith(ArithOp::Add | ArithOp::Sub, ..) => 0,
            GroundTerm::Arith(..) => 1,
            GroundTerm::Neg(_) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        paren(f, self.level() < min, |f| match self {
            GroundTerm::Var(x, i) => write!(f, "{x}@{i}"),
            GroundTerm::Bound(n) | GroundTerm::Const(n) => f.write_str(n),
            GroundTerm::Int(v) => write!(f, "{v}"),
            GroundTerm::Real(r) => write_decimal(f, r),
            GroundTerm::Apply(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.fmt_at(f, 0)?;
                }
                f.write_char(')')
            }
            GroundTerm::Neg(a) => {
                f.write_char('-')?;
                a.fmt_at(f, 3)
            }
            GroundTerm::Arith(op, a, b) => {
                let lvl = self.level();
                a.fmt_at(f, lvl)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_at(f, lvl + 1)
            }
        })
    }
}

impl fmt::Display for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl GroundFormula {
    fn level(&self) -> u8 {
        match self {
            GroundFormula::Implies(..) | GroundFormula::Iff(..) => IFF,
            GroundFormula::Exists(..) | GroundFormula::Forall(..) => IFF,
            GroundFormula::Or(gs) if gs.len() > 1 => OR,
            GroundFormula::And(gs) if gs.len() > 1 => AND,
            GroundFormula::Or(gs) | GroundFormula::And(gs) => gs.first().map_or(ATOMIC, Self::level),
            GroundFormula::Not(_) => NOT,
            GroundFormula::Atom(p, _) if p.relation_symbol().is_some() => NOT,
            _ => ATOMIC,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        paren(f, self.level() < min, |f| match self {
            GroundFormula::True => f.write_str("true"),
            GroundFormula::False => f.write_str("false"),
            GroundFormula::Symbol(s) => write!(f, "{s}"),
            GroundFormula::Atom(p, args) => match (p.relation_symbol(), args.as_slice()) {
                (Some(rel), [l, r]) => write!(f, "{l} {rel} {r}"),
                _ => {
                    let name = match p {
                        Predicate::User(n) => n.as_str(),
                        _ => "?",
                    };
                    write!(f, "{name}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_char(')')
                }
            },
            GroundFormula::Not(g) => {
                f.write_char('!')?;
                g.fmt_at(f, ATOMIC)
            }
            GroundFormula::And(gs) | GroundFormula::Or(gs) => {
                let and = matches!(self, GroundFormula::And(_));
                if gs.is_empty() {
                    return f.write_str(if and { "true" } else { "false" });
                }
                let (lvl, sep) = if and { (AND, " & ") } else { (OR, " | ") };
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    g.fmt_at(f, lvl)?;
                }
                Ok(())
            }
            GroundFormula::Implies(a, b) => {
                a.fmt_at(f, OR)?;
                f.write_str(" -> ")?;
                b.fmt_at(f, OR)
            }
            GroundFormula::Iff(a, b) => {
                a.fmt_at(f, OR)?;
                f.write_str(" <-> ")?;
                b.fmt_at(f, OR)
            }
            GroundFormula::Exists(v, s, body) | GroundFormula::Forall(v, s, body) => {
                let q = if matches!(self, GroundFormula::Exists(..)) { "exists" } else { "forall" };
                write!(f, "{q} {v}:{s} . ")?;
                body.fmt_at(f, IFF)
            }
        })
    }
}

impl fmt::Display for GroundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, IFF)
    }
}
