//! Terms, first-order formulas and temporal formulas, plus the signature
//! they are interpreted over.
//!
//! The grammar has three layers. [`Term`]s are built from state variables,
//! bound variables, constants, literals, function applications, arithmetic
//! and the two next-state constructors. [`FoFormula`] is the first-order
//! layer (always in negation normal form). [`TemporalFormula`] is the
//! temporal layer whose leaves are first-order formulas.
//!
//! Full syntax with free negation, implication and the `F`/`G` shortcuts is
//! represented by [`Formula`] and normalised with [`to_nnf`].

mod closure;
mod flatten;
mod nnf;
mod sort_check;

use std::fmt;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use closure::{closure, ClosureId, ClosureNode, ClosureTable};
pub use flatten::flatten_next;
pub use nnf::to_nnf;
pub(crate) use sort_check::check_atom;
pub use sort_check::{sort_check, term_sort, TermSort};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
    #[error("undeclared sort {0}")]
    UndeclaredSort(String),
    #[error("identifier `{0}` is reserved (user names may not start with `_` or contain `@`)")]
    ReservedName(String),
    #[error("undeclared variable {0}")]
    Undeclared(String),
    #[error("sort error in `{term}`: {message}")]
    Sort { term: String, message: String },
    #[error("temporal operator under quantifier")]
    TemporalUnderQuantifier,
    #[error("next-state term applied to bound variable {0}")]
    NextOnBound(String),
    #[error("free bound variable {0} outside of any quantifier")]
    FreeBound(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Int,
    Real,
    Uninterpreted(String),
}

impl Sort {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Sort::Int | Sort::Real)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Int => f.write_str("Int"),
            Sort::Real => f.write_str("Real"),
            Sort::Uninterpreted(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunSig {
    pub args: Vec<Sort>,
    pub result: Sort,
}

/// What a declared name refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Sort,
    StateVar,
    Constant,
    Function,
    Predicate,
}

/// The declared symbols a formula is interpreted over. Names are unique
/// across all categories; declaration order is preserved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub state_vars: IndexMap<String, Sort>,
    pub constants: IndexMap<String, Sort>,
    pub functions: IndexMap<String, FunSig>,
    pub predicates: IndexMap<String, Vec<Sort>>,
}

pub fn is_reserved_name(name: &str) -> bool {
    name.starts_with('_') || name.contains('@')
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.sorts.iter().any(|s| s == name) {
            Some(SymbolKind::Sort)
        } else if self.state_vars.contains_key(name) {
            Some(SymbolKind::StateVar)
        } else if self.constants.contains_key(name) {
            Some(SymbolKind::Constant)
        } else if self.functions.contains_key(name) {
            Some(SymbolKind::Function)
        } else if self.predicates.contains_key(name) {
            Some(SymbolKind::Predicate)
        } else {
            None
        }
    }

    fn check_fresh(&self, name: &str) -> Result<(), FormulaError> {
        if is_reserved_name(name) {
            return Err(FormulaError::ReservedName(name.to_string()));
        }
        if self.kind_of(name).is_some() {
            return Err(FormulaError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    fn check_sort(&self, sort: &Sort) -> Result<(), FormulaError> {
        match sort {
            Sort::Uninterpreted(name) if !self.sorts.contains(name) => Err(FormulaError::UndeclaredSort(name.clone())),
            _ => Ok(()),
        }
    }

    pub fn declare_sort(&mut self, name: &str) -> Result<(), FormulaError> {
        self.check_fresh(name)?;
        self.sorts.push(name.to_string());
        Ok(())
    }

    pub fn declare_var(&mut self, name: &str, sort: Sort) -> Result<(), FormulaError> {
        self.check_fresh(name)?;
        self.check_sort(&sort)?;
        self.state_vars.insert(name.to_string(), sort);
        Ok(())
    }

    pub fn declare_const(&mut self, name: &str, sort: Sort) -> Result<(), FormulaError> {
        self.check_fresh(name)?;
        self.check_sort(&sort)?;
        self.constants.insert(name.to_string(), sort);
        Ok(())
    }

    pub fn declare_fun(&mut self, name: &str, args: Vec<Sort>, result: Sort) -> Result<(), FormulaError> {
        self.check_fresh(name)?;
        for s in args.iter().chain(std::iter::once(&result)) {
            self.check_sort(s)?;
        }
        self.functions.insert(name.to_string(), FunSig { args, result });
        Ok(())
    }

    pub fn declare_pred(&mut self, name: &str, args: Vec<Sort>) -> Result<(), FormulaError> {
        self.check_fresh(name)?;
        for s in &args {
            self.check_sort(s)?;
        }
        self.predicates.insert(name.to_string(), args);
        Ok(())
    }

    /// Adds an internal state variable `<prefix><n>` with the first unused `n`.
    pub fn fresh_var(&mut self, prefix: &str, sort: Sort) -> String {
        let mut n = 0usize;
        loop {
            let name = format!("{prefix}{n}");
            if self.kind_of(&name).is_none() {
                self.state_vars.insert(name.clone(), sort);
                return name;
            }
            n += 1;
        }
    }

    /// True when there are uninterpreted sorts, functions or predicates.
    pub fn uses_uninterpreted(&self) -> bool {
        !self.sorts.is_empty() || !self.functions.is_empty() || !self.predicates.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// A state variable (the set V).
    Var(String),
    /// A quantified variable (the set W).
    Bound(String),
    Const(String),
    Int(BigInt),
    Real(BigRational),
    Apply(String, Vec<Term>),
    Neg(Box<Term>),
    Arith(ArithOp, Box<Term>, Box<Term>),
    /// Strong next. Flat formulas only apply it to [`Term::Var`].
    Next(Box<Term>),
    /// Weak next. Flat formulas only apply it to [`Term::Var`].
    WNext(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn int(v: i64) -> Term {
        Term::Int(BigInt::from(v))
    }

    pub fn next(name: &str) -> Term {
        Term::Next(Box::new(Term::var(name)))
    }

    pub fn wnext(name: &str) -> Term {
        Term::WNext(Box::new(Term::var(name)))
    }

    pub fn arith(op: ArithOp, lhs: Term, rhs: Term) -> Term {
        Term::Arith(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Apply(_, args) => args.iter().collect(),
            Term::Neg(t) | Term::Next(t) | Term::WNext(t) => vec![t],
            Term::Arith(_, a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn any(&self, pred: &mut impl FnMut(&Term) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn has_next(&self) -> bool {
        self.any(&mut |t| matches!(t, Term::Next(_)))
    }

    pub fn has_wnext(&self) -> bool {
        self.any(&mut |t| matches!(t, Term::WNext(_)))
    }

    pub fn is_numeral(&self) -> bool {
        match self {
            Term::Int(_) | Term::Real(_) => true,
            Term::Neg(t) => t.is_numeral(),
            _ => false,
        }
    }

    /// Next/WNext only ever wrap a state variable.
    pub fn is_flat(&self) -> bool {
        !self.any(&mut |t| match t {
            Term::Next(inner) | Term::WNext(inner) => !matches!(**inner, Term::Var(_)),
            _ => false,
        })
    }
}

macro_rules! term_op {
    ($trait:ident, $method:ident, $op:expr) => {
        impl std::ops::$trait for Term {
            type Output = Term;

            fn $method(self, rhs: Term) -> Term {
                Term::arith($op, self, rhs)
            }
        }
    };
}

term_op!(Add, add, ArithOp::Add);
term_op!(Sub, sub, ArithOp::Sub);
term_op!(Mul, mul, ArithOp::Mul);
term_op!(Div, div, ArithOp::Div);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Predicate {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
    User(String),
}

impl Predicate {
    pub fn relation_symbol(&self) -> Option<&'static str> {
        Some(match self {
            Predicate::Eq => "=",
            Predicate::Lt => "<",
            Predicate::Le => "<=",
            Predicate::Gt => ">",
            Predicate::Ge => ">=",
            Predicate::User(_) => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Predicate,
    pub args: Vec<Term>,
}

/// Strength of an atom with respect to the end of the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomStrength {
    /// Contains a strong next term: false at the last state.
    Strong,
    /// Contains weak next terms only: true at the last state.
    Weak,
    /// No next-state terms.
    Rigid,
}

impl Atom {
    pub fn new(pred: Predicate, args: Vec<Term>) -> Self {
        Atom { pred, args }
    }

    pub fn rel(pred: Predicate, lhs: Term, rhs: Term) -> Self {
        Atom { pred, args: vec![lhs, rhs] }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Atom::rel(Predicate::Eq, lhs, rhs)
    }

    pub fn strength(&self) -> AtomStrength {
        classify_atom(self)
    }
}

/// Mixed atoms (both kinds of next) are strong.
pub fn classify_atom(atom: &Atom) -> AtomStrength {
    if atom.args.iter().any(Term::has_next) {
        AtomStrength::Strong
    } else if atom.args.iter().any(Term::has_wnext) {
        AtomStrength::Weak
    } else {
        AtomStrength::Rigid
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoFormula {
    True,
    False,
    Atom(Atom),
    NegAtom(Atom),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Exists(String, Sort, Box<FoFormula>),
    Forall(String, Sort, Box<FoFormula>),
}

impl FoFormula {
    pub fn atom(a: Atom) -> Self {
        FoFormula::Atom(a)
    }

    pub fn and(a: FoFormula, b: FoFormula) -> Self {
        FoFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FoFormula, b: FoFormula) -> Self {
        FoFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn is_quantified(&self) -> bool {
        match self {
            FoFormula::Exists(..) | FoFormula::Forall(..) => true,
            FoFormula::And(a, b) | FoFormula::Or(a, b) => a.is_quantified() || b.is_quantified(),
            _ => false,
        }
    }

    /// Visits every (possibly negated) atom.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            FoFormula::Atom(a) | FoFormula::NegAtom(a) => f(a),
            FoFormula::And(a, b) | FoFormula::Or(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
            FoFormula::Exists(_, _, body) | FoFormula::Forall(_, _, body) => body.for_each_atom(f),
            FoFormula::True | FoFormula::False => {}
        }
    }

    /// Rewrites every atom, keeping polarity.
    pub fn map_atoms<E>(&self, f: &mut impl FnMut(&Atom) -> Result<Atom, E>) -> Result<FoFormula, E> {
        Ok(match self {
            FoFormula::Atom(a) => FoFormula::Atom(f(a)?),
            FoFormula::NegAtom(a) => FoFormula::NegAtom(f(a)?),
            FoFormula::And(a, b) => FoFormula::and(a.map_atoms(f)?, b.map_atoms(f)?),
            FoFormula::Or(a, b) => FoFormula::or(a.map_atoms(f)?, b.map_atoms(f)?),
            FoFormula::Exists(v, s, body) => FoFormula::Exists(v.clone(), s.clone(), Box::new(body.map_atoms(f)?)),
            FoFormula::Forall(v, s, body) => FoFormula::Forall(v.clone(), s.clone(), Box::new(body.map_atoms(f)?)),
            FoFormula::True => FoFormula::True,
            FoFormula::False => FoFormula::False,
        })
    }
}

/// Temporal layer in negation normal form. `⊥` is `Fo(FoFormula::False)`.
///
/// Maximal first-order subformulas are kept as a single [`TemporalFormula::Fo`]
/// leaf; the smart constructors [`TemporalFormula::and`] and
/// [`TemporalFormula::or`] maintain that shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TemporalFormula {
    True,
    Fo(FoFormula),
    And(Box<TemporalFormula>, Box<TemporalFormula>),
    Or(Box<TemporalFormula>, Box<TemporalFormula>),
    X(Box<TemporalFormula>),
    WX(Box<TemporalFormula>),
    U(Box<TemporalFormula>, Box<TemporalFormula>),
    R(Box<TemporalFormula>, Box<TemporalFormula>),
}

impl TemporalFormula {
    pub fn fo(f: FoFormula) -> Self {
        match f {
            FoFormula::True => TemporalFormula::True,
            f => TemporalFormula::Fo(f),
        }
    }

    pub fn atom(a: Atom) -> Self {
        TemporalFormula::Fo(FoFormula::Atom(a))
    }

    pub fn falsum() -> Self {
        TemporalFormula::Fo(FoFormula::False)
    }

    fn as_fo(&self) -> Option<FoFormula> {
        match self {
            TemporalFormula::True => Some(FoFormula::True),
            TemporalFormula::Fo(f) => Some(f.clone()),
            _ => None,
        }
    }

    fn lift(&self, other: &Self, both_fo: impl FnOnce(FoFormula, FoFormula) -> FoFormula) -> Option<Self> {
        // `true` only joins the first-order layer when paired with a genuine
        // first-order leaf.
        if matches!(self, TemporalFormula::Fo(_)) || matches!(other, TemporalFormula::Fo(_)) {
            if let (Some(a), Some(b)) = (self.as_fo(), other.as_fo()) {
                return Some(TemporalFormula::Fo(both_fo(a, b)));
            }
        }
        None
    }

    pub fn and(a: TemporalFormula, b: TemporalFormula) -> Self {
        a.lift(&b, FoFormula::and).unwrap_or_else(|| TemporalFormula::And(Box::new(a), Box::new(b)))
    }

    pub fn or(a: TemporalFormula, b: TemporalFormula) -> Self {
        a.lift(&b, FoFormula::or).unwrap_or_else(|| TemporalFormula::Or(Box::new(a), Box::new(b)))
    }

    /// Left-associated conjunction; `true` when empty.
    pub fn and_all(items: impl IntoIterator<Item = TemporalFormula>) -> Self {
        items.into_iter().reduce(TemporalFormula::and).unwrap_or(TemporalFormula::True)
    }

    pub fn x(f: TemporalFormula) -> Self {
        TemporalFormula::X(Box::new(f))
    }

    pub fn wx(f: TemporalFormula) -> Self {
        TemporalFormula::WX(Box::new(f))
    }

    pub fn until(a: TemporalFormula, b: TemporalFormula) -> Self {
        TemporalFormula::U(Box::new(a), Box::new(b))
    }

    pub fn release(a: TemporalFormula, b: TemporalFormula) -> Self {
        TemporalFormula::R(Box::new(a), Box::new(b))
    }

    /// `F φ ≡ ⊤ U φ`
    pub fn eventually(f: TemporalFormula) -> Self {
        TemporalFormula::until(TemporalFormula::True, f)
    }

    /// `G φ ≡ ⊥ R φ`
    pub fn always(f: TemporalFormula) -> Self {
        TemporalFormula::release(TemporalFormula::falsum(), f)
    }

    /// `n`-fold nesting of `X`.
    pub fn x_pow(n: usize, f: TemporalFormula) -> Self {
        (0..n).fold(f, |acc, _| TemporalFormula::x(acc))
    }

    pub fn is_first_order(&self) -> bool {
        matches!(self, TemporalFormula::True | TemporalFormula::Fo(_))
    }

    pub fn children(&self) -> Vec<&TemporalFormula> {
        match self {
            TemporalFormula::True | TemporalFormula::Fo(_) => Vec::new(),
            TemporalFormula::X(a) | TemporalFormula::WX(a) => vec![a],
            TemporalFormula::And(a, b)
            | TemporalFormula::Or(a, b)
            | TemporalFormula::U(a, b)
            | TemporalFormula::R(a, b) => vec![a, b],
        }
    }

    /// Number of nodes of the temporal layer (first-order leaves count one).
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Self::size).sum::<usize>()
    }

    pub fn for_each_fo<'a>(&'a self, f: &mut impl FnMut(&'a FoFormula)) {
        if let TemporalFormula::Fo(fo) = self {
            f(fo);
        }
        for c in self.children() {
            c.for_each_fo(f);
        }
    }

    pub fn is_quantified(&self) -> bool {
        let mut found = false;
        self.for_each_fo(&mut |fo| found |= fo.is_quantified());
        found
    }

    pub fn map_fo<E>(&self, f: &mut impl FnMut(&FoFormula) -> Result<FoFormula, E>) -> Result<TemporalFormula, E> {
        use TemporalFormula as T;
        Ok(match self {
            T::True => T::True,
            T::Fo(fo) => T::fo(f(fo)?),
            T::And(a, b) => T::and(a.map_fo(f)?, b.map_fo(f)?),
            T::Or(a, b) => T::or(a.map_fo(f)?, b.map_fo(f)?),
            T::X(a) => T::x(a.map_fo(f)?),
            T::WX(a) => T::wx(a.map_fo(f)?),
            T::U(a, b) => T::until(a.map_fo(f)?, b.map_fo(f)?),
            T::R(a, b) => T::release(a.map_fo(f)?, b.map_fo(f)?),
        })
    }

    /// Every Next/WNext wraps a state variable.
    pub fn is_flat(&self) -> bool {
        let mut flat = true;
        self.for_each_fo(&mut |fo| {
            fo.for_each_atom(&mut |a| flat &= a.args.iter().all(Term::is_flat));
        });
        flat
    }
}

/// Full surface syntax, before negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Sort, Box<Formula>),
    Forall(String, Sort, Box<Formula>),
    X(Box<Formula>),
    WX(Box<Formula>),
    U(Box<Formula>, Box<Formula>),
    R(Box<Formula>, Box<Formula>),
    F(Box<Formula>),
    G(Box<Formula>),
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
}

impl From<&FoFormula> for Formula {
    fn from(f: &FoFormula) -> Self {
        match f {
            FoFormula::True => Formula::True,
            FoFormula::False => Formula::False,
            FoFormula::Atom(a) => Formula::Atom(a.clone()),
            FoFormula::NegAtom(a) => Formula::negate(Formula::Atom(a.clone())),
            FoFormula::And(a, b) => Formula::And(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
            FoFormula::Or(a, b) => Formula::Or(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
            FoFormula::Exists(v, s, b) => Formula::Exists(v.clone(), s.clone(), Box::new(b.as_ref().into())),
            FoFormula::Forall(v, s, b) => Formula::Forall(v.clone(), s.clone(), Box::new(b.as_ref().into())),
        }
    }
}

impl From<&TemporalFormula> for Formula {
    fn from(f: &TemporalFormula) -> Self {
        use TemporalFormula as T;
        let b = |x: &T| Box::new(Formula::from(x));
        match f {
            T::True => Formula::True,
            T::Fo(fo) => fo.into(),
            T::And(x, y) => Formula::And(b(x), b(y)),
            T::Or(x, y) => Formula::Or(b(x), b(y)),
            T::X(x) => Formula::X(b(x)),
            T::WX(x) => Formula::WX(b(x)),
            T::U(x, y) => Formula::U(b(x), b(y)),
            T::R(x, y) => Formula::R(b(x), b(y)),
        }
    }
}
