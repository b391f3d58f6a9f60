use super::{ArithOp, Atom, FoFormula, FormulaError, Predicate, Signature, Sort, TemporalFormula, Term};

/// Sort of a term. Integer literals are polymorphic numerals that fit both
/// `Int` and `Real` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermSort {
    Exact(Sort),
    Numeral,
}

impl TermSort {
    fn is_numeric(&self) -> bool {
        match self {
            TermSort::Numeral => true,
            TermSort::Exact(s) => s.is_numeric(),
        }
    }

    fn fits(&self, expected: &Sort) -> bool {
        match self {
            TermSort::Numeral => expected.is_numeric(),
            TermSort::Exact(s) => s == expected,
        }
    }

    /// Concrete sort, defaulting numerals to `Int`.
    pub fn resolve(&self) -> Sort {
        match self {
            TermSort::Numeral => Sort::Int,
            TermSort::Exact(s) => s.clone(),
        }
    }
}

fn sort_err(t: &impl std::fmt::Display, message: impl Into<String>) -> FormulaError {
    FormulaError::Sort { term: t.to_string(), message: message.into() }
}

fn unify(t: &Term, a: TermSort, b: TermSort) -> Result<TermSort, FormulaError> {
    match (a, b) {
        (TermSort::Numeral, TermSort::Numeral) => Ok(TermSort::Numeral),
        (TermSort::Numeral, TermSort::Exact(s)) | (TermSort::Exact(s), TermSort::Numeral) if s.is_numeric() => {
            Ok(TermSort::Exact(s))
        }
        (TermSort::Exact(a), TermSort::Exact(b)) if a == b => Ok(TermSort::Exact(a)),
        (a, b) => Err(sort_err(t, format!("mismatched sorts {} and {}", a.resolve(), b.resolve()))),
    }
}

/// Infers the sort of `t`. `scope` lists the enclosing binders, innermost last.
pub fn term_sort(t: &Term, sig: &Signature, scope: &[(String, Sort)]) -> Result<TermSort, FormulaError> {
    match t {
        Term::Var(name) => sig
            .state_vars
            .get(name)
            .map(|s| TermSort::Exact(s.clone()))
            .ok_or_else(|| FormulaError::Undeclared(name.clone())),
        Term::Bound(name) => scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, s)| TermSort::Exact(s.clone()))
            .ok_or_else(|| FormulaError::FreeBound(name.clone())),
        Term::Const(name) => sig
            .constants
            .get(name)
            .map(|s| TermSort::Exact(s.clone()))
            .ok_or_else(|| FormulaError::Undeclared(name.clone())),
        Term::Int(_) => Ok(TermSort::Numeral),
        Term::Real(_) => Ok(TermSort::Exact(Sort::Real)),
        Term::Apply(f, args) => {
            let fs = sig.functions.get(f).ok_or_else(|| FormulaError::Undeclared(f.clone()))?;
            if fs.args.len() != args.len() {
                return Err(sort_err(t, format!("{f} expects {} arguments, got {}", fs.args.len(), args.len())));
            }
            for (arg, expected) in args.iter().zip(&fs.args) {
                let s = term_sort(arg, sig, scope)?;
                if !s.fits(expected) {
                    return Err(sort_err(t, format!("argument `{arg}` has sort {}, expected {expected}", s.resolve())));
                }
            }
            Ok(TermSort::Exact(fs.result.clone()))
        }
        Term::Neg(inner) => {
            let s = term_sort(inner, sig, scope)?;
            if !s.is_numeric() {
                return Err(sort_err(t, "negation of a non-numeric term"));
            }
            Ok(s)
        }
        Term::Arith(op, a, b) => {
            let sa = term_sort(a, sig, scope)?;
            let sb = term_sort(b, sig, scope)?;
            if !sa.is_numeric() || !sb.is_numeric() {
                return Err(sort_err(t, "arithmetic on a non-numeric term"));
            }
            let s = unify(t, sa, sb)?;
            if *op == ArithOp::Div {
                return match s {
                    TermSort::Exact(Sort::Int) => Err(sort_err(t, "division is only defined at sort Real")),
                    _ => Ok(TermSort::Exact(Sort::Real)),
                };
            }
            Ok(s)
        }
        Term::Next(inner) | Term::WNext(inner) => {
            if let Some(Term::Bound(y)) = first_bound(inner) {
                return Err(FormulaError::NextOnBound(y.clone()));
            }
            term_sort(inner, sig, scope)
        }
    }
}

fn first_bound(t: &Term) -> Option<&Term> {
    if matches!(t, Term::Bound(_)) {
        return Some(t);
    }
    t.children().into_iter().find_map(first_bound)
}

pub(crate) fn check_atom(a: &Atom, sig: &Signature, scope: &[(String, Sort)]) -> Result<(), FormulaError> {
    match &a.pred {
        Predicate::User(p) => {
            let sorts = sig.predicates.get(p).ok_or_else(|| FormulaError::Undeclared(p.clone()))?;
            if sorts.len() != a.args.len() {
                return Err(sort_err(&FoFormula::Atom(a.clone()), format!("{p} expects {} arguments", sorts.len())));
            }
            for (arg, expected) in a.args.iter().zip(sorts) {
                let s = term_sort(arg, sig, scope)?;
                if !s.fits(expected) {
                    return Err(sort_err(
                        &FoFormula::Atom(a.clone()),
                        format!("argument `{arg}` has sort {}, expected {expected}", s.resolve()),
                    ));
                }
            }
            Ok(())
        }
        rel => {
            let [lhs, rhs] = a.args.as_slice() else {
                return Err(sort_err(&FoFormula::Atom(a.clone()), "relations are binary"));
            };
            let sl = term_sort(lhs, sig, scope)?;
            let sr = term_sort(rhs, sig, scope)?;
            let shown = FoFormula::Atom(a.clone());
            let joined = match (&sl, &sr) {
                (TermSort::Numeral, TermSort::Numeral) => TermSort::Numeral,
                (TermSort::Numeral, TermSort::Exact(s)) | (TermSort::Exact(s), TermSort::Numeral) if s.is_numeric() => {
                    TermSort::Exact(s.clone())
                }
                (TermSort::Exact(x), TermSort::Exact(y)) if x == y => TermSort::Exact(x.clone()),
                _ => return Err(sort_err(&shown, format!("cannot compare {} with {}", sl.resolve(), sr.resolve()))),
            };
            if *rel != Predicate::Eq && !joined.is_numeric() {
                return Err(sort_err(&shown, "ordering on a non-numeric sort"));
            }
            Ok(())
        }
    }
}

fn check_fo(f: &FoFormula, sig: &Signature, scope: &mut Vec<(String, Sort)>) -> Result<(), FormulaError> {
    match f {
        FoFormula::True | FoFormula::False => Ok(()),
        FoFormula::Atom(a) | FoFormula::NegAtom(a) => check_atom(a, sig, scope),
        FoFormula::And(a, b) | FoFormula::Or(a, b) => {
            check_fo(a, sig, scope)?;
            check_fo(b, sig, scope)
        }
        FoFormula::Exists(v, s, body) | FoFormula::Forall(v, s, body) => {
            if let Sort::Uninterpreted(name) = s {
                if !sig.sorts.contains(name) {
                    return Err(FormulaError::UndeclaredSort(name.clone()));
                }
            }
            if sig.kind_of(v).is_some() {
                return Err(FormulaError::Duplicate(v.clone()));
            }
            scope.push((v.clone(), s.clone()));
            let r = check_fo(body, sig, scope);
            scope.pop();
            r
        }
    }
}

/// Accepts iff every term and atom is well-sorted and every name declared.
pub fn sort_check(phi: &TemporalFormula, sig: &Signature) -> Result<(), FormulaError> {
    let mut result = Ok(());
    phi.for_each_fo(&mut |fo| {
        if result.is_ok() {
            result = check_fo(fo, sig, &mut Vec::new());
        }
    });
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn sig_x() -> Signature {
        let mut sig = Signature::new();
        sig.declare_var("x", Sort::Int).unwrap();
        sig
    }

    #[test]
    fn undeclared_variable() {
        let f = TemporalFormula::atom(Atom::eq(Term::var("x"), Term::var("y")));
        assert_eq!(sort_check(&f, &sig_x()), Err(FormulaError::Undeclared("y".into())));
        assert_eq!(FormulaError::Undeclared("y".into()).to_string(), "undeclared variable y");
    }

    #[test]
    fn decimal_at_int_is_sort_error() {
        let half = Term::Real(BigRational::new(1.into(), 2.into()));
        let f = TemporalFormula::atom(Atom::rel(Predicate::Lt, Term::var("x"), half));
        assert!(matches!(sort_check(&f, &sig_x()), Err(FormulaError::Sort { .. })));
    }

    #[test]
    fn function_application_ok() {
        let mut sig = sig_x();
        sig.declare_fun("f", vec![Sort::Int], Sort::Int).unwrap();
        let f = TemporalFormula::atom(Atom::eq(Term::Apply("f".into(), vec![Term::var("x")]), Term::var("x")));
        assert_eq!(sort_check(&f, &sig), Ok(()));
    }

    #[test]
    fn int_division_rejected_real_division_ok() {
        let f = TemporalFormula::atom(Atom::eq(Term::var("x") / Term::int(10), Term::int(1)));
        assert!(sort_check(&f, &sig_x()).is_err());
        let mut sig = Signature::new();
        sig.declare_var("r", Sort::Real).unwrap();
        let g = TemporalFormula::atom(Atom::eq(Term::var("r") / Term::int(10), Term::int(1)));
        assert_eq!(sort_check(&g, &sig), Ok(()));
    }

    #[test]
    fn next_on_bound_rejected() {
        let body = FoFormula::Atom(Atom::eq(Term::Next(Box::new(Term::Bound("y".into()))), Term::var("x")));
        let f = TemporalFormula::Fo(FoFormula::Exists("y".into(), Sort::Int, Box::new(body)));
        assert_eq!(sort_check(&f, &sig_x()), Err(FormulaError::NextOnBound("y".into())));
    }
}
