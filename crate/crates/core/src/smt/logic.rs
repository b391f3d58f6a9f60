use crate::formula::{ArithOp, FoFormula, Predicate, Signature, Sort, TemporalFormula, Term};

#[derive(Default)]
struct Usage {
    int: bool,
    real: bool,
    nonlinear: bool,
    quantified: bool,
    ordered: bool,
}

impl Usage {
    fn sort(&mut self, s: &Sort) {
        match s {
            Sort::Int => self.int = true,
            Sort::Real => self.real = true,
            Sort::Uninterpreted(_) => {}
        }
    }

    fn term(&mut self, t: &Term) {
        t.any(&mut |t| {
            match t {
                Term::Real(_) => self.real = true,
                Term::Arith(ArithOp::Mul, a, b) if !a.is_numeral() && !b.is_numeral() => self.nonlinear = true,
                Term::Arith(ArithOp::Div, _, b) if !b.is_numeral() => self.nonlinear = true,
                _ => {}
            }
            false
        });
    }

    fn fo(&mut self, f: &FoFormula) {
        match f {
            FoFormula::Exists(_, s, body) | FoFormula::Forall(_, s, body) => {
                self.quantified = true;
                self.sort(s);
                self.fo(body);
            }
            FoFormula::And(a, b) | FoFormula::Or(a, b) => {
                self.fo(a);
                self.fo(b);
            }
            FoFormula::Atom(a) | FoFormula::NegAtom(a) => {
                a.args.iter().for_each(|t| self.term(t));
                if !matches!(a.pred, Predicate::Eq | Predicate::User(_)) {
                    self.ordered = true;
                }
            }
            FoFormula::True | FoFormula::False => {}
        }
    }
}

/// Smallest standard logic covering the signature and formulas: `ALL`
/// for quantified or mixed integer/real problems, otherwise
/// `QF_` + `UF`? + `N`/`L` + `IA`/`RA`, or `QF_UF` without arithmetic.
pub fn infer_logic<'a>(sig: &Signature, formulas: impl IntoIterator<Item = &'a TemporalFormula>) -> String {
    let mut u = Usage::default();
    sig.state_vars.values().chain(sig.constants.values()).for_each(|s| u.sort(s));
    for fs in sig.functions.values() {
        fs.args.iter().chain([&fs.result]).for_each(|s| u.sort(s));
    }
    sig.predicates.values().flatten().for_each(|s| u.sort(s));
    for phi in formulas {
        phi.for_each_fo(&mut |f| u.fo(f));
    }
    if u.ordered && !u.real {
        u.int = true;
    }
    if u.quantified || (u.int && u.real) {
        return "ALL".into();
    }
    let uf = sig.uses_uninterpreted();
    if !u.int && !u.real {
        return "QF_UF".into();
    }
    format!(
        "QF_{}{}{}A",
        if uf { "UF" } else { "" },
        if u.nonlinear { "N" } else { "L" },
        if u.real { "R" } else { "I" }
    )
}
