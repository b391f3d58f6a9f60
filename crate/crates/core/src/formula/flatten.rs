use std::collections::BTreeMap;

use super::{classify_atom, Atom, AtomStrength, FoFormula, FormulaError, Signature, Sort, TemporalFormula, Term};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shift {
    Strong,
    Weak,
}

struct Flattener<'a> {
    sig: &'a mut Signature,
    /// `(x, j)` ↦ variable holding the value of `x` `j` states ahead.
    ahead: BTreeMap<(String, usize), String>,
    /// Depth ↦ pair of variables that are equal exactly when that many
    /// successor states exist.
    guards: BTreeMap<usize, (String, String)>,
}

/// Removes nested next-state terms.
///
/// A variable read `d ≥ 2` states ahead is replaced by a next over a fresh
/// `_flat<n>` variable constrained by `G(_flat = wnext(prev))`. Next over a
/// non-variable term is pushed down to the variables. When the rewritten
/// atom no longer carries the original's definedness requirement, it is
/// guarded by a fresh equality that holds exactly when enough successor
/// states exist, so strong atoms stay false and weak atoms stay true near the
/// end of the trace. Already-flat formulas are returned unchanged.
pub fn flatten_next(phi: &TemporalFormula, sig: &mut Signature) -> Result<TemporalFormula, FormulaError> {
    if phi.is_flat() {
        return Ok(phi.clone());
    }
    let mut fl = Flattener { sig, ahead: BTreeMap::new(), guards: BTreeMap::new() };
    let body = phi.map_fo(&mut |fo| fl.fo(fo))?;

    let mut defs = Vec::new();
    for ((x, j), z) in fl.ahead.iter() {
        let prev = if *j == 1 { x.clone() } else { fl.ahead[&(x.clone(), j - 1)].clone() };
        defs.push(TemporalFormula::always(TemporalFormula::atom(Atom::eq(Term::var(z), Term::wnext(&prev)))));
    }
    for (depth, (a, b)) in fl.guards.iter() {
        let same = TemporalFormula::atom(Atom::eq(Term::var(a), Term::var(b)));
        let differ = TemporalFormula::Fo(FoFormula::NegAtom(Atom::eq(Term::var(a), Term::var(b))));
        let has_more = TemporalFormula::x_pow(*depth, TemporalFormula::True);
        let ends = (0..*depth).fold(TemporalFormula::falsum(), |acc, _| TemporalFormula::wx(acc));
        defs.push(TemporalFormula::always(TemporalFormula::or(
            TemporalFormula::and(same, has_more),
            TemporalFormula::and(differ, ends),
        )));
    }
    Ok(TemporalFormula::and_all(std::iter::once(body).chain(defs)))
}

impl Flattener<'_> {
    fn fo(&mut self, f: &FoFormula) -> Result<FoFormula, FormulaError> {
        Ok(match f {
            FoFormula::Atom(a) => self.atom(a, true)?,
            FoFormula::NegAtom(a) => self.atom(a, false)?,
            FoFormula::And(a, b) => FoFormula::and(self.fo(a)?, self.fo(b)?),
            FoFormula::Or(a, b) => FoFormula::or(self.fo(a)?, self.fo(b)?),
            FoFormula::Exists(v, s, b) => FoFormula::Exists(v.clone(), s.clone(), Box::new(self.fo(b)?)),
            FoFormula::Forall(v, s, b) => FoFormula::Forall(v.clone(), s.clone(), Box::new(self.fo(b)?)),
            FoFormula::True => FoFormula::True,
            FoFormula::False => FoFormula::False,
        })
    }

    fn atom(&mut self, a: &Atom, positive: bool) -> Result<FoFormula, FormulaError> {
        let lit = |atom: Atom, pos: bool| if pos { FoFormula::Atom(atom) } else { FoFormula::NegAtom(atom) };
        if a.args.iter().all(Term::is_flat) {
            return Ok(lit(a.clone(), positive));
        }
        let strength = classify_atom(a);
        let mut depth = 0;
        let mut args = Vec::with_capacity(a.args.len());
        for t in &a.args {
            args.push(self.push(t, &mut Vec::new(), &mut depth)?);
        }
        let rewritten = Atom { pred: a.pred.clone(), args };
        let new_strength = classify_atom(&rewritten);
        let new_depth = usize::from(new_strength != AtomStrength::Rigid);
        if depth == new_depth && strength == new_strength {
            return Ok(lit(rewritten, positive));
        }
        let guard = self.guard(depth);
        // strong: A ∧ guard; weak: ¬guard ∨ A
        Ok(match (strength, positive) {
            (AtomStrength::Strong, true) => FoFormula::and(FoFormula::Atom(rewritten), FoFormula::Atom(guard)),
            (AtomStrength::Strong, false) => FoFormula::or(FoFormula::NegAtom(rewritten), FoFormula::NegAtom(guard)),
            (_, true) => FoFormula::or(FoFormula::NegAtom(guard), FoFormula::Atom(rewritten)),
            (_, false) => FoFormula::and(FoFormula::Atom(guard), FoFormula::NegAtom(rewritten)),
        })
    }

    fn push(&mut self, t: &Term, shifts: &mut Vec<Shift>, depth: &mut usize) -> Result<Term, FormulaError> {
        *depth = (*depth).max(shifts.len());
        Ok(match t {
            Term::Var(x) => match shifts.len() {
                0 => t.clone(),
                1 => wrap(shifts[0], Term::Var(x.clone())),
                d => wrap(shifts[0], Term::Var(self.ahead_var(x, d - 1)?)),
            },
            Term::Bound(y) if !shifts.is_empty() => return Err(FormulaError::NextOnBound(y.clone())),
            Term::Bound(_) | Term::Const(_) | Term::Int(_) | Term::Real(_) => t.clone(),
            Term::Apply(f, args) => {
                let mut out = Vec::with_capacity(args.len());
                for a in args {
                    out.push(self.push(a, shifts, depth)?);
                }
                Term::Apply(f.clone(), out)
            }
            Term::Neg(inner) => Term::Neg(Box::new(self.push(inner, shifts, depth)?)),
            Term::Arith(op, a, b) => {
                let a = self.push(a, shifts, depth)?;
                let b = self.push(b, shifts, depth)?;
                Term::arith(*op, a, b)
            }
            Term::Next(inner) | Term::WNext(inner) => {
                shifts.push(if matches!(t, Term::Next(_)) { Shift::Strong } else { Shift::Weak });
                let r = self.push(inner, shifts, depth);
                shifts.pop();
                r?
            }
        })
    }

    fn ahead_var(&mut self, x: &str, j: usize) -> Result<String, FormulaError> {
        let sort = self.sig.state_vars.get(x).cloned().ok_or_else(|| FormulaError::Undeclared(x.to_string()))?;
        for step in 1..=j {
            if !self.ahead.contains_key(&(x.to_string(), step)) {
                let sort = sort.clone();
                let name = self.sig.fresh_var("_flat", sort);
                self.ahead.insert((x.to_string(), step), name);
            }
        }
        Ok(self.ahead[&(x.to_string(), j)].clone())
    }

    fn guard(&mut self, depth: usize) -> Atom {
        if !self.guards.contains_key(&depth) {
            let sort = self.sig.state_vars.values().next().cloned().unwrap_or(Sort::Int);
            let a = self.sig.fresh_var("_flat", sort.clone());
            let b = self.sig.fresh_var("_flat", sort);
            self.guards.insert(depth, (a, b));
        }
        let (a, b) = &self.guards[&depth];
        Atom::eq(Term::var(a), Term::var(b))
    }
}

fn wrap(shift: Shift, t: Term) -> Term {
    match shift {
        Shift::Strong => Term::Next(Box::new(t)),
        Shift::Weak => Term::WNext(Box::new(t)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut sig = Signature::new();
        sig.declare_var("x", Sort::Int).unwrap();
        sig
    }

    #[test]
    fn flat_input_unchanged() {
        let mut s = sig();
        let f =
            TemporalFormula::always(TemporalFormula::atom(Atom::eq(Term::wnext("x"), Term::var("x") + Term::int(1))));
        assert_eq!(flatten_next(&f, &mut s).unwrap(), f);
        assert_eq!(s, sig());
    }

    #[test]
    fn nested_weak_next_introduces_chain_and_guard() {
        let mut s = sig();
        let ww = Term::WNext(Box::new(Term::wnext("x")));
        let f = TemporalFormula::always(TemporalFormula::atom(Atom::eq(ww, Term::wnext("x") + Term::var("x"))));
        let out = flatten_next(&f, &mut s).unwrap();
        assert!(out.is_flat());
        assert_eq!(s.state_vars.len(), 4);
        assert!(s.state_vars.contains_key("_flat0"));
    }

    #[test]
    fn next_pushed_through_functions() {
        let mut s = sig();
        s.declare_fun("f", vec![Sort::Int], Sort::Int).unwrap();
        let t = Term::Next(Box::new(Term::Apply("f".into(), vec![Term::var("x")])));
        let f = TemporalFormula::atom(Atom::eq(t, Term::int(0)));
        let out = flatten_next(&f, &mut s).unwrap();
        let expected = TemporalFormula::atom(Atom::eq(Term::Apply("f".into(), vec![Term::next("x")]), Term::int(0)));
        assert_eq!(out, expected);
    }

    #[test]
    fn next_over_bound_rejected() {
        let mut s = sig();
        let t = Term::Next(Box::new(Term::Bound("y".into()) + Term::int(1)));
        let body = FoFormula::Atom(Atom::eq(t, Term::var("x")));
        let f = TemporalFormula::Fo(FoFormula::Exists("y".into(), Sort::Int, Box::new(body)));
        assert_eq!(flatten_next(&f, &mut s), Err(FormulaError::NextOnBound("y".into())));
    }
}
