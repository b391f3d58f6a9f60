use super::{FoFormula, Formula, FormulaError, TemporalFormula};

/// Converts full syntax into negation normal form.
///
/// Dualities follow the finite-trace semantics: `¬X φ ≡ wX ¬φ`,
/// `¬wX φ ≡ X ¬φ`, `¬(φ U ψ) ≡ ¬φ R ¬ψ` and `¬(φ R ψ) ≡ ¬φ U ¬ψ`.
pub fn to_nnf(formula: &Formula) -> Result<TemporalFormula, FormulaError> {
    temporal(formula, false)
}

fn temporal(f: &Formula, neg: bool) -> Result<TemporalFormula, FormulaError> {
    use TemporalFormula as T;
    Ok(match f {
        Formula::True if neg => T::falsum(),
        Formula::True => T::True,
        Formula::False if neg => T::True,
        Formula::False => T::falsum(),
        Formula::Atom(_) | Formula::Exists(..) | Formula::Forall(..) => T::fo(first_order(f, neg)?),
        Formula::Not(g) => temporal(g, !neg)?,
        Formula::And(a, b) if neg => T::or(temporal(a, true)?, temporal(b, true)?),
        Formula::And(a, b) => T::and(temporal(a, false)?, temporal(b, false)?),
        Formula::Or(a, b) if neg => T::and(temporal(a, true)?, temporal(b, true)?),
        Formula::Or(a, b) => T::or(temporal(a, false)?, temporal(b, false)?),
        Formula::Implies(a, b) if neg => T::and(temporal(a, false)?, temporal(b, true)?),
        Formula::Implies(a, b) => T::or(temporal(a, true)?, temporal(b, false)?),
        Formula::X(a) if neg => T::wx(temporal(a, true)?),
        Formula::X(a) => T::x(temporal(a, false)?),
        Formula::WX(a) if neg => T::x(temporal(a, true)?),
        Formula::WX(a) => T::wx(temporal(a, false)?),
        Formula::U(a, b) if neg => T::release(temporal(a, true)?, temporal(b, true)?),
        Formula::U(a, b) => T::until(temporal(a, false)?, temporal(b, false)?),
        Formula::R(a, b) if neg => T::until(temporal(a, true)?, temporal(b, true)?),
        Formula::R(a, b) => T::release(temporal(a, false)?, temporal(b, false)?),
        Formula::F(a) if neg => T::always(temporal(a, true)?),
        Formula::F(a) => T::eventually(temporal(a, false)?),
        Formula::G(a) if neg => T::eventually(temporal(a, true)?),
        Formula::G(a) => T::always(temporal(a, false)?),
    })
}

/// Quantifier bodies must stay first-order.
fn first_order(f: &Formula, neg: bool) -> Result<FoFormula, FormulaError> {
    Ok(match f {
        Formula::True => {
            if neg {
                FoFormula::False
            } else {
                FoFormula::True
            }
        }
        Formula::False => {
            if neg {
                FoFormula::True
            } else {
                FoFormula::False
            }
        }
        Formula::Atom(a) if neg => FoFormula::NegAtom(a.clone()),
        Formula::Atom(a) => FoFormula::Atom(a.clone()),
        Formula::Not(g) => first_order(g, !neg)?,
        Formula::And(a, b) if neg => FoFormula::or(first_order(a, true)?, first_order(b, true)?),
        Formula::And(a, b) => FoFormula::and(first_order(a, false)?, first_order(b, false)?),
        Formula::Or(a, b) if neg => FoFormula::and(first_order(a, true)?, first_order(b, true)?),
        Formula::Or(a, b) => FoFormula::or(first_order(a, false)?, first_order(b, false)?),
        Formula::Implies(a, b) if neg => FoFormula::and(first_order(a, false)?, first_order(b, true)?),
        Formula::Implies(a, b) => FoFormula::or(first_order(a, true)?, first_order(b, false)?),
        Formula::Exists(v, s, body) if neg => {
            FoFormula::Forall(v.clone(), s.clone(), Box::new(first_order(body, true)?))
        }
        Formula::Exists(v, s, body) => FoFormula::Exists(v.clone(), s.clone(), Box::new(first_order(body, false)?)),
        Formula::Forall(v, s, body) if neg => {
            FoFormula::Exists(v.clone(), s.clone(), Box::new(first_order(body, true)?))
        }
        Formula::Forall(v, s, body) => FoFormula::Forall(v.clone(), s.clone(), Box::new(first_order(body, false)?)),
        Formula::X(_) | Formula::WX(_) | Formula::U(..) | Formula::R(..) | Formula::F(_) | Formula::G(_) => {
            return Err(FormulaError::TemporalUnderQuantifier)
        }
    })
}
