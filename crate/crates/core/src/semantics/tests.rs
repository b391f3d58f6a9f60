use super::*;
use crate::formula::Signature;
use crate::parser::parse;

fn phi(decls: &str, body: &str) -> (Signature, TemporalFormula) {
    parse(&format!("{decls}\nformula: {body};")).unwrap()
}

fn x_formula(body: &str) -> TemporalFormula {
    phi("var x : Int;", body).1
}

#[test]
fn next_term_evaluation() {
    let t = Trace::ints(&[&[("x", 0)], &[("x", 1)]]);
    assert_eq!(eval_term(&Term::next("x"), &t, 0, &Vec::new()), Ok(Some(Value::int(1))));
    let single = Trace::ints(&[&[("x", 0)]]);
    assert_eq!(eval_term(&Term::next("x"), &single, 0, &Vec::new()), Ok(None));
}

#[test]
fn constant_evaluation_and_missing_symbols() {
    let mut t = Trace::ints(&[&[("x", 0)]]);
    t.interp.consts.insert("c".into(), Value::int(7));
    assert_eq!(eval_term(&Term::Const("c".into()), &t, 0, &Vec::new()), Ok(Some(Value::int(7))));
    let f = Term::Apply("f".into(), vec![Term::var("x")]);
    assert!(matches!(eval_term(&f, &t, 0, &Vec::new()), Err(EvalError::IncompleteInterpretation(_))));
    assert_eq!(
        EvalError::IncompleteInterpretation("f(0)".into()).to_string(),
        "incomplete interpretation: no value for f(0)"
    );
}

#[test]
fn weak_and_strong_atoms_at_the_last_state() {
    let t = Trace::ints(&[&[("x", 5)]]);
    assert!(sat_temporal(&x_formula("wnext(x) = x + 1"), &t, 0, None).unwrap());
    assert!(!sat_temporal(&x_formula("next(x) = x + 1"), &t, 0, None).unwrap());
    // negation flips the atom's value, definedness included
    assert!(sat_temporal(&x_formula("next(x) != x + 1"), &t, 0, None).unwrap());
    assert!(!sat_temporal(&x_formula("wnext(x) != x + 1"), &t, 0, None).unwrap());
}

#[test]
fn quantifiers_over_finite_domains() {
    let t = Trace::ints(&[&[("x", 4)]]);
    let even = x_formula("exists y:Int . x = y + y");
    let d = Domains::int_range(0, 4);
    assert!(sat_temporal(&even, &t, 0, Some(&d)).unwrap());
    assert_eq!(sat_temporal(&even, &t, 0, None), Err(EvalError::Delegate(Sort::Int)));
    let all = x_formula("forall y:Int . y <= x");
    assert!(sat_temporal(&all, &t, 0, Some(&d)).unwrap());
    assert!(!sat_temporal(&all, &t, 0, Some(&Domains::int_range(0, 5))).unwrap());
}

#[test]
fn temporal_clauses() {
    let t = Trace::ints(&[&[("x", 0)], &[("x", 1)]]);
    let x1 = x_formula("X x = 1");
    assert!(sat_temporal(&x1, &t, 0, None).unwrap());
    assert!(!sat_temporal(&x1, &t, 1, None).unwrap());
    let single = Trace::ints(&[&[("x", 0)]]);
    assert!(sat_temporal(&x_formula("wX false"), &single, 0, None).unwrap());
    assert!(!sat_temporal(&x_formula("X true"), &single, 0, None).unwrap());
    let three = Trace::ints(&[&[("x", 0)], &[("x", 1)], &[("x", 2)]]);
    assert!(sat_temporal(&x_formula("x < 2 U x = 2"), &three, 0, None).unwrap());
    assert!(!sat_temporal(&x_formula("x < 1 U x = 2"), &three, 0, None).unwrap());
    assert!(sat_temporal(&x_formula("x = 2 R x >= 0"), &three, 0, None).unwrap());
    assert!(!sat_temporal(&x_formula("x = 5 R x <= 1"), &three, 0, None).unwrap());
}

#[test]
fn linear_evaluation_matches_definition() {
    let three = Trace::ints(&[&[("x", 0)], &[("x", 1)], &[("x", 2)]]);
    for body in ["x < 2 U x = 2", "G F x = 1", "x = 1 R wX x > 0", "F(x = 1 & X x = 2)", "G(wnext(x) = x + 1)"] {
        let f = x_formula(body);
        let dp = eval_positions(&f, &three, None).unwrap();
        for (i, v) in dp.iter().enumerate() {
            assert_eq!(*v, sat_temporal(&f, &three, i, None).unwrap(), "{body} at {i}");
            let lazy = sat_lazy_with(&f, 3, i, &mut |fo, j| sat_fo(fo, &three, j, &mut Vec::new(), None));
            assert_eq!(*v, lazy.unwrap(), "{body} at {i}");
        }
    }
}

#[test]
fn enumeration_examples() {
    let d = Domains::int_range(0, 1);
    let (sig, contradiction) = phi("var x : Int;", "G x = 0 & F x = 1");
    assert_eq!(enumerate_sat(&contradiction, &sig, &d, 3, 1_000).unwrap(), None);
    let (sig, step) = phi("var x : Int;", "x = 0 & X x = 1");
    assert_eq!(enumerate_sat(&step, &sig, &d, 3, 1_000).unwrap(), Some(Trace::ints(&[&[("x", 0)], &[("x", 1)]])));
    let (sig, until) = phi("var x : Int;", "x < 1 U x = 1");
    assert_eq!(enumerate_sat(&until, &sig, &d, 2, 1_000).unwrap(), Some(Trace::ints(&[&[("x", 1)]])));
}

#[test]
fn enumeration_over_uninterpreted_symbols() {
    let (sig, f) = phi("sort T;\nvar a : T;\nfun g(T) : T;", "g(a) != a & X g(a) = a");
    let d = Domains::new().with_elements("T", 2);
    let t = enumerate_sat(&f, &sig, &d, 3, 10_000).unwrap().unwrap();
    assert_eq!(t.len(), 2);
    assert!(sat_temporal(&f, &t, 0, Some(&d)).unwrap());
}

#[test]
fn enumeration_cap() {
    let (sig, f) = phi("var x, y, z : Int;", "false");
    let d = Domains::int_range(0, 9);
    assert_eq!(enumerate_sat(&f, &sig, &d, 3, 1_000), Err(EnumError::CapExceeded(1_000)));
}

#[test]
fn lazy_evaluation_skips_irrelevant_leaves() {
    let (_, f) = phi("var x : Real;", "x = 0 | 1 / x > 0");
    let zero = Trace::new(vec![[("x".to_string(), Value::int(0))].into_iter().collect()]);
    assert!(sat_lazy_with(&f, 1, 0, &mut |fo, j| sat_fo(fo, &zero, j, &mut Vec::new(), None)).unwrap());
}
