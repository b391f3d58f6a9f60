use super::*;
use crate::formula::FoFormula;

const HEADER: &str = "var x, y : Int;\nvar r : Real;\n";

fn formula(body: &str) -> TemporalFormula {
    parse(&format!("{HEADER}formula: {body};")).unwrap().1
}

fn error(body: &str) -> ParseError {
    parse(&format!("{HEADER}formula: {body};")).unwrap_err()
}

#[test]
fn counter_example_parses() {
    let (sig, phi) = parse("var x : Int;\nformula: x = 0 & G(wnext(x) = x + 1) & F(x = 5);").unwrap();
    assert_eq!(sig.state_vars.len(), 1);
    assert_eq!(phi.to_string(), "x = 0 & G wnext(x) = x + 1 & F x = 5");
}

#[test]
fn undeclared_variable_reports_position() {
    let err = error("x = z");
    assert_eq!((err.line, err.col), (3, 14));
    assert_eq!(err.message, "undeclared variable z");
}

#[test]
fn decimal_against_int_is_sort_error() {
    let err = error("x < 0.5");
    assert_eq!((err.line, err.col), (3, 10));
    assert!(err.message.contains("sort"), "{}", err.message);
}

#[test]
fn temporal_under_quantifier_rejected() {
    let err = error("exists z:Int . X z = x");
    assert_eq!(err.message, "temporal operator under quantifier");
}

#[test]
fn precedence() {
    let f = formula("x = 0 | y = 0 & r = 0.5");
    assert!(matches!(f, TemporalFormula::Fo(FoFormula::Or(..))));
    let g = formula("x = 0 U y = 0 & X r = 1.0");
    assert!(matches!(g, TemporalFormula::And(ref a, _) if matches!(**a, TemporalFormula::U(..))));
    let h = formula("x = 0 U y = 0 U x = 1");
    assert!(matches!(h, TemporalFormula::U(_, ref b) if matches!(**b, TemporalFormula::U(..))));
    let t = formula("x - y - 1 = 2 * x + -3");
    assert_eq!(t.to_string(), "x - y - 1 = 2 * x + -3");
}

#[test]
fn implication_and_negation_normalise() {
    let f = formula("!(x = 0 -> X y > 1)");
    assert_eq!(f.to_string(), "x = 0 & wX !(y > 1)");
    assert_eq!(formula("x != 1").to_string(), "x != 1");
}

#[test]
fn parenthesised_terms_and_formulas() {
    assert_eq!(formula("(x + 1) * 2 = y").to_string(), "(x + 1) * 2 = y");
    assert_eq!(formula("((x = 0))").to_string(), "x = 0");
    assert_eq!(formula("(x = 0 | y = 0) & X true").to_string(), "(x = 0 | y = 0) & X true");
}

#[test]
fn functions_predicates_and_quantifiers() {
    let src = "sort T;\nvar a : T;\nfun f(T) : Int;\npred p(T);\nformula: forall e:T . (p(e) | f(e) != f(a));";
    let (sig, phi) = parse(src).unwrap();
    assert!(sig.uses_uninterpreted());
    assert_eq!(phi.to_string(), "forall e:T . (p(e) | f(e) != f(a))");
    assert!(parse("fun f(Int) : Int;\nformula: f(1, 2) = 0;").is_err());
    let nested = "var x : Int;\nformula: exists y:Int . y > x & x = 0;";
    assert_eq!(parse(nested).unwrap().1.to_string(), "exists y:Int . y > x & x = 0");
    assert!(matches!(parse(nested).unwrap().1, TemporalFormula::Fo(FoFormula::And(..))));
    let even = "var x : Int;\nformula: G(exists y:Int . x = y + y);";
    assert_eq!(parse(even).unwrap().1.to_string(), "G exists y:Int . x = y + y");
    let bad = "var x : Int;\nformula: G(exists y:Int . X(x = y));";
    assert_eq!(parse(bad).unwrap_err().message, "temporal operator under quantifier");
}

#[test]
fn declarations_are_checked() {
    assert!(parse("var x : Int;\nvar x : Real;\nformula: true;").is_err());
    assert!(parse("var _x : Int;\nformula: true;").is_err());
    assert!(parse("var x : T;\nformula: true;").is_err());
    assert!(parse("var x : Int;").is_err());
}

#[test]
fn transition_system_sections() {
    let src = "var s : Int;\ninit: s = 0;\ntrans: next(s) = s + 1;\nproperty: G s >= 0;\n";
    let file = parse_source(src).unwrap();
    assert!(file.formula.is_none());
    assert!(file.init.is_some() && file.trans.is_some() && file.property.is_some());
}

#[test]
fn lexer_errors_carry_position() {
    let err = parse("var x : Int;\nformula: x = $;").unwrap_err();
    assert_eq!((err.line, err.col), (2, 14));
    assert_eq!(err.with_file("a.ltlmt"), "a.ltlmt:2:14: unexpected character `$`");
}
