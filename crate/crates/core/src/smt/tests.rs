use super::*;
use crate::encoder::label_step;
use crate::formula::TemporalFormula;
use crate::parser::parse;

fn ground(text: &str, i: usize) -> (Signature, GroundFormula) {
    let (sig, phi) = parse(text).unwrap();
    let TemporalFormula::Fo(fo) = phi else { panic!("not first-order") };
    (sig, label_step(&fo, i))
}

fn num(n: i64, d: i64) -> ModelValue {
    ModelValue::Num(BigRational::new(n.into(), d.into()))
}

#[test]
fn model_values_parse() {
    let v = |t: &str| parse_model_value(&parse_sexprs(t).unwrap()[0]);
    assert_eq!(v("(/ 399.0 200.0)"), Some(num(399, 200)));
    assert_eq!(v("(- 5)"), Some(num(-5, 1)));
    assert_eq!(v("(- (/ 1.0 10.0))"), Some(num(-1, 10)));
    assert_eq!(v("2.5"), Some(num(5, 2)));
    assert_eq!(v("true"), Some(ModelValue::Bool(true)));
    assert_eq!(v("T!val!3"), Some(ModelValue::Element("T!val!3".into())));
    assert_eq!(v("(/ 1 0)"), None);
    assert_eq!(element_index("T!val!3"), Some(3));
}

#[test]
fn solver_command_lines() {
    let c = SolverConfig::command("z3");
    assert_eq!(c.args, vec!["-in".to_string()]);
    let c = SolverConfig::command("cvc5 --incremental --lang smt2");
    assert_eq!(c.executable, PathBuf::from("cvc5"));
    assert_eq!(c.args.len(), 3);
}

#[test]
fn check_and_read_values() {
    let (sig, g) = ground("var r : Real; formula: wnext(r) = r / 10 & r = 1;", 0);
    let mut s = Session::open(&SolverConfig::default(), &sig).unwrap();
    s.assert_formula(&GroundFormula::Symbol(SteppedSymbol::StepLiteral(0))).unwrap();
    s.assert_formula(&g).unwrap();
    assert_eq!(s.check().unwrap(), CheckResult::Sat);
    let vals = s.model_values(&[SteppedSymbol::Var("r".into(), 0), SteppedSymbol::Var("r".into(), 1)]).unwrap();
    assert_eq!(vals, vec![num(1, 1), num(1, 10)]);
    s.close();
}

#[test]
fn scopes_and_redeclaration() {
    let (sig, g) = ground("var x : Int; formula: x > 3;", 2);
    let (_, h) = ground("var x : Int; formula: x < 3;", 2);
    let mut s = Session::open(&SolverConfig::default(), &sig).unwrap();
    s.push().unwrap();
    s.assert_formula(&g).unwrap();
    s.assert_formula(&h).unwrap();
    assert_eq!(s.check().unwrap(), CheckResult::Unsat);
    assert_eq!(s.model_values(&[SteppedSymbol::Var("x".into(), 2)]), Err(SmtError::NoModel));
    s.pop().unwrap();
    assert_eq!(s.depth(), 0);
    // x@2 went out of scope with the pop and is declared again
    s.assert_formula(&g).unwrap();
    assert_eq!(s.check().unwrap(), CheckResult::Sat);
    assert!(s.pop().is_err());
}

#[test]
fn solver_errors_surface_verbatim() {
    let mut s = Session::open(&SolverConfig::default(), &Signature::new()).unwrap();
    match s.command("(assert (> |nope| 0))") {
        Err(SmtError::Solver(msg)) => assert!(msg.contains("nope"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let cfg = SolverConfig { logic: Some("NOT_A_LOGIC".into()), ..SolverConfig::default() };
    assert!(Session::open(&cfg, &Signature::new()).is_err());
}

#[test]
fn missing_executable() {
    let cfg = SolverConfig::command("/nonexistent/solver");
    assert!(matches!(Session::open(&cfg, &Signature::new()), Err(SmtError::Spawn { .. })));
}

#[test]
fn uninterpreted_model_definitions() {
    let (sig, g) = ground("sort T; var a : T; const c : T; pred p(T); formula: p(a) & !p(c);", 0);
    let mut s = Session::open(&SolverConfig::default(), &sig).unwrap();
    s.assert_formula(&g).unwrap();
    assert_eq!(s.check().unwrap(), CheckResult::Sat);
    let defs = s.user_definitions().unwrap();
    assert!(defs.iter().any(|d| d.contains("|p|") || d.contains(" p ")), "{defs:?}");
    assert!(defs.iter().all(|d| !d.contains("a@0")));
    let vals = s.model_values(&[SteppedSymbol::Var("a".into(), 0)]).unwrap();
    assert!(matches!(&vals[0], ModelValue::Element(e) if element_index(e).is_some()));
}

#[test]
fn transcript_records_commands() {
    let dir = std::env::temp_dir().join(format!("ltlfmt-transcript-{}", std::process::id()));
    let cfg = SolverConfig { transcript: Some(dir.clone()), ..SolverConfig::default() };
    let mut s = Session::open(&cfg, &Signature::new()).unwrap();
    s.check().unwrap();
    drop(s);
    let text = std::fs::read_to_string(&dir).unwrap();
    std::fs::remove_file(&dir).ok();
    assert!(text.contains("(check-sat)"));
}
