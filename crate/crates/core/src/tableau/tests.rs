use super::*;
use crate::formula::{closure, TemporalFormula};
use crate::parser::parse;
use crate::solver::{prepare, SolveOptions};

fn table(body: &str) -> (Signature, ClosureTable) {
    let (sig, phi) = parse(&format!("var x, y : Int; pred p(Int); pred q(Int);\nformula: {body};")).unwrap();
    (sig, closure(&phi))
}

fn id(ct: &ClosureTable, body: &str) -> ClosureId {
    let (_, phi) = parse(&format!("var x, y : Int; pred p(Int); pred q(Int);\nformula: {body};")).unwrap();
    ct.get(&phi).unwrap_or_else(|| panic!("{body} not in closure"))
}

fn set(ids: &[ClosureId]) -> Label {
    ids.iter().copied().collect()
}

#[test]
fn expansion_rules() {
    let (_, ct) = table("p(x) U q(x)");
    let root = set(&[ct.root()]);
    let (rule, children) = expand(&ct, &root).unwrap();
    assert_eq!(rule, Rule::Until);
    assert_eq!(children, vec![set(&[id(&ct, "q(x)")]), set(&[id(&ct, "p(x)"), id(&ct, "X (p(x) U q(x))")])]);

    let (_, ct) = table("p(x) R q(x)");
    let (rule, children) = expand(&ct, &set(&[ct.root()])).unwrap();
    assert_eq!(rule, Rule::Release);
    assert_eq!(
        children,
        vec![set(&[id(&ct, "p(x)"), id(&ct, "q(x)")]), set(&[id(&ct, "q(x)"), id(&ct, "wX (p(x) R q(x))")])]
    );

    let (_, ct) = table("p(x) & X q(x)");
    let (rule, children) = expand(&ct, &set(&[ct.root()])).unwrap();
    assert_eq!(rule, Rule::Conjunction);
    assert_eq!(children.len(), 1);
    assert!(is_poised(&ct, &children[0]));
}

#[test]
fn step_collects_tomorrow_operands() {
    let (_, ct) = table("x = 0 & X p(x) & wX q(x) & X (p(x) | q(x))");
    let mut label = set(&[ct.root()]);
    while let Some((_, mut c)) = expand(&ct, &label) {
        label = c.remove(0);
    }
    assert_eq!(step(&ct, &label), set(&[id(&ct, "p(x)"), id(&ct, "q(x)"), id(&ct, "p(x) | q(x)")]));
    let (_, ct) = table("x = 0");
    assert!(step(&ct, &set(&[ct.root()])).is_empty());
}

fn summary(labels: &[&str]) -> BranchSummary {
    let decl = "var x, y : Int;";
    BranchSummary {
        poised_labels: labels
            .iter()
            .map(|l| {
                l.split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|f| match parse(&format!("{decl}\nformula: {f};")).unwrap().1 {
                        TemporalFormula::Fo(fo) => fo,
                        other => panic!("{other:?}"),
                    })
                    .collect()
            })
            .collect(),
    }
}

#[test]
fn contradiction_and_empty_rules() {
    let (sig, _) = parse("var x, y : Int; formula: true;").unwrap();
    let mut s = Session::open(&SolverConfig::default(), &sig).unwrap();
    assert_eq!(check_contradiction(&mut s, &summary(&["x = 0; x = 1"])).unwrap(), Some(true));
    assert_eq!(check_contradiction(&mut s, &summary(&["x = 0", "x = 0"])).unwrap(), Some(false));
    let b = summary(&["next(x) = 1", "x = 2"]);
    assert_eq!(omega(&b).to_string(), "_l@0 & x@1 = 1 & x@1 = 2 & _l@0");
    assert_eq!(check_contradiction(&mut s, &b).unwrap(), Some(true));

    assert_eq!(check_empty(&mut s, &summary(&["x = 0"]), false).unwrap(), Some(true));
    assert_eq!(check_empty(&mut s, &summary(&["x = 0"]), true).unwrap(), Some(false));
    assert_eq!(check_empty(&mut s, &summary(&["next(x) = 1"]), false).unwrap(), Some(false));
    assert_eq!(s.depth(), 0);
}

fn run(text: &str, max_poised: usize) -> TableauResult {
    let (sig, phi) = parse(text).unwrap();
    let prep = prepare(&phi, &sig, &SolveOptions::default()).unwrap();
    search(&prep.ct, &prep.sig, &sig, &prep.backend, &TableauOptions { max_poised, dot: true }).unwrap()
}

#[test]
fn search_outcomes() {
    let r = run("var x : Int; formula: G x > 5 & F x < 0;", 5);
    assert_eq!(r.outcome, SolveOutcome::Unknown(UnknownReason::BoundExhausted));
    assert!(r.dot.unwrap().contains("trimmed"));

    let r = run("var x : Int; formula: x = 3 & G exists y:Int . x = y + y;", 5);
    assert_eq!(r.outcome, SolveOutcome::Unsat { k: 0 });

    let r = run("var x : Int; formula: x = 0 & X x = 1;", 5);
    let SolveOutcome::Sat { trace, k } = &r.outcome else { panic!("{:?}", r.outcome) };
    assert_eq!(*k, 1);
    assert_eq!(trace.len(), 2);
    assert_eq!(trace.states[1]["x"], crate::semantics::Value::int(1));
    let dot = r.dot.unwrap();
    assert!(dot.starts_with("digraph tableau {"));
    assert!(dot.contains("accepted") && dot.contains("label=\"step\""));
}
