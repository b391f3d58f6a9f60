#![allow(dead_code)]

use ltlfmt::formula::{to_nnf, ArithOp, Atom, Formula, Predicate, Signature, Sort, TemporalFormula, Term};
use ltlfmt::parser::parse;
use ltlfmt::semantics::{Trace, Value};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub const DECLS: &str = "var x, y : Int;\nvar r : Real;\nconst c : Int;\nfun f(Int) : Int;\npred p(Int);\n";

pub fn signature() -> Signature {
    parse(&format!("{DECLS}formula: true;")).unwrap().0
}

fn b<T>(t: T) -> Box<T> {
    Box::new(t)
}

/// Which parts of [`DECLS`] generated formulas may use.
#[derive(Debug, Clone, Copy)]
pub struct Vocab {
    /// Next-state terms.
    pub next: bool,
    /// The constant `c`, the function `f` and the predicate `p`.
    pub rigid: bool,
}

pub const FULL: Vocab = Vocab { next: true, rigid: true };
/// Everything the evaluator can decide without an interpretation.
pub const STATE: Vocab = Vocab { next: true, rigid: false };

/// Integer terms. `bound` lists quantified variables in scope.
pub fn int_term(bound: Vec<String>, v: Vocab) -> BoxedStrategy<Term> {
    let mut leaves: Vec<BoxedStrategy<Term>> =
        vec![Just(Term::var("x")).boxed(), Just(Term::var("y")).boxed(), (-5i64..20).prop_map(Term::int).boxed()];
    if v.rigid {
        leaves.push(Just(Term::Const("c".into())).boxed());
    }
    if v.next {
        leaves.push(prop_oneof![Just("x"), Just("y")].prop_map(Term::next).boxed());
        leaves.push(prop_oneof![Just("x"), Just("y")].prop_map(Term::wnext).boxed());
    }
    let has_bound = !bound.is_empty();
    if has_bound {
        leaves.push(proptest::sample::select(bound).prop_map(Term::Bound).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves).boxed();
    leaf.prop_recursive(3, 12, 2, move |inner| {
        let mut options = vec![
            (inner.clone(), inner.clone(), prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub)])
                .prop_map(|(a, c, op)| Term::arith(op, a, c))
                .boxed(),
            (0i64..5, inner.clone()).prop_map(|(k, t)| Term::arith(ArithOp::Mul, Term::int(k), t)).boxed(),
            inner.clone().prop_map(|t| Term::Neg(b(t))).boxed(),
        ];
        if v.rigid {
            options.push(inner.clone().prop_map(|t| Term::Apply("f".into(), vec![t])).boxed());
        }
        if v.next {
            // next(..) may not capture quantified variables
            let shifted = if has_bound { int_term(Vec::new(), v) } else { inner };
            options.push(shifted.clone().prop_map(|t| Term::Next(b(t))).boxed());
            options.push(shifted.prop_map(|t| Term::WNext(b(t))).boxed());
        }
        proptest::strategy::Union::new(options)
    })
    .boxed()
}

fn decimal() -> impl Strategy<Value = BigRational> {
    (-400i64..400, 0u32..3).prop_map(|(n, e)| BigRational::new(BigInt::from(n), BigInt::from(10i64.pow(e))))
}

pub fn real_term(next: bool) -> BoxedStrategy<Term> {
    let mut leaves = vec![Just(Term::var("r")).boxed(), decimal().prop_map(Term::Real).boxed()];
    if next {
        leaves.push(Just(Term::next("r")).boxed());
        leaves.push(Just(Term::wnext("r")).boxed());
    }
    proptest::strategy::Union::new(leaves)
        .boxed()
        .prop_recursive(2, 6, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, c)| a + c),
                (inner.clone(), decimal().prop_filter("nonzero", |d| *d != BigRational::from_integer(0.into())))
                    .prop_map(|(a, d)| a / Term::Real(d)),
                inner.prop_map(|t| Term::int(2) * t),
            ]
        })
        .boxed()
}

pub fn atom(bound: Vec<String>, v: Vocab) -> BoxedStrategy<Atom> {
    let rel = prop_oneof![
        Just(Predicate::Eq),
        Just(Predicate::Lt),
        Just(Predicate::Le),
        Just(Predicate::Gt),
        Just(Predicate::Ge)
    ];
    let int = (rel, int_term(bound.clone(), v), int_term(bound.clone(), v)).prop_map(|(p, l, r)| Atom::rel(p, l, r));
    let real = (real_term(v.next), real_term(v.next)).prop_map(|(l, r)| Atom::rel(Predicate::Le, l, r));
    if v.rigid {
        let user = int_term(bound, v).prop_map(|t| Atom::new(Predicate::User("p".into()), vec![t]));
        prop_oneof![4 => int, 1 => real, 1 => user].boxed()
    } else {
        prop_oneof![4 => int, 1 => real].boxed()
    }
}

/// First-order surface formulas, possibly quantified.
pub fn fo_formula(bound: Vec<String>, v: Vocab, depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        8 => atom(bound.clone(), v).prop_map(Formula::Atom),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ]
    .boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = fo_formula(bound.clone(), v, depth - 1);
    let names = ["u", "v", "w"];
    let fresh = names.iter().find(|n| !bound.iter().any(|b| b == *n)).map(|n| n.to_string());
    let mut options = vec![
        leaf,
        sub.clone().prop_map(Formula::negate).boxed(),
        (sub.clone(), sub.clone()).prop_map(|(a, c)| Formula::And(b(a), b(c))).boxed(),
        (sub.clone(), sub.clone()).prop_map(|(a, c)| Formula::Or(b(a), b(c))).boxed(),
        (sub.clone(), sub).prop_map(|(a, c)| Formula::Implies(b(a), b(c))).boxed(),
    ];
    if let Some(name) = fresh {
        let mut inner = bound.clone();
        inner.push(name.clone());
        let body = fo_formula(inner, v, depth - 1);
        let name2 = name.clone();
        options.push(body.clone().prop_map(move |f| Formula::Exists(name.clone(), Sort::Int, b(f))).boxed());
        options.push(body.prop_map(move |f| Formula::Forall(name2.clone(), Sort::Int, b(f))).boxed());
    }
    proptest::strategy::Union::new(options).boxed()
}

/// Temporal surface formulas over [`DECLS`].
pub fn surface_formula(v: Vocab) -> BoxedStrategy<Formula> {
    fo_formula(Vec::new(), v, 2)
        .prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::negate),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Formula::And(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Formula::Or(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Formula::Implies(b(a), b(c))),
                inner.clone().prop_map(|a| Formula::X(b(a))),
                inner.clone().prop_map(|a| Formula::WX(b(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Formula::U(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Formula::R(b(a), b(c))),
                inner.clone().prop_map(|a| Formula::F(b(a))),
                inner.prop_map(|a| Formula::G(b(a))),
            ]
        })
        .boxed()
}

pub fn nnf_formula(v: Vocab) -> BoxedStrategy<TemporalFormula> {
    surface_formula(v).prop_map(|f| to_nnf(&f).expect("generated formulas are well formed")).boxed()
}

pub const BOOL_ATOMS: [&str; 14] = [
    "x = 0",
    "x = 1",
    "y = 1",
    "x = y",
    "x != y",
    "x + y = 1",
    "next(x) = x",
    "next(x) = 1 - x",
    "next(y) = x",
    "next(x) != y",
    "wnext(x) = x",
    "wnext(y) = 1 - y",
    "wnext(x) > y",
    "x < next(y)",
];

/// Next-state terms nested up to three deep.
pub const NESTED_ATOMS: [&str; 10] = [
    "x = 1",
    "x = y",
    "next(next(x)) = x",
    "wnext(wnext(y)) = 1 - x",
    "wnext(next(x)) = y",
    "next(wnext(y)) != x",
    "next(x + next(y)) = 1",
    "wnext(next(next(x))) = y",
    "wnext(y) = x",
    "next(y) = x",
];

/// Source text of a random temporal formula over `atoms`, using every
/// temporal operator and connective.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return atoms.choose(rng).unwrap().to_string();
    }
    let a = random_formula(rng, atoms, depth - 1);
    let choice = rng.gen_range(0..10);
    let mut b = || random_formula(rng, atoms, depth - 1);
    match choice {
        0 => format!("!({a})"),
        1 => format!("({a}) & ({})", b()),
        2 => format!("({a}) | ({})", b()),
        3 => format!("X ({a})"),
        4 => format!("wX ({a})"),
        5 => format!("({a}) U ({})", b()),
        6 => format!("({a}) R ({})", b()),
        7 => format!("F ({a})"),
        8 => format!("G ({a})"),
        _ => format!("({a}) -> ({})", b()),
    }
}

/// A random formula over two integer variables whose values are meant to
/// stay in {0, 1}. No quantifiers, so finite-domain models are exactly the
/// models with values in range.
pub fn random_bool_lia(rng: &mut impl Rng, depth: u32) -> String {
    random_formula(rng, &BOOL_ATOMS, depth)
}

/// `body` with both variables confined to {0, 1} at every state.
pub fn bool_lia_source(body: &str) -> String {
    format!("var x, y : Int;\nformula: ({body}) & G (0 <= x & x <= 1 & 0 <= y & y <= 1);\n")
}

/// Traces of length 1 to 4 over the state variables of [`DECLS`].
pub fn state_trace() -> BoxedStrategy<Trace> {
    proptest::collection::vec((-2i64..3, -2i64..3, -20i64..20), 1..5)
        .prop_map(|states| {
            Trace::new(
                states
                    .into_iter()
                    .map(|(x, y, r)| {
                        [("x", Value::int(x)), ("y", Value::int(y)), ("r", Value::ratio(r, 10))]
                            .into_iter()
                            .map(|(n, v)| (n.to_string(), v))
                            .collect()
                    })
                    .collect(),
            )
        })
        .boxed()
}

/// Hand-written formulas over `var x, y : Int;` covering every temporal
/// operator, strong and weak atoms, and all three outcomes.
pub const CORPUS: [&str; 30] = [
    "x = 0",
    "x = 0 & x = 1",
    "X x = 1",
    "wX x = 1",
    "X X X false",
    "X wX false",
    "wX false",
    "X true & wX false",
    "next(x) = x + 1",
    "wnext(x) = x + 1",
    "!(next(x) = x)",
    "!(wnext(x) = x)",
    "x = 0 & G(wnext(x) = x + 1) & F(x = 3)",
    "x = 0 & G(next(x) = x + 1)",
    "x = 0 U x = 1",
    "(x < 2 & next(x) = x + 1) U x = 2",
    "x = 0 R x >= 0",
    "(x = 5) R (wnext(x) = x + 1)",
    "F(x = 1) & G(x = 0)",
    "G(x > 5) & F(x < 0)",
    "F G(x = 2) & x = 0 & G(wnext(x) = x + 1 | wnext(x) = x)",
    "G F(x = 1) & x = 0",
    "x = 0 & X(x = 1 & X(x = 2 & wX false))",
    "(next(y) = y) U (y > x)",
    "(wnext(y) < y) R (y >= 0)",
    "G(x = y) & F(x != y)",
    "X(x = 0) & X(x = 1)",
    "F(x = 1 & X F(x = 2 & X F x = 3))",
    "G(exists z:Int . x = z + z) & F(x = 2)",
    "G(exists z:Int . x = z + z) & x = 3",
];
