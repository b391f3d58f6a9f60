mod common;

use common::{nnf_formula, signature, state_trace, surface_formula, FULL, STATE};
use ltlfmt::encoder::{ground, snf, SteppedSymbol};
use ltlfmt::formula::{
    classify_atom, closure, flatten_next, sort_check, to_nnf, Atom, AtomStrength, ClosureId, ClosureNode, Formula,
    Predicate, Term,
};
use ltlfmt::parser::{parse, print_source};
use ltlfmt::semantics::{enumerate_sat, eval_positions, sat_temporal, trace_from_json, trace_to_json, Domains, Value};
use ltlfmt::tableau::{expand, is_poised, step, Label};
use proptest::prelude::*;

fn domains() -> Domains {
    Domains::int_range(-2, 2)
}

fn holds(f: &Formula, trace: &ltlfmt::semantics::Trace, i: usize) -> Result<bool, ltlfmt::semantics::EvalError> {
    sat_temporal(&to_nnf(f).unwrap(), trace, i, Some(&domains()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(phi in nnf_formula(FULL)) {
        let sig = signature();
        sort_check(&phi, &sig).unwrap();
        let text = print_source(&sig, &phi);
        let (sig2, back) = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(sig2, sig);
        prop_assert_eq!(back, phi, "{}", text);
    }

    #[test]
    fn nnf_is_idempotent(phi in nnf_formula(FULL)) {
        prop_assert_eq!(to_nnf(&Formula::from(&phi)).unwrap(), phi);
    }

    #[test]
    fn closure_is_linear(phi in nnf_formula(FULL)) {
        let ct = closure(&phi);
        prop_assert!(ct.len() <= 2 * phi.size());
        for id in ct.ids() {
            match ct.node(id) {
                ClosureNode::U(..) => prop_assert!(ct.x_of(id).is_some()),
                ClosureNode::R(..) => prop_assert!(ct.wx_of(id).is_some()),
                _ => {}
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn negation_complements(f in surface_formula(STATE), trace in state_trace()) {
        let neg = Formula::negate(f.clone());
        for i in 0..trace.len() {
            prop_assert_eq!(holds(&neg, &trace, i).unwrap(), !holds(&f, &trace, i).unwrap());
        }
    }

    #[test]
    fn derived_operators_unfold(f in surface_formula(STATE), trace in state_trace()) {
        let n = trace.len();
        let at: Vec<bool> = (0..n).map(|j| holds(&f, &trace, j).unwrap()).collect();
        for i in 0..n {
            let eventually = holds(&Formula::F(Box::new(f.clone())), &trace, i).unwrap();
            let always = holds(&Formula::G(Box::new(f.clone())), &trace, i).unwrap();
            prop_assert_eq!(eventually, at[i..].iter().any(|&b| b));
            prop_assert_eq!(always, at[i..].iter().all(|&b| b));
            let strong = holds(&Formula::X(Box::new(f.clone())), &trace, i).unwrap();
            let weak = holds(&Formula::WX(Box::new(f.clone())), &trace, i).unwrap();
            prop_assert_eq!(strong, i + 1 < n && at[i + 1]);
            prop_assert_eq!(weak, i + 1 == n || at[i + 1]);
        }
    }

    #[test]
    fn backward_evaluation_matches_definition(phi in nnf_formula(STATE), trace in state_trace()) {
        let d = domains();
        let all = eval_positions(&phi, &trace, Some(&d)).unwrap();
        for (i, v) in all.into_iter().enumerate() {
            prop_assert_eq!(v, sat_temporal(&phi, &trace, i, Some(&d)).unwrap());
        }
    }

    #[test]
    fn flattening_leaves_only_variable_next(phi in nnf_formula(FULL)) {
        let mut sig = signature();
        let flat = flatten_next(&phi, &mut sig).unwrap();
        prop_assert!(flat.is_flat());
        sort_check(&flat, &sig).unwrap();
        let mut again = sig.clone();
        prop_assert_eq!(flatten_next(&flat, &mut again).unwrap(), flat);
        prop_assert_eq!(again, sig);
    }

    #[test]
    fn grounding_touches_two_states(phi in nnf_formula(FULL), i in 0usize..4) {
        let mut sig = signature();
        let flat = flatten_next(&phi, &mut sig).unwrap();
        let ct = closure(&flat);
        for id in ct.ids() {
            let g = ground(&snf(&ct, id, i), i);
            for s in g.symbols() {
                match s {
                    SteppedSymbol::StepLiteral(j) => prop_assert_eq!(j, i),
                    SteppedSymbol::GroundedTomorrow(t, j) => {
                        prop_assert_eq!(j, i);
                        prop_assert!(ct.tomorrow_operand(t).is_some());
                    }
                    SteppedSymbol::Var(_, j) => prop_assert!(j == i || j == i + 1),
                }
            }
        }
    }

    #[test]
    fn tableau_labels_stay_in_closure(phi in nnf_formula(FULL)) {
        let ct = closure(&phi);
        let ids: Vec<ClosureId> = ct.ids().collect();
        let mut pending: Vec<Label> = vec![[ct.root()].into_iter().collect()];
        let mut seen = std::collections::BTreeSet::new();
        while let Some(label) = pending.pop() {
            prop_assert!(label.iter().all(|id| ids.contains(id)));
            if !seen.insert(label.clone()) {
                continue;
            }
            match expand(&ct, &label) {
                Some((_, children)) => {
                    prop_assert!(!is_poised(&ct, &label));
                    pending.extend(children);
                }
                None => {
                    prop_assert!(label.iter().all(|&id| ct.node(id).is_elementary()));
                    pending.push(step(&ct, &label));
                }
            }
        }
    }

    #[test]
    fn traces_survive_json(trace in state_trace()) {
        prop_assert_eq!(trace_from_json(&trace_to_json(&trace)).unwrap(), trace);
    }
}

proptest! {
    #[test]
    fn stepped_symbols_round_trip(name in "[a-z][a-z0-9_]{0,6}", i in 0usize..10_000, id in 0usize..500) {
        for s in [
            SteppedSymbol::Var(name.clone(), i),
            SteppedSymbol::StepLiteral(i),
            SteppedSymbol::GroundedTomorrow(ClosureId(id), i),
        ] {
            prop_assert_eq!(SteppedSymbol::parse(&s.to_string()), Some(s));
        }
    }

    #[test]
    fn atom_strength_at_the_last_state(x in -3i64..3, k in -3i64..3, strong in any::<bool>(), mixed in any::<bool>()) {
        let lhs = if strong { Term::next("x") } else { Term::wnext("x") };
        let rhs = if mixed { Term::next("y") + Term::wnext("x") } else { Term::int(k) };
        let atom = Atom::rel(Predicate::Eq, lhs, rhs);
        let expect_strong = strong || mixed;
        prop_assert_eq!(
            classify_atom(&atom),
            if expect_strong { AtomStrength::Strong } else { AtomStrength::Weak }
        );
        let trace = ltlfmt::semantics::Trace::ints(&[&[("x", x), ("y", 0)]]);
        let positive = Formula::Atom(atom.clone());
        prop_assert_eq!(holds(&positive, &trace, 0).unwrap(), !expect_strong);
        prop_assert_eq!(holds(&Formula::negate(positive), &trace, 0).unwrap(), expect_strong);
    }
}

#[test]
fn flattening_preserves_shortest_models() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let domains = Domains::int_range(0, 1);
    let mut checked = 0;
    for _ in 0..300 {
        let body = common::random_formula(&mut rng, &common::NESTED_ATOMS, 2);
        let (sig, phi) = parse(&format!("var x, y : Int;\nformula: {body};")).unwrap();
        let mut flat_sig = sig.clone();
        let flat = flatten_next(&phi, &mut flat_sig).unwrap();
        if flat_sig.state_vars.len() > 5 {
            continue;
        }
        checked += 1;
        let shortest = |f: &ltlfmt::formula::TemporalFormula, s: &ltlfmt::formula::Signature| {
            enumerate_sat(f, s, &domains, 3, 1 << 20).unwrap().map(|t| t.len())
        };
        assert_eq!(shortest(&phi, &sig), shortest(&flat, &flat_sig), "{body}");
    }
    assert!(checked >= 100, "only {checked} instances small enough");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unused_symbols_do_not_matter(phi in nnf_formula(STATE), trace in state_trace(), c in -5i64..5, table in proptest::collection::vec(-5i64..5, 5)) {
        let d = domains();
        let before: Vec<bool> = (0..trace.len()).map(|i| sat_temporal(&phi, &trace, i, Some(&d)).unwrap()).collect();
        let mut other = trace.clone();
        other.interp.consts.insert("c".into(), Value::int(c));
        other.interp.funcs.insert(
            "f".into(),
            table.iter().enumerate().map(|(i, v)| (vec![Value::int(i as i64 - 2)], Value::int(*v))).collect(),
        );
        other.interp.preds.insert("p".into(), table.iter().enumerate().map(|(i, v)| (vec![Value::int(i as i64 - 2)], *v > 0)).collect());
        let after: Vec<bool> = (0..other.len()).map(|i| sat_temporal(&phi, &other, i, Some(&d)).unwrap()).collect();
        prop_assert_eq!(before, after);
    }
}
