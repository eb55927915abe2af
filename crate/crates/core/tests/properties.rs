//! Property tests for the term layer, the parser, the HT semantics and the embedding.

mod common;

use std::collections::{BTreeSet, HashMap};

use common::alpha_eq;
use hatprove::embed::axioms_for;
use hatprove::frontend::parse_formula;
use hatprove::oracle::{classical_valid_prop, ht_holds, ht_valid_prop, Interp, Status, World};
use hatprove::term::{unify_occurs, Fm, Formula, Substitution, Term, Var};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0u32..4).prop_map(|v| Term::Var(Var(v))), Just(Term::constant("a"))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::fun("f", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::fun("g", vec![s, t])),
        ]
    })
}

/// Formulas over r/0, p/1, q/2 whose free variables are closed off universally.
fn closed_formula() -> impl Strategy<Value = Fm> {
    let leaf = prop_oneof![
        Just(Formula::prop("r")),
        term().prop_map(|t| Formula::atom("p", vec![t])),
        (term(), term()).prop_map(|(s, t)| Formula::atom("q", vec![s, t])),
    ];
    let open = leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (0u32..4, inner.clone()).prop_map(|(x, a)| Formula::forall(Var(x), a)),
            (0u32..4, inner).prop_map(|(x, a)| Formula::exists(Var(x), a)),
        ]
    });
    open.prop_map(|f| f.free_vars().into_iter().fold(f, |acc, x| Formula::forall(x, acc)))
}

fn prop_formula() -> impl Strategy<Value = Fm> {
    let leaf = prop_oneof![Just(Formula::prop("p")), Just(Formula::prop("q")), Just(Formula::prop("r"))];
    leaf.prop_recursive(5, 14, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

/// A random interpretation over a two-element domain for the symbols of `closed_formula`.
fn interp(seed: u64) -> Interp {
    let mut rng = StdRng::seed_from_u64(seed);
    let statuses = [Status::Absent, Status::ThereOnly, Status::Both];
    let mut status = |n: usize| (0..n).map(|_| statuses[rng.gen_range(0..3)]).collect::<Vec<_>>();
    let preds = HashMap::from([
        (("r".into(), 0), status(1)),
        (("p".into(), 1), status(2)),
        (("q".into(), 2), status(4)),
    ]);
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    let mut table = |n: usize| (0..n).map(|_| rng.gen_range(0..2)).collect::<Vec<usize>>();
    let funs = HashMap::from([(("a".into(), 0), table(1)), (("f".into(), 1), table(2)), (("g".into(), 2), table(4))]);
    Interp { domain: 2, funs, preds }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn unification_is_symmetric_and_sound(a in term(), b in term()) {
        let ab = unify_occurs(&a, &b, &Substitution::new());
        let ba = unify_occurs(&b, &a, &Substitution::new());
        prop_assert_eq!(ab.is_some(), ba.is_some());
        if let Some(s) = ab {
            prop_assert_eq!(s.apply(&a), s.apply(&b));
            let applied = s.apply(&a);
            prop_assert_eq!(s.apply(&applied), applied.clone());
            for v in s.bound_vars() {
                prop_assert!(!applied.contains_var(v));
            }
        }
    }

    #[test]
    fn unifiers_are_most_general(a in term(), b in term(), c in term()) {
        // Any unifier of the form {x0 := c}·σ factors through the computed one.
        let Some(mgu) = unify_occurs(&a, &b, &Substitution::new()) else { return Ok(()) };
        let mut seeded = Substitution::new();
        if !c.contains_var(Var(0)) {
            seeded.bind(Var(0), c);
        }
        if let Some(other) = unify_occurs(&a, &b, &seeded) {
            // `other` extends a unifier, so applying it after the mgu changes nothing.
            let via_mgu = other.apply(&mgu.apply(&a));
            prop_assert_eq!(via_mgu, other.apply(&a));
        }
    }

    #[test]
    fn printing_then_parsing_round_trips(f in closed_formula()) {
        let text = f.to_string();
        let back = parse_formula(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert!(alpha_eq(&f, &back), "{} reparsed as {}", text, back);
    }

    #[test]
    fn truth_persists_from_here_to_there(f in closed_formula(), seed in any::<u64>()) {
        let m = interp(seed);
        if m.eval(&f, World::Here, &mut Vec::new()) {
            prop_assert!(m.eval(&f, World::There, &mut Vec::new()));
        }
    }

    #[test]
    fn there_world_is_classical(f in closed_formula(), seed in any::<u64>()) {
        // With here = there the HT reading collapses to the classical one.
        let mut m = interp(seed);
        for table in m.preds.values_mut() {
            for s in table.iter_mut() {
                if *s == Status::ThereOnly {
                    *s = Status::Both;
                }
            }
        }
        prop_assert_eq!(ht_holds(&f, &m), m.eval(&f, World::There, &mut Vec::new()));
        let negated = Formula::not(f.clone());
        prop_assert_eq!(ht_holds(&negated, &m), !ht_holds(&f, &m));
    }

    #[test]
    fn ht_validity_implies_classical_validity(f in prop_formula()) {
        if ht_valid_prop(&f).is_ok() {
            prop_assert!(classical_valid_prop(&f));
        }
    }

    #[test]
    fn ht_countermodels_falsify(f in prop_formula()) {
        if let Err(model) = ht_valid_prop(&f) {
            let here: BTreeSet<_> = model.here.iter().cloned().collect();
            let there: BTreeSet<_> = model.there.iter().cloned().collect();
            prop_assert!(here.is_subset(&there));
            let preds = there
                .iter()
                .map(|a| ((a.clone(), 0), vec![if here.contains(a) { Status::Both } else { Status::ThereOnly }]))
                .collect();
            let m = Interp { domain: 1, funs: HashMap::new(), preds };
            prop_assert!(!ht_holds(&f, &m));
        }
    }

    #[test]
    fn embedding_axioms_are_ht_valid(f in prop_formula()) {
        for axiom in axioms_for(&f) {
            prop_assert!(ht_valid_prop(&axiom).is_ok(), "{} is not HT-valid", axiom);
        }
    }
}
