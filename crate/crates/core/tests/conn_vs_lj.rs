//! The connection prover agrees with the sequent prover on intuitionistic validity.

mod common;

use hatprove::conn::{prove_conn, ConnOptions};
use hatprove::frontend::parse_formula;
use hatprove::lj::{prove_lj, LjOptions};
use hatprove::Verdict;
use std::time::{Duration, Instant};

fn conn_proves(f: &hatprove::term::Fm, opts: &ConnOptions) -> bool {
    let r = prove_conn(f, opts).unwrap();
    if let Verdict::Proved(p) = &r.verdict {
        assert!(p.is_complementary(), "non-complementary proof for {f}");
    }
    r.verdict.is_proved()
}

/// Every valid formula of the corpus has a proof within path length 1; deeper
/// rounds only slow down the failing searches.
const CORPUS_DEPTH: Option<usize> = Some(2);

#[test]
fn propositional_corpus_up_to_size_7() {
    let opts = ConnOptions { max_depth: CORPUS_DEPTH, ..ConnOptions::default() };
    let mut proved = 0;
    for f in common::formulas_up_to(&["p", "q"], 7) {
        let lj = prove_lj(&f, &LjOptions::default()).verdict;
        assert!(matches!(lj, Verdict::Proved(_) | Verdict::Refuted));
        assert_eq!(conn_proves(&f, &opts), lj.is_proved(), "disagreement on {f}");
        proved += lj.is_proved() as usize;
    }
    assert!(proved > 0);
}

#[test]
fn propositional_corpus_without_optimizations() {
    let opts = ConnOptions { regularity: false, schedule: vec![false], max_depth: CORPUS_DEPTH, ..ConnOptions::default() };
    for f in common::formulas_up_to(&["p", "q"], 6) {
        let lj = prove_lj(&f, &LjOptions::default()).verdict;
        assert_eq!(conn_proves(&f, &opts), lj.is_proved(), "disagreement on {f}");
    }
}

#[test]
fn first_order_formulas() {
    let valid = [
        "(all X: p(X)) => p(a)",
        "p(a) => (ex X: p(X))",
        "(all X: (p(X) => q(X))) => ((all X: p(X)) => (all X: q(X)))",
        "(ex Y: all X: r(X,Y)) => (all X: ex Y: r(X,Y))",
        "~ ~ (all X: (p(X) ; ~ p(X))) => ~ ~ (all X: (p(X) ; ~ p(X)))",
        "(all X: ~ ~ (p(X) ; ~ p(X)))",
        "(ex X: p(X)) ; ~ (ex X: p(X)) => ~ ~ ((ex X: p(X)) ; ~ (ex X: p(X)))",
        "(all X: (p(X) , q(X))) <=> ((all X: p(X)) , (all X: q(X)))",
        "(ex X: (p(X) ; q(X))) <=> ((ex X: p(X)) ; (ex X: q(X)))",
        "~ (ex X: p(X)) <=> (all X: ~ p(X))",
        "(all X: p(X,f(X))) => (all X: ex Y: p(X,Y))",
    ];
    let invalid = [
        "(all X: ~ ~ p(X)) => ~ ~ (all X: p(X))",
        "(all X: (p(X) ; q)) => ((all X: p(X)) ; q)",
        "~ (all X: p(X)) => (ex X: ~ p(X))",
        "ex X: (p(X) => (all Y: p(Y)))",
        "(all X: ex Y: r(X,Y)) => (ex Y: all X: r(X,Y))",
    ];
    let opts = |ms| ConnOptions { max_depth: Some(ms), ..ConnOptions::default() };
    for s in valid {
        let f = parse_formula(s).unwrap();
        let deadline = Some(Instant::now() + Duration::from_secs(10));
        assert!(prove_lj(&f, &LjOptions { deadline, ..LjOptions::default() }).verdict.is_proved(), "lj: {s}");
        assert!(conn_proves(&f, &opts(8)), "conn: {s}");
    }
    for s in invalid {
        let f = parse_formula(s).unwrap();
        assert!(!prove_lj(&f, &LjOptions { max_limit: Some(4), ..LjOptions::default() }).verdict.is_proved(), "lj: {s}");
        assert!(!conn_proves(&f, &opts(5)), "conn: {s}");
    }
}
