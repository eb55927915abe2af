//! Replays LHT proofs against a rule table written independently of the prover.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use hatprove::bench::{prepare_goal, Backend};
use hatprove::frontend::{parse_formula, read_problem, ParseOptions};
use hatprove::lht::{prove_lht, LhtOptions, ProofNode, Rule};
use common::{alpha_eq, instance_of};
use hatprove::term::{is_skolem_symbol, Fm, Formula, Term, Var};
use hatprove::Verdict;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Remove one alpha-equivalent copy of each formula in `take` from `from`.
fn remove_all(from: &[Fm], take: &[Fm]) -> Option<Vec<Fm>> {
    let mut rest = from.to_vec();
    for t in take {
        let i = rest.iter().position(|f| alpha_eq(f, t))?;
        rest.remove(i);
    }
    Some(rest)
}

fn same_multiset(a: &[Fm], b: &[Fm]) -> bool {
    a.len() == b.len() && remove_all(a, b).is_some()
}

fn not(a: &Fm) -> Fm {
    Formula::not(a.clone())
}

fn both_ways(a: &Fm, b: &Fm) -> Fm {
    Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b.clone(), a.clone()))
}

fn symbols_in(f: &Formula, out: &mut Vec<String>) {
    fn term(t: &Term, out: &mut Vec<String>) {
        if let Term::Fun(f, xs) = t {
            out.push(f.to_string());
            xs.iter().for_each(|x| term(x, out));
        }
    }
    f.visit_atoms(&mut |_, args| args.iter().for_each(|t| term(t, out)));
}

enum Shape {
    /// Fixed premises, each a pair of added left and right formulas.
    Fixed(Vec<(Vec<Fm>, Vec<Fm>)>),
    /// One premise adding an instance of the quantifier body, possibly negated.
    Quant { x: Var, body: Fm, negated: bool, to_left: bool, retain: bool, eigen: bool },
}

/// The LHT rule schema for a principal formula on a given side.
fn schema(rule: Rule, f: &Fm) -> Result<(bool, Shape), String> {
    use Formula as F;
    use Rule::*;
    use Shape::*;
    let one = |l: Vec<Fm>, r: Vec<Fm>| Fixed(vec![(l, r)]);
    let quant = |x: &Var, body: &Fm, negated, to_left, retain, eigen| Quant {
        x: *x,
        body: body.clone(),
        negated,
        to_left,
        retain,
        eigen,
    };
    let bad = || Err(format!("{rule:?} does not apply to {f}"));
    Ok(match (rule, &**f) {
        (AndLeft, F::And(a, b)) => (true, one(vec![a.clone(), b.clone()], vec![])),
        (AndRight, F::And(a, b)) => (false, Fixed(vec![(vec![], vec![a.clone()]), (vec![], vec![b.clone()])])),
        (OrLeft, F::Or(a, b)) => (true, Fixed(vec![(vec![a.clone()], vec![]), (vec![b.clone()], vec![])])),
        (OrRight, F::Or(a, b)) => (false, one(vec![], vec![a.clone(), b.clone()])),
        (ImpLeft, F::Imp(a, b)) => (
            true,
            Fixed(vec![(vec![not(a)], vec![]), (vec![], vec![a.clone(), not(b)]), (vec![b.clone()], vec![])]),
        ),
        (ImpRight, F::Imp(a, b)) => (false, Fixed(vec![(vec![a.clone()], vec![b.clone()]), (vec![not(b)], vec![not(a)])])),
        (IffLeft, F::Iff(a, b)) => (true, one(vec![both_ways(a, b)], vec![])),
        (IffRight, F::Iff(a, b)) => (false, one(vec![], vec![both_ways(a, b)])),
        (ForallLeft, F::Forall(x, a)) => (true, quant(x, a, false, true, true, false)),
        (ForallRight, F::Forall(x, a)) => (false, quant(x, a, false, false, false, true)),
        (ExistsLeft, F::Exists(x, a)) => (true, quant(x, a, false, true, false, true)),
        (ExistsRight, F::Exists(x, a)) => (false, quant(x, a, false, false, true, false)),
        (_, F::Not(g)) => match (rule, &**g) {
            (NotAndLeft, F::And(a, b)) => (true, Fixed(vec![(vec![not(a)], vec![]), (vec![not(b)], vec![])])),
            (NotAndRight, F::And(a, b)) => (false, one(vec![], vec![not(a), not(b)])),
            (NotOrLeft, F::Or(a, b)) => (true, one(vec![not(a), not(b)], vec![])),
            (NotOrRight, F::Or(a, b)) => (false, Fixed(vec![(vec![], vec![not(a)]), (vec![], vec![not(b)])])),
            (NotImpLeft, F::Imp(a, b)) => (true, one(vec![not(b)], vec![not(a)])),
            (NotImpRight, F::Imp(a, b)) => (false, Fixed(vec![(vec![not(a)], vec![]), (vec![], vec![not(b)])])),
            (NotNotLeft, F::Not(a)) => (true, one(vec![], vec![not(a)])),
            (NotNotRight, F::Not(a)) => (false, one(vec![not(a)], vec![])),
            (NotIffLeft, F::Iff(a, b)) => (true, one(vec![not(&both_ways(a, b))], vec![])),
            (NotIffRight, F::Iff(a, b)) => (false, one(vec![], vec![not(&both_ways(a, b))])),
            (NotForallLeft, F::Forall(x, a)) => (true, quant(x, a, true, true, false, true)),
            (NotForallRight, F::Forall(x, a)) => (false, quant(x, a, true, false, true, false)),
            (NotExistsLeft, F::Exists(x, a)) => (true, quant(x, a, true, true, true, false)),
            (NotExistsRight, F::Exists(x, a)) => (false, quant(x, a, true, false, false, true)),
            _ => return bad(),
        },
        _ => return bad(),
    })
}

fn check(node: &ProofNode) -> Result<(), String> {
    let here = || format!("at [{:?}] {} ⊢ {}", node.rule, list(&node.left), list(&node.right));
    match node.rule {
        Rule::Axiom1 | Rule::Axiom2 => {
            if !node.children.is_empty() {
                return Err(format!("axiom with premises {}", here()));
            }
            let [a, b] = node.principal.as_slice() else {
                return Err(format!("axiom needs two formulas {}", here()));
            };
            let other = if node.rule == Rule::Axiom1 { node.right.iter().any(|f| f == b) } else { node.left.contains(&not(b)) };
            if a != b || !node.left.contains(a) || !other {
                return Err(format!("axiom does not close {}", here()));
            }
            return Ok(());
        }
        _ => {}
    }
    let [f] = node.principal.as_slice() else {
        return Err(format!("expected one principal formula {}", here()));
    };
    let (left_side, shape) = schema(node.rule, f)?;
    let side = if left_side { &node.left } else { &node.right };
    let pos = side.iter().position(|g| g == f).ok_or_else(|| format!("principal not in sequent {}", here()))?;
    let mut ctx_left = node.left.clone();
    let mut ctx_right = node.right.clone();
    if left_side {
        ctx_left.remove(pos);
    } else {
        ctx_right.remove(pos);
    }
    match shape {
        Shape::Fixed(premises) => {
            if premises.len() != node.children.len() {
                return Err(format!("wrong premise count {}", here()));
            }
            for ((dl, dr), child) in premises.iter().zip(&node.children) {
                let want_l: Vec<Fm> = dl.iter().cloned().chain(ctx_left.iter().cloned()).collect();
                let want_r: Vec<Fm> = dr.iter().cloned().chain(ctx_right.iter().cloned()).collect();
                if !same_multiset(&child.left, &want_l) || !same_multiset(&child.right, &want_r) {
                    return Err(format!("premise mismatch {}", here()));
                }
            }
        }
        Shape::Quant { x, body, negated, to_left, retain, eigen } => {
            let [child] = node.children.as_slice() else {
                return Err(format!("wrong premise count {}", here()));
            };
            if retain {
                if to_left {
                    ctx_left.push(f.clone());
                } else {
                    ctx_right.push(f.clone());
                }
            }
            let (grown, same, base_grown, base_same) = if to_left {
                (&child.left, &child.right, &ctx_left, &ctx_right)
            } else {
                (&child.right, &child.left, &ctx_right, &ctx_left)
            };
            if !same_multiset(same, base_same) || grown.len() != base_grown.len() + 1 {
                return Err(format!("premise context mismatch {}", here()));
            }
            // Try each new formula as the instance; the context must account for the rest.
            let mut instance = None;
            for (i, c) in grown.iter().enumerate() {
                let mut rest = grown.clone();
                rest.remove(i);
                if !same_multiset(&rest, base_grown) {
                    continue;
                }
                let c = match (&**c, negated) {
                    (Formula::Not(inner), true) => inner.clone(),
                    (_, true) => continue,
                    _ => c.clone(),
                };
                if let Some(t) = instance_of(&body, x, &c) {
                    instance = Some(t);
                    break;
                }
            }
            let t = instance.ok_or_else(|| format!("no instance of the body {}", here()))?;
            if eigen {
                let Term::Fun(sym, _) = &t else {
                    return Err(format!("eigen instance {t} is not a Skolem term {}", here()));
                };
                if !is_skolem_symbol(sym) {
                    return Err(format!("eigen instance {t} is not a Skolem term {}", here()));
                }
                let mut seen = Vec::new();
                node.left.iter().chain(&node.right).for_each(|g| symbols_in(g, &mut seen));
                if seen.iter().any(|s| **s == **sym) {
                    return Err(format!("Skolem symbol {sym} not fresh {}", here()));
                }
            }
        }
    }
    node.children.iter().try_for_each(check)
}

fn list(fs: &[Fm]) -> String {
    fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn check_proof(goal: &Fm, proof: &ProofNode) -> Result<(), String> {
    if !proof.left.is_empty() || proof.right.len() != 1 || !alpha_eq(&proof.right[0], goal) {
        return Err("root is not the goal sequent".into());
    }
    check(proof)
}

fn prove(f: &Fm, budget: Duration) -> Verdict<ProofNode> {
    let opts = LhtOptions { deadline: Some(Instant::now() + budget), ..LhtOptions::default() };
    prove_lht(f, &opts).verdict
}

#[test]
fn alpha_matching_helpers() {
    let quantified = parse_formula("all X: (p(X) , (all Y: q(X, Y)))").unwrap();
    let Formula::Forall(x, body) = &*quantified else { unreachable!() };
    let (x, body) = (*x, body.clone());
    let inst = parse_formula("p(f(a)) , (all Z: q(f(a), Z))").unwrap();
    assert_eq!(instance_of(&body, x, &inst), Some(Term::fun("f", vec![Term::constant("a")])));
    let clash = parse_formula("p(a) , (all Z: q(b, Z))").unwrap();
    assert_eq!(instance_of(&body, x, &clash), None);
    assert!(alpha_eq(&parse_formula("all X: p(X)").unwrap(), &parse_formula("all Y: p(Y)").unwrap()));
    assert!(!alpha_eq(&parse_formula("all X: p(X)").unwrap(), &parse_formula("all Y: p(a)").unwrap()));
}

#[test]
fn checker_rejects_tampered_proofs() {
    let f = parse_formula("(p => q) ; (q => p)").unwrap();
    let Verdict::Proved(proof) = prove(&f, Duration::from_secs(5)) else { panic!("F1 not proved") };
    check_proof(&f, &proof).unwrap();

    let mut wrong_rule = proof.clone();
    wrong_rule.rule = Rule::AndRight;
    assert!(check_proof(&f, &wrong_rule).is_err());

    let mut dropped = proof.clone();
    dropped.children[0].right.pop();
    assert!(check_proof(&f, &dropped).is_err());

    let mut broken_axiom = proof.clone();
    let mut node = &mut broken_axiom;
    while !node.children.is_empty() {
        node = &mut node.children[0];
    }
    node.principal = vec![Formula::prop("zz"), Formula::prop("zz")];
    assert!(check_proof(&f, &broken_axiom).is_err());
}

#[test]
fn corpus_proofs_check() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let files = hatprove::bench::problem_files(&root).unwrap();
    let mut checked = 0;
    for path in files {
        let problem = read_problem(&path, None, &ParseOptions::default()).unwrap();
        let goal = prepare_goal(&problem, Backend::Lht).unwrap();
        if let Verdict::Proved(proof) = prove(&goal, Duration::from_secs(5)) {
            check_proof(&goal, &proof).unwrap_or_else(|e| panic!("{}: {e}", problem.name));
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} corpus proofs checked");
}

#[test]
fn exhaustive_propositional_proofs_check() {
    let mut checked = 0;
    for f in common::formulas_up_to(&["p", "q"], 6) {
        if let Verdict::Proved(proof) = prove(&f, Duration::from_secs(5)) {
            check_proof(&f, &proof).unwrap_or_else(|e| panic!("{f}: {e}"));
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn random_propositional_proofs_check() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..500 {
        let f = common::random_formula(&mut rng, &["p", "q", "r"], 12);
        if let Verdict::Proved(proof) = prove(&f, Duration::from_secs(5)) {
            check_proof(&f, &proof).unwrap_or_else(|e| panic!("{f}: {e}"));
        }
    }
}

#[test]
fn first_order_proofs_check() {
    let valid = [
        "(all X: p(X)) => p(a)",
        "p(a) => (ex X: p(X))",
        "(all X: (p(X) , q(X))) => (all Y: p(Y))",
        "(ex X: (p(X) ; q(X))) => ((ex Y: p(Y)) ; (ex Z: q(Z)))",
        "(all X: (p(X) => q(X))) => ((all Y: p(Y)) => (all Z: q(Z)))",
        "~ (ex X: p(X)) => (all Y: ~ p(Y))",
        "(ex X: (all Y: r(X, Y))) => (all Y: (ex X: r(X, Y)))",
        "(all X: p(X)) => ~ (ex Y: ~ p(Y))",
    ];
    for s in valid {
        let f = parse_formula(s).unwrap();
        match prove(&f, Duration::from_secs(10)) {
            Verdict::Proved(proof) => check_proof(&f, &proof).unwrap_or_else(|e| panic!("{s}: {e}")),
            other => panic!("{s}: {}", verdict_name(&other)),
        }
    }
}

fn verdict_name<P>(v: &Verdict<P>) -> &'static str {
    match v {
        Verdict::Proved(_) => "proved",
        Verdict::Refuted => "refuted",
        Verdict::Timeout => "timeout",
        Verdict::GaveUp => "gave up",
    }
}
