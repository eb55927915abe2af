//! Embedding HT into intuitionistic logic by adding axiom instances.
//!
//! Two schemas are instantiated over the predicate signature of the goal:
//! `G ∨ (G → H) ∨ ¬H` with `G` a possibly negated atom and `H` an atom, and
//! `∃x̄ (G → ∀x̄ G)` for predicates with arguments. A formula is HT-valid if
//! its embedding is intuitionistically valid (for the restricted instance set
//! used here only the converse direction is guaranteed).

use std::rc::Rc;

use crate::frontend::symbols;
use crate::term::{Fm, Formula, Sym, Term, Var, VarGen};

/// Predicate symbols with arities, in first-occurrence order.
pub type Signature = Vec<(Sym, usize)>;

pub fn signature_of(f: &Formula) -> Signature {
    symbols(f).1
}

fn atom(p: &Sym, vars: &[Var]) -> Fm {
    Rc::new(Formula::Atom(p.clone(), vars.iter().map(|v| Term::Var(*v)).collect()))
}

fn close(universal: bool, vars: &[Var], body: Fm) -> Fm {
    vars.iter().rev().fold(body, |acc, v| {
        if universal {
            Formula::forall(*v, acc)
        } else {
            Formula::exists(*v, acc)
        }
    })
}

fn fresh(gen: &mut VarGen, n: usize) -> Vec<Var> {
    (0..n).map(|_| gen.fresh()).collect()
}

/// `∀x̄∀ȳ (G ∨ (G → H) ∨ ¬H)` for every `H = P'(ȳ)` and `G ∈ {P(x̄), ¬P(x̄)}`,
/// except `G = H` up to renaming (the positive atom of the same predicate).
pub fn hos_instances(sig: &Signature, gen: &mut VarGen) -> Vec<Fm> {
    let mut out = Vec::new();
    for (h_pred, h_arity) in sig {
        for (g_pred, g_arity) in sig {
            for negated in [false, true] {
                if !negated && g_pred == h_pred && g_arity == h_arity {
                    continue;
                }
                let xs = fresh(gen, *g_arity);
                let ys = fresh(gen, *h_arity);
                let g = atom(g_pred, &xs);
                let g = if negated { Formula::not(g) } else { g };
                let h = atom(h_pred, &ys);
                let body = Formula::or(g.clone(), Formula::or(Formula::imp(g, h.clone()), Formula::not(h)));
                let vars: Vec<Var> = xs.into_iter().chain(ys).collect();
                out.push(close(true, &vars, body));
            }
        }
    }
    out
}

/// `∃x̄ (G → ∀x̄ G)` for `G ∈ {P(x̄), ¬P(x̄)}`, predicates of arity ≥ 1 only.
pub fn sqht_instances(sig: &Signature, gen: &mut VarGen) -> Vec<Fm> {
    let mut out = Vec::new();
    for (p, arity) in sig.iter().filter(|(_, a)| *a > 0) {
        for negated in [false, true] {
            let lit = |vars: &[Var]| {
                let a = atom(p, vars);
                if negated {
                    Formula::not(a)
                } else {
                    a
                }
            };
            let xs = fresh(gen, *arity);
            let ys = fresh(gen, *arity);
            let body = Formula::imp(lit(&xs), close(true, &ys, lit(&ys)));
            out.push(close(false, &xs, body));
        }
    }
    out
}

/// The axiom instances for the signature of `f`, schema instances first.
pub fn axioms_for(f: &Formula) -> Vec<Fm> {
    let sig = signature_of(f);
    let mut gen = VarGen::above(f);
    let mut axioms = hos_instances(&sig, &mut gen);
    axioms.extend(sqht_instances(&sig, &mut gen));
    axioms
}

/// `(A1 ∧ … ∧ Ak) → f`, or `f` itself when there are no axioms.
pub fn embed(f: &Fm) -> Fm {
    match Formula::conj(axioms_for(f)) {
        Some(a) => Formula::imp(a, f.clone()),
        None => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_formula;

    fn p(s: &str) -> Fm {
        parse_formula(s).unwrap()
    }

    fn sig(items: &[(&str, usize)]) -> Signature {
        items.iter().map(|(n, a)| (Sym::from(*n), *a)).collect()
    }

    /// Compare up to a consistent renaming of variables.
    fn alpha_eq(a: &Formula, b: &Formula) -> bool {
        fn canon(f: &Formula) -> String {
            let mut order = Vec::new();
            f.visit_vars(&mut |v| {
                if !order.contains(&v) {
                    order.push(v)
                }
            });
            f.rename(&|v| order.iter().position(|w| *w == v).map(|i| Var(i as u32))).to_string()
        }
        canon(a) == canon(b)
    }

    #[test]
    fn signatures() {
        assert_eq!(signature_of(&p("(p => q) ; (q => p)")), sig(&[("p", 0), ("q", 0)]));
        assert_eq!(signature_of(&p("ex Y: all X: (p(Y) => p(X))")), sig(&[("p", 1)]));
        assert_eq!(signature_of(&p("p(a,b) , q")), sig(&[("p", 2), ("q", 0)]));
    }

    #[test]
    fn hos_counts_and_shapes() {
        let mut gen = VarGen::new();
        assert_eq!(hos_instances(&sig(&[("p", 0), ("q", 0)]), &mut gen).len(), 6);
        let one = hos_instances(&sig(&[("p", 1)]), &mut gen);
        assert_eq!(one.len(), 1);
        assert!(alpha_eq(&one[0], &p("all X: all Y: (~p(X) ; ((~p(X) => p(Y)) ; ~p(Y)))")), "{}", one[0]);
        let prop = hos_instances(&sig(&[("p", 0)]), &mut gen);
        assert_eq!(prop, vec![p("~p ; ((~p => p) ; ~p)")]);
        for n in 1..5 {
            let s: Signature = (0..n).map(|i| (Sym::from(format!("p{i}").as_str()), i % 3)).collect();
            assert_eq!(hos_instances(&s, &mut gen).len(), 2 * n * n - n);
        }
    }

    #[test]
    fn sqht_shapes() {
        let mut gen = VarGen::new();
        let inst = sqht_instances(&sig(&[("p", 1)]), &mut gen);
        assert_eq!(inst.len(), 2);
        assert!(alpha_eq(&inst[0], &p("ex X: (p(X) => all Y: p(Y))")));
        assert!(alpha_eq(&inst[1], &p("ex X: (~p(X) => all Y: ~p(Y))")));
        assert!(sqht_instances(&sig(&[("p", 0), ("q", 0)]), &mut gen).is_empty());
        let r = sqht_instances(&sig(&[("r", 2)]), &mut gen);
        assert_eq!(r.len(), 2);
        assert!(alpha_eq(&r[0], &p("ex X1: ex X2: (r(X1,X2) => all Y1: all Y2: r(Y1,Y2))")));
    }

    #[test]
    fn embedding_counts() {
        assert_eq!(axioms_for(&p("(p => q) ; (q => p)")).len(), 6);
        assert_eq!(axioms_for(&p("ex Y: all X: (p(Y) => p(X))")).len(), 3);
        let f = p("p => p");
        let e = embed(&f);
        assert_eq!(*e, Formula::Imp(p("~p ; ((~p => p) ; ~p)"), f));
        for a in axioms_for(&p("ex Y: all X: (p(Y,X) => q(X))")) {
            assert!(a.free_vars().is_empty(), "{a}");
        }
    }
}
