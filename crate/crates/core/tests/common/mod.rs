//! Formula generators and comparison helpers shared by the integration tests.
#![allow(dead_code)]

use hatprove::term::{Fm, Formula, Term, Var};
use rand::Rng;

/// Every propositional formula over `atoms` with ¬ ∧ ∨ → of exactly `size` nodes.
pub fn formulas_of_size(atoms: &[&str], size: usize) -> Vec<Fm> {
    let mut table: Vec<Vec<Fm>> = vec![Vec::new()];
    for n in 1..=size {
        let mut out: Vec<Fm> = Vec::new();
        if n == 1 {
            out.extend(atoms.iter().map(|a| Formula::prop(a)));
        } else {
            out.extend(table[n - 1].iter().map(|a| Formula::not(a.clone())));
            for left in 1..n - 1 {
                let right = n - 1 - left;
                for a in &table[left] {
                    for b in &table[right] {
                        out.push(Formula::and(a.clone(), b.clone()));
                        out.push(Formula::or(a.clone(), b.clone()));
                        out.push(Formula::imp(a.clone(), b.clone()));
                    }
                }
            }
        }
        table.push(out);
    }
    table.swap_remove(size)
}

/// Every formula of size `1..=max`.
pub fn formulas_up_to(atoms: &[&str], max: usize) -> Vec<Fm> {
    (1..=max).flat_map(|n| formulas_of_size(atoms, n)).collect()
}

/// A random formula with at most `max` nodes.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], max: usize) -> Fm {
    if max <= 2 || rng.gen_bool(0.15) {
        return match max {
            2 if rng.gen_bool(0.5) => Formula::not(Formula::prop(atoms[rng.gen_range(0..atoms.len())])),
            _ => Formula::prop(atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    if rng.gen_bool(0.2) {
        return Formula::not(random_formula(rng, atoms, max - 1));
    }
    let left = rng.gen_range(1..max - 1);
    let a = random_formula(rng, atoms, left);
    let b = random_formula(rng, atoms, max - 1 - a.size());
    match rng.gen_range(0..3) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::imp(a, b),
    }
}

type Env = Vec<(Var, Var)>;

fn term_eq(a: &Term, b: &Term, env: &Env) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match env.iter().rev().find(|(l, r)| l == x || r == y) {
            Some((l, r)) => l == x && r == y,
            None => x == y,
        },
        (Term::Fun(f, xs), Term::Fun(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| term_eq(x, y, env))
        }
        _ => false,
    }
}

/// Alpha-equivalence. While `hole` is set, free occurrences of that variable
/// on the left are matched against arbitrary terms on the right, all of which
/// must agree; the agreed term lands in `found`.
fn matches(a: &Fm, b: &Fm, env: &mut Env, hole: Option<Var>, found: &mut Option<Term>) -> bool {
    use Formula as F;
    match (&**a, &**b) {
        (F::Atom(p, xs), F::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| match_term(x, y, env, hole, found))
        }
        (F::Not(x), F::Not(y)) => matches(x, y, env, hole, found),
        (F::And(a1, a2), F::And(b1, b2))
        | (F::Or(a1, a2), F::Or(b1, b2))
        | (F::Imp(a1, a2), F::Imp(b1, b2))
        | (F::Iff(a1, a2), F::Iff(b1, b2)) => matches(a1, b1, env, hole, found) && matches(a2, b2, env, hole, found),
        (F::Forall(x, a1), F::Forall(y, b1)) | (F::Exists(x, a1), F::Exists(y, b1)) => {
            env.push((*x, *y));
            let hole = hole.filter(|h| h != x);
            let ok = matches(a1, b1, env, hole, found);
            env.pop();
            ok
        }
        _ => false,
    }
}

fn match_term(a: &Term, b: &Term, env: &Env, hole: Option<Var>, found: &mut Option<Term>) -> bool {
    match a {
        Term::Var(x) if Some(*x) == hole && !env.iter().any(|(l, _)| l == x) => {
            // The instance must not mention variables bound inside the body.
            if b.vars().iter().any(|v| env.iter().any(|(_, r)| r == v)) {
                return false;
            }
            match found {
                Some(t) => t == b,
                None => {
                    *found = Some(b.clone());
                    true
                }
            }
        }
        Term::Fun(f, xs) => match b {
            Term::Fun(g, ys) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|(x, y)| match_term(x, y, env, hole, found))
            }
            _ => false,
        },
        _ => term_eq(a, b, env),
    }
}

pub fn alpha_eq(a: &Fm, b: &Fm) -> bool {
    matches(a, b, &mut Vec::new(), None, &mut None)
}

/// Is `c` an instance `body[x := t]`? Returns the instance term, or the
/// variable itself when `x` does not occur.
pub fn instance_of(body: &Fm, x: Var, c: &Fm) -> Option<Term> {
    let mut found = None;
    matches(body, c, &mut Vec::new(), Some(x), &mut found).then(|| found.unwrap_or(Term::Var(x)))
}
