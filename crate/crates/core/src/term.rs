//! Terms, formulas, substitutions and the small toolbox every prover shares:
//! occurs-check unification on a backtrackable trail, fresh copies, Skolem
//! terms, free variables and formula size.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

/// Interned-by-refcount symbol name (function, predicate or Skolem symbol).
pub type Sym = Rc<str>;

/// Reserved prefix for generated Skolem symbols. Input symbols never contain `#`.
pub const SKOLEM_PREFIX: &str = "sk#";

/// Name of the equality predicate.
pub const EQUALITY: &str = "=";

/// Variable identity. Bound and search variables share one id space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// Source of fresh variables.
#[derive(Clone, Debug, Default)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn starting_at(next: u32) -> Self {
        VarGen { next }
    }

    /// A generator whose first variable is strictly above every variable in `f`.
    pub fn above(f: &Formula) -> Self {
        let mut max = None;
        f.visit_vars(&mut |v| max = max.max(Some(v.0)));
        VarGen { next: max.map_or(0, |m| m + 1) }
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var(self.next);
        self.next += 1;
        v
    }

    pub fn peek(&self) -> u32 {
        self.next
    }

    /// Reset to an earlier `peek()` value. Only sound once every variable
    /// allocated since then has been discarded.
    pub fn rewind(&mut self, mark: u32) {
        debug_assert!(mark <= self.next);
        self.next = mark;
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Var),
    Fun(Sym, Rc<[Term]>),
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::Fun(name.into(), Rc::from(Vec::new()))
    }

    pub fn fun(name: &str, args: Vec<Term>) -> Term {
        Term::Fun(name.into(), args.into())
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::Fun(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    fn visit_vars(&self, out: &mut impl FnMut(Var)) {
        match self {
            Term::Var(v) => out(*v),
            Term::Fun(_, args) => args.iter().for_each(|a| a.visit_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        self.visit_vars(&mut |v| {
            s.insert(v);
        });
        s
    }

    fn replace(&self, x: Var, t: &Term) -> Term {
        match self {
            Term::Var(v) if *v == x => t.clone(),
            Term::Var(_) => self.clone(),
            Term::Fun(f, args) => {
                if args.iter().any(|a| a.contains_var(x)) {
                    Term::Fun(f.clone(), args.iter().map(|a| a.replace(x, t)).collect())
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Rename variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &impl Fn(Var) -> Option<Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map(*v).unwrap_or(*v)),
            Term::Fun(f, args) if args.is_empty() => Term::Fun(f.clone(), args.clone()),
            Term::Fun(f, args) => Term::Fun(f.clone(), args.iter().map(|a| a.rename(map)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => v.fmt(f),
            Term::Fun(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

/// Shared formula handle. Sequents and matrices hold these by reference count.
pub type Fm = Rc<Formula>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Atom(Sym, Rc<[Term]>),
    Not(Fm),
    And(Fm, Fm),
    Or(Fm, Fm),
    Imp(Fm, Fm),
    Iff(Fm, Fm),
    Forall(Var, Fm),
    Exists(Var, Fm),
}

impl Formula {
    pub fn atom(name: &str, args: Vec<Term>) -> Fm {
        Rc::new(Formula::Atom(name.into(), args.into()))
    }
    pub fn prop(name: &str) -> Fm {
        Formula::atom(name, Vec::new())
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Fm) -> Fm {
        Rc::new(Formula::Not(a))
    }
    pub fn and(a: Fm, b: Fm) -> Fm {
        Rc::new(Formula::And(a, b))
    }
    pub fn or(a: Fm, b: Fm) -> Fm {
        Rc::new(Formula::Or(a, b))
    }
    pub fn imp(a: Fm, b: Fm) -> Fm {
        Rc::new(Formula::Imp(a, b))
    }
    pub fn iff(a: Fm, b: Fm) -> Fm {
        Rc::new(Formula::Iff(a, b))
    }
    pub fn forall(x: Var, a: Fm) -> Fm {
        Rc::new(Formula::Forall(x, a))
    }
    pub fn exists(x: Var, a: Fm) -> Fm {
        Rc::new(Formula::Exists(x, a))
    }

    /// Right-nested conjunction; `None` for an empty list.
    pub fn conj(items: impl IntoIterator<Item = Fm>) -> Option<Fm> {
        let items: Vec<Fm> = items.into_iter().collect();
        items.into_iter().rev().reduce(|acc, f| Formula::and(f, acc))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(..))
    }

    /// Atom or negated atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(..) => true,
            Formula::Not(a) => a.is_atom(),
            _ => false,
        }
    }

    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_, args) => args.is_empty(),
            Formula::Not(a) => a.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Every variable occurrence, bound or free, including binders.
    pub fn visit_vars(&self, out: &mut impl FnMut(Var)) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.visit_vars(out)),
            Formula::Not(a) => a.visit_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.visit_vars(out);
                b.visit_vars(out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                out(*x);
                a.visit_vars(out);
            }
        }
    }

    pub fn visit_atoms<'a>(&'a self, out: &mut impl FnMut(&'a Sym, &'a [Term])) {
        match self {
            Formula::Atom(p, args) => out(p, args),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.visit_atoms(out);
                b.visit_atoms(out);
            }
        }
    }

    /// Number of atoms plus connective and quantifier nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        fn go(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
            match f {
                Formula::Atom(_, args) => {
                    for a in args.iter() {
                        a.visit_vars(&mut |v| {
                            if !bound.contains(&v) {
                                out.insert(v);
                            }
                        });
                    }
                }
                Formula::Not(a) => go(a, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(x, a) | Formula::Exists(x, a) => {
                    bound.push(*x);
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn has_free(&self, x: Var) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.contains_var(x)),
            Formula::Not(a) => a.has_free(x),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.has_free(x) || b.has_free(x)
            }
            Formula::Forall(y, a) | Formula::Exists(y, a) => *y != x && a.has_free(x),
        }
    }

    /// Rename every variable (binders included) through `map`.
    pub fn rename(&self, map: &impl Fn(Var) -> Option<Var>) -> Fm {
        let r = |a: &Fm| a.rename(map);
        Rc::new(match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| a.rename(map)).collect()),
            Formula::Not(a) => Formula::Not(r(a)),
            Formula::And(a, b) => Formula::And(r(a), r(b)),
            Formula::Or(a, b) => Formula::Or(r(a), r(b)),
            Formula::Imp(a, b) => Formula::Imp(r(a), r(b)),
            Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
            Formula::Forall(x, a) => Formula::Forall(map(*x).unwrap_or(*x), r(a)),
            Formula::Exists(x, a) => Formula::Exists(map(*x).unwrap_or(*x), r(a)),
        })
    }

    /// Replace `(A <=> B)` by `((A => B) , (B => A))` everywhere.
    pub fn expand_iff(f: &Fm) -> Fm {
        match &**f {
            Formula::Atom(..) => f.clone(),
            Formula::Not(a) => Formula::not(Formula::expand_iff(a)),
            Formula::And(a, b) => Formula::and(Formula::expand_iff(a), Formula::expand_iff(b)),
            Formula::Or(a, b) => Formula::or(Formula::expand_iff(a), Formula::expand_iff(b)),
            Formula::Imp(a, b) => Formula::imp(Formula::expand_iff(a), Formula::expand_iff(b)),
            Formula::Iff(a, b) => {
                let (a, b) = (Formula::expand_iff(a), Formula::expand_iff(b));
                Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
            }
            Formula::Forall(x, a) => Formula::forall(*x, Formula::expand_iff(a)),
            Formula::Exists(x, a) => Formula::exists(*x, Formula::expand_iff(a)),
        }
    }
}

/// Replace the free occurrences of `x` in `f` by `t`. Relies on rectified input,
/// so no binder of `f` captures a variable of `t`.
pub fn substitute(f: &Fm, x: Var, t: &Term) -> Fm {
    if !f.has_free(x) {
        return f.clone();
    }
    let s = |a: &Fm| substitute(a, x, t);
    Rc::new(match &**f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| a.replace(x, t)).collect()),
        Formula::Not(a) => Formula::Not(s(a)),
        Formula::And(a, b) => Formula::And(s(a), s(b)),
        Formula::Or(a, b) => Formula::Or(s(a), s(b)),
        Formula::Imp(a, b) => Formula::Imp(s(a), s(b)),
        Formula::Iff(a, b) => Formula::Iff(s(a), s(b)),
        Formula::Forall(y, a) => Formula::Forall(*y, s(a)),
        Formula::Exists(y, a) => Formula::Exists(*y, s(a)),
    })
}

/// Skolem term for a rule application site over the given free variables.
pub fn skolem_term(site: u32, free_vars: &[Var]) -> Term {
    Term::Fun(
        format!("{SKOLEM_PREFIX}{site}").into(),
        free_vars.iter().map(|v| Term::Var(*v)).collect(),
    )
}

pub fn is_skolem_symbol(name: &str) -> bool {
    name.starts_with(SKOLEM_PREFIX)
}

/// Variable bindings with an undo trail. Doubles as the substitution type:
/// every binding passed the occurs-check, so resolution terminates and the
/// resolved substitution is idempotent.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    slots: HashMap<Var, Term>,
    trail: Vec<Var>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.slots.get(&v)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn bound_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.trail.iter().copied()
    }

    /// Bind without checks. Callers are responsible for the occurs-check.
    pub fn bind(&mut self, v: Var, t: Term) {
        debug_assert!(!self.slots.contains_key(&v));
        self.slots.insert(v, t);
        self.trail.push(v);
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.slots.remove(&v);
        }
    }

    /// Follow variable bindings at the top of `t`.
    pub fn deref<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.slots.get(v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    /// Apply the substitution all the way down.
    pub fn apply(&self, t: &Term) -> Term {
        match self.deref(t) {
            Term::Var(v) => Term::Var(*v),
            Term::Fun(f, args) if args.is_empty() => Term::Fun(f.clone(), args.clone()),
            Term::Fun(f, args) => Term::Fun(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_formula(&self, f: &Fm) -> Fm {
        if self.slots.is_empty() {
            return f.clone();
        }
        let r = |a: &Fm| self.apply_formula(a);
        Rc::new(match &**f {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| self.apply(a)).collect()),
            Formula::Not(a) => Formula::Not(r(a)),
            Formula::And(a, b) => Formula::And(r(a), r(b)),
            Formula::Or(a, b) => Formula::Or(r(a), r(b)),
            Formula::Imp(a, b) => Formula::Imp(r(a), r(b)),
            Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
            Formula::Forall(x, a) => Formula::Forall(*x, r(a)),
            Formula::Exists(x, a) => Formula::Exists(*x, r(a)),
        })
    }

    pub fn occurs(&self, v: Var, t: &Term) -> bool {
        match self.deref(t) {
            Term::Var(w) => *w == v,
            Term::Fun(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    /// Occurs-check unification. On failure the substitution is left unchanged.
    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let mark = self.mark();
        if self.unify_inner(a, b) {
            true
        } else {
            self.undo(mark);
            false
        }
    }

    fn unify_inner(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.deref(a).clone();
        let b = self.deref(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.bind(*x, t.clone());
                true
            }
            (Term::Fun(f, fa), Term::Fun(g, ga)) => {
                f == g && fa.len() == ga.len() && fa.iter().zip(ga.iter()).all(|(s, t)| self.unify_inner(s, t))
            }
        }
    }

    pub fn unify_args(&mut self, a: &[Term], b: &[Term]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let mark = self.mark();
        for (s, t) in a.iter().zip(b) {
            if !self.unify_inner(s, t) {
                self.undo(mark);
                return false;
            }
        }
        true
    }

    /// Unify two literals (atoms or negated atoms) of matching sign.
    pub fn unify_literals(&mut self, a: &Formula, b: &Formula) -> bool {
        match (a, b) {
            (Formula::Atom(p, pa), Formula::Atom(q, qa)) => p == q && self.unify_args(pa, qa),
            (Formula::Not(a), Formula::Not(b)) => self.unify_literals(a, b),
            _ => false,
        }
    }

    /// Syntactic identity of terms modulo current bindings (no new bindings).
    pub fn identical(&self, a: &Term, b: &Term) -> bool {
        match (self.deref(a), self.deref(b)) {
            (Term::Var(x), Term::Var(y)) => x == y,
            (Term::Fun(f, fa), Term::Fun(g, ga)) => {
                f == g && fa.len() == ga.len() && fa.iter().zip(ga.iter()).all(|(s, t)| self.identical(s, t))
            }
            _ => false,
        }
    }

    pub fn identical_formulas(&self, a: &Formula, b: &Formula) -> bool {
        use Formula::*;
        match (a, b) {
            (Atom(p, pa), Atom(q, qa)) => {
                p == q && pa.len() == qa.len() && pa.iter().zip(qa.iter()).all(|(s, t)| self.identical(s, t))
            }
            (Not(a), Not(b)) => self.identical_formulas(a, b),
            (And(a1, b1), And(a2, b2))
            | (Or(a1, b1), Or(a2, b2))
            | (Imp(a1, b1), Imp(a2, b2))
            | (Iff(a1, b1), Iff(a2, b2)) => self.identical_formulas(a1, a2) && self.identical_formulas(b1, b2),
            (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)) => x == y && self.identical_formulas(a, b),
            _ => false,
        }
    }
}

/// Functional wrapper: extend `sigma` so that both terms become equal.
pub fn unify_occurs(t1: &Term, t2: &Term, sigma: &Substitution) -> Option<Substitution> {
    let mut s = sigma.clone();
    s.unify(t1, t2).then_some(s)
}

/// Rename every unbound variable not in `frozen` to a fresh one, consistently.
pub fn fresh_copy_term(t: &Term, frozen: &BTreeSet<Var>, sigma: &Substitution, gen: &mut VarGen) -> Term {
    let mut map = HashMap::new();
    copy_term_with(t, frozen, sigma, gen, &mut map)
}

fn copy_term_with(
    t: &Term,
    frozen: &BTreeSet<Var>,
    sigma: &Substitution,
    gen: &mut VarGen,
    map: &mut HashMap<Var, Var>,
) -> Term {
    match sigma.deref(t) {
        Term::Var(v) if frozen.contains(v) => Term::Var(*v),
        Term::Var(v) => Term::Var(*map.entry(*v).or_insert_with(|| gen.fresh())),
        Term::Fun(f, args) => Term::Fun(
            f.clone(),
            args.iter().map(|a| copy_term_with(a, frozen, sigma, gen, map)).collect(),
        ),
    }
}

/// Formula version of [`fresh_copy_term`]; binders are renamed along with the
/// variables they bind, so the copy stays rectified.
pub fn fresh_copy(f: &Fm, frozen: &BTreeSet<Var>, sigma: &Substitution, gen: &mut VarGen) -> Fm {
    let resolved = sigma.apply_formula(f);
    let mut vars = Vec::new();
    resolved.visit_vars(&mut |v| {
        if !frozen.contains(&v) && !vars.contains(&v) {
            vars.push(v)
        }
    });
    let map: HashMap<Var, Var> = vars.into_iter().map(|v| (v, gen.fresh())).collect();
    resolved.rename(&|v| map.get(&v).copied())
}

impl fmt::Display for Formula {
    /// Native concrete syntax, fully parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) if &**p == EQUALITY && args.len() == 2 => {
                write!(f, "{} = {}", args[0], args[1])
            }
            Formula::Atom(p, args) => {
                f.write_str(p)?;
                write_args(f, args)
            }
            Formula::Not(a) => write!(f, "~ {a}"),
            Formula::And(a, b) => write!(f, "({a} , {b})"),
            Formula::Or(a, b) => write!(f, "({a} ; {b})"),
            Formula::Imp(a, b) => write!(f, "({a} => {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <=> {b})"),
            Formula::Forall(x, a) => write!(f, "(all {x}: {a})"),
            Formula::Exists(x, a) => write!(f, "(ex {x}: {a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: u32) -> Term {
        Term::Var(Var(n))
    }
    fn c(s: &str) -> Term {
        Term::constant(s)
    }

    #[test]
    fn substitute_replaces_free_only() {
        let x = Var(0);
        let p = Formula::atom("p", vec![v(0)]);
        assert_eq!(substitute(&p, x, &c("a")), Formula::atom("p", vec![c("a")]));

        let all = Formula::forall(x, p.clone());
        assert_eq!(substitute(&all, x, &c("a")), all);

        // p(x) & ex y q(x,y)  with x := f(z)
        let y = Var(1);
        let fz = Term::fun("f", vec![v(2)]);
        let f = Formula::and(p, Formula::exists(y, Formula::atom("q", vec![v(0), v(1)])));
        let want = Formula::and(
            Formula::atom("p", vec![fz.clone()]),
            Formula::exists(y, Formula::atom("q", vec![fz.clone(), v(1)])),
        );
        assert_eq!(substitute(&f, x, &fz), want);
    }

    #[test]
    fn unify_examples() {
        let s = unify_occurs(&Term::fun("f", vec![v(0)]), &Term::fun("f", vec![c("a")]), &Substitution::new()).unwrap();
        assert_eq!(s.apply(&v(0)), c("a"));

        assert!(unify_occurs(&v(0), &Term::fun("f", vec![v(0)]), &Substitution::new()).is_none());

        let s = unify_occurs(
            &Term::fun("g", vec![v(0), c("b")]),
            &Term::fun("g", vec![c("a"), v(1)]),
            &Substitution::new(),
        )
        .unwrap();
        assert_eq!(s.apply(&v(0)), c("a"));
        assert_eq!(s.apply(&v(1)), c("b"));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn failed_unify_leaves_bindings_untouched() {
        let mut s = Substitution::new();
        assert!(!s.unify(&Term::fun("g", vec![v(0), c("a")]), &Term::fun("g", vec![c("b"), c("c")])));
        assert!(s.is_empty());
    }

    #[test]
    fn undo_restores_trail() {
        let mut s = Substitution::new();
        let m = s.mark();
        assert!(s.unify(&v(0), &c("a")));
        assert!(s.unify(&v(1), &v(0)));
        assert_eq!(s.apply(&v(1)), c("a"));
        s.undo(m);
        assert!(s.get(Var(0)).is_none() && s.get(Var(1)).is_none());
    }

    #[test]
    fn fresh_copy_examples() {
        let mut gen = VarGen { next: 100 };
        let sigma = Substitution::new();
        let p = Formula::atom("p", vec![v(0)]);
        let cp = fresh_copy(&p, &BTreeSet::new(), &sigma, &mut gen);
        assert_eq!(cp, Formula::atom("p", vec![v(100)]));

        let pxy = Formula::atom("p", vec![v(0), v(1)]);
        let frozen: BTreeSet<Var> = [Var(0)].into();
        let cp = fresh_copy(&pxy, &frozen, &sigma, &mut gen);
        assert_eq!(cp, Formula::atom("p", vec![v(0), v(101)]));

        let pa = Formula::atom("p", vec![c("a")]);
        assert_eq!(fresh_copy(&pa, &BTreeSet::new(), &sigma, &mut gen), pa);
    }

    #[test]
    fn skolem_terms() {
        assert_eq!(skolem_term(1, &[]), Term::constant("sk#1"));
        assert_eq!(skolem_term(2, &[Var(7)]), Term::fun("sk#2", vec![v(7)]));
        assert_eq!(skolem_term(3, &[Var(1), Var(2)]), skolem_term(3, &[Var(1), Var(2)]));
        assert!(is_skolem_symbol("sk#2"));
    }

    #[test]
    fn size_and_free_vars() {
        let p = Formula::prop("p");
        let q = Formula::prop("q");
        assert_eq!(p.size(), 1);
        assert_eq!(Formula::and(p.clone(), q.clone()).size(), 3);
        assert_eq!(Formula::not(Formula::or(p.clone(), q.clone())).size(), 4);

        let all = Formula::forall(Var(0), Formula::atom("p", vec![v(0), v(1)]));
        assert_eq!(all.free_vars(), [Var(1)].into());
        assert!(Formula::and(p, q).free_vars().is_empty());
        let f = Formula::imp(
            Formula::exists(Var(0), Formula::atom("p", vec![v(0)])),
            Formula::atom("p", vec![v(1)]),
        );
        assert_eq!(f.free_vars(), [Var(1)].into());
    }
}
