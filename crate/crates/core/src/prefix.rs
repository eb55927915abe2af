//! Prefix unification: solving equations between strings of prefix symbols.
//!
//! The solver performs Nielsen-style splitting. A leading variable facing a
//! constant is either empty or starts with that constant; of two different
//! leading variables one is empty, both are equal, or one is a proper prefix
//! of the other.
//! Solutions are enumerated depth first. Fresh variables are capped per
//! branch, which bounds the search on equations with infinitely many
//! independent solutions.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;
use std::time::Instant;

use crate::matrix::PSym;
use crate::term::{Substitution, Term, Var, VarGen};

pub type Equation = (Vec<PSym>, Vec<PSym>);

/// Solver state. Term arguments of prefix constants are unified in the
/// borrowed term substitution; arguments that are prefix variables produce
/// further equations.
pub struct PrefixSolver<'a> {
    sigma: &'a mut Substitution,
    is_prefix_var: &'a dyn Fn(Var) -> bool,
    gen: &'a mut VarGen,
    bind: HashMap<Var, Rc<[PSym]>>,
    trail: Vec<Var>,
    nonempty: HashSet<Var>,
    nonempty_trail: Vec<Var>,
    fresh_used: usize,
    max_fresh: usize,
    deadline: Option<Instant>,
    steps: u64,
    timed_out: bool,
}

struct Mark {
    trail: usize,
    nonempty: usize,
    sigma: usize,
    gen: u32,
    fresh: usize,
}

impl<'a> PrefixSolver<'a> {
    pub fn new(
        sigma: &'a mut Substitution,
        is_prefix_var: &'a dyn Fn(Var) -> bool,
        gen: &'a mut VarGen,
        deadline: Option<Instant>,
    ) -> Self {
        PrefixSolver {
            sigma,
            is_prefix_var,
            gen,
            bind: HashMap::new(),
            trail: Vec::new(),
            nonempty: HashSet::new(),
            nonempty_trail: Vec::new(),
            fresh_used: 0,
            max_fresh: 0,
            deadline,
            steps: 0,
            timed_out: false,
        }
    }

    pub fn timed_out(&self) -> bool {
        self.timed_out
    }

    pub fn sigma(&self) -> &Substitution {
        self.sigma
    }

    pub fn bindings(&self) -> impl Iterator<Item = (Var, &[PSym])> + '_ {
        self.bind.iter().map(|(v, s)| (*v, &**s))
    }

    /// Enumerate solutions of `eqs`. `visit` returns `true` to stop; the
    /// result is `true` iff some visit did. State is restored afterwards
    /// unless a visit stopped the search.
    pub fn solve(&mut self, eqs: Vec<Equation>, visit: &mut dyn FnMut(&Self) -> bool) -> bool {
        let symbols: usize = eqs.iter().map(|(l, r)| l.len() + r.len()).sum();
        self.max_fresh = symbols + 4;
        self.go(eqs, visit)
    }

    /// Apply the prefix bindings and term-level variable renamings.
    pub fn resolve(&self, s: &[PSym]) -> Vec<PSym> {
        let mut out = Vec::with_capacity(s.len());
        self.resolve_into(s, &mut out);
        out
    }

    fn resolve_into(&self, s: &[PSym], out: &mut Vec<PSym>) {
        for sym in s {
            match sym {
                PSym::Var(v) => {
                    let v = self.var_alias(*v);
                    match self.bind.get(&v) {
                        Some(b) => self.resolve_into(b, out),
                        None => out.push(PSym::Var(v)),
                    }
                }
                c => out.push(c.clone()),
            }
        }
    }

    /// A prefix variable the term unifier has identified with another one.
    fn var_alias(&self, v: Var) -> Var {
        match self.sigma.deref(&Term::Var(v)) {
            Term::Var(w) => *w,
            _ => v,
        }
    }

    fn mark(&self) -> Mark {
        Mark {
            trail: self.trail.len(),
            nonempty: self.nonempty_trail.len(),
            sigma: self.sigma.mark(),
            gen: self.gen.peek(),
            fresh: self.fresh_used,
        }
    }

    fn undo(&mut self, m: Mark) {
        while self.trail.len() > m.trail {
            let v = self.trail.pop().unwrap();
            self.bind.remove(&v);
        }
        while self.nonempty_trail.len() > m.nonempty {
            let v = self.nonempty_trail.pop().unwrap();
            self.nonempty.remove(&v);
        }
        self.sigma.undo(m.sigma);
        self.gen.rewind(m.gen);
        self.fresh_used = m.fresh;
    }

    fn set(&mut self, v: Var, s: Vec<PSym>) {
        self.bind.insert(v, s.into());
        self.trail.push(v);
    }

    fn require_nonempty(&mut self, v: Var) {
        if self.nonempty.insert(v) {
            self.nonempty_trail.push(v);
        }
    }

    fn fresh(&mut self) -> Option<Var> {
        if self.fresh_used >= self.max_fresh {
            return None;
        }
        self.fresh_used += 1;
        Some(self.gen.fresh())
    }

    fn tick(&mut self) -> bool {
        self.steps += 1;
        if self.steps.is_multiple_of(256) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        !self.timed_out
    }

    /// Equate the arguments of two occurrences of one prefix constant.
    fn unify_const_args(&mut self, a: &[Term], b: &[Term], eqs: &mut Vec<Equation>) -> bool {
        if a.len() != b.len() {
            return false;
        }
        for (s, t) in a.iter().zip(b) {
            let s = self.sigma.deref(s).clone();
            let t = self.sigma.deref(t).clone();
            match (&s, &t) {
                (Term::Var(x), Term::Var(y)) if (self.is_prefix_var)(*x) => {
                    eqs.push((vec![PSym::Var(*x)], vec![PSym::Var(*y)]));
                }
                _ => {
                    if !self.sigma.unify(&s, &t) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn occurs_in_args(&self, v: Var, c: &PSym) -> bool {
        match c {
            PSym::Const(_, args) => args.iter().any(|a| self.sigma.apply(a).contains_var(v)),
            PSym::Var(_) => false,
        }
    }

    /// Strip common ends of an equation after resolving it. `None` if the
    /// equation is unsolvable on its face.
    fn normalize(&self, (l, r): &Equation) -> Option<(Equation, u8)> {
        let l = self.resolve(l);
        let r = self.resolve(r);
        let head = l.iter().zip(&r).take_while(|(a, b)| a == b).count();
        let tail = l[head..].iter().rev().zip(r[head..].iter().rev()).take_while(|(a, b)| a == b).count();
        let l = l[head..l.len() - tail].to_vec();
        let r = r[head..r.len() - tail].to_vec();
        let rank = match (l.first(), r.first()) {
            (None, None) => 0,
            (None, Some(_)) | (Some(_), None) => {
                let rest = if l.is_empty() { &r } else { &l };
                let forced_empty = rest.iter().all(|s| matches!(s, PSym::Var(v) if !self.nonempty.contains(v)));
                if !forced_empty {
                    return None;
                }
                0
            }
            (Some(PSym::Const(a, _)), Some(PSym::Const(b, _))) => {
                if a != b {
                    return None;
                }
                0
            }
            (Some(PSym::Var(x)), Some(PSym::Const(..))) | (Some(PSym::Const(..)), Some(PSym::Var(x))) => {
                if self.nonempty.contains(x) {
                    1
                } else {
                    2
                }
            }
            (Some(PSym::Var(_)), Some(PSym::Var(_))) => 3,
        };
        if let (Some(PSym::Const(a, _)), Some(PSym::Const(b, _))) = (l.last(), r.last()) {
            if a != b {
                return None;
            }
        }
        Some(((l, r), rank))
    }

    fn go(&mut self, eqs: Vec<Equation>, visit: &mut dyn FnMut(&Self) -> bool) -> bool {
        if !self.tick() {
            return false;
        }
        let mut work = Vec::with_capacity(eqs.len());
        let mut best: Option<(usize, u8)> = None;
        for eq in &eqs {
            let Some((eq, rank)) = self.normalize(eq) else {
                return false;
            };
            if eq.0.is_empty() && eq.1.is_empty() {
                continue;
            }
            if best.is_none_or(|(_, r)| rank < r) {
                best = Some((work.len(), rank));
            }
            work.push(eq);
        }
        let Some((i, _)) = best else {
            return visit(self);
        };
        let (l, r) = work.swap_remove(i);
        let mut eqs = work;
        let (l, r) = (&l[..], &r[..]);
        match (l.first(), r.first()) {
            (None, None) => self.go(eqs, visit),
            (None, Some(_)) | (Some(_), None) => {
                let rest = if l.is_empty() { r } else { l };
                let m = self.mark();
                let mut ok = true;
                for s in rest {
                    match s {
                        PSym::Var(v) if !self.nonempty.contains(v) => {
                            if !self.bind.contains_key(v) {
                                self.set(*v, Vec::new());
                            }
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                let found = ok && self.go(eqs, visit);
                if !found {
                    self.undo(m);
                }
                found
            }
            (Some(PSym::Const(a, aa)), Some(PSym::Const(b, ba))) => {
                if a != b {
                    return false;
                }
                let m = self.mark();
                let mut found = false;
                if self.unify_const_args(aa, ba, &mut eqs) {
                    eqs.push((l[1..].to_vec(), r[1..].to_vec()));
                    found = self.go(eqs, visit);
                }
                if !found {
                    self.undo(m);
                }
                found
            }
            (Some(PSym::Var(x)), Some(c @ PSym::Const(..))) | (Some(c @ PSym::Const(..)), Some(PSym::Var(x))) => {
                let (x, c) = (*x, c.clone());
                let eq = (l.to_vec(), r.to_vec());
                if !self.nonempty.contains(&x) && self.branch(&eqs, &eq, visit, |s| {
                    s.set(x, Vec::new());
                    true
                }) {
                    return true;
                }
                if self.occurs_in_args(x, &c) {
                    return false;
                }
                self.branch(&eqs, &eq, visit, |s| match s.fresh() {
                    Some(x1) => {
                        s.set(x, vec![c.clone(), PSym::Var(x1)]);
                        true
                    }
                    None => false,
                })
            }
            (Some(PSym::Var(x)), Some(PSym::Var(y))) => {
                let (x, y) = (*x, *y);
                let eq = (l.to_vec(), r.to_vec());
                let equal = |s: &mut Self| {
                    if s.nonempty.contains(&x) {
                        s.require_nonempty(y);
                    }
                    s.set(x, vec![PSym::Var(y)]);
                    true
                };
                if self.branch(&eqs, &eq, visit, equal) {
                    return true;
                }
                for z in [x, y] {
                    let empty = |s: &mut Self| {
                        s.set(z, Vec::new());
                        true
                    };
                    if !self.nonempty.contains(&z) && self.branch(&eqs, &eq, visit, empty) {
                        return true;
                    }
                }
                let longer = |a: Var, b: Var| {
                    move |s: &mut Self| match s.fresh() {
                        Some(a1) => {
                            s.require_nonempty(a1);
                            s.set(a, vec![PSym::Var(b), PSym::Var(a1)]);
                            true
                        }
                        None => false,
                    }
                };
                self.branch(&eqs, &eq, visit, longer(x, y)) || self.branch(&eqs, &eq, visit, longer(y, x))
            }
        }
    }

    /// Run `step` and continue with the equations plus `eq`, undoing on failure.
    fn branch(
        &mut self,
        eqs: &[Equation],
        eq: &Equation,
        visit: &mut dyn FnMut(&Self) -> bool,
        step: impl FnOnce(&mut Self) -> bool,
    ) -> bool {
        let m = self.mark();
        let mut found = false;
        if step(self) {
            let mut next = eqs.to_vec();
            next.push(eq.clone());
            found = self.go(next, visit);
        }
        if !found {
            self.undo(m);
        }
        found
    }
}

/// A solution restricted to the variables of the input equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSubst {
    pub map: HashMap<Var, Vec<PSym>>,
}

impl PrefixSubst {
    pub fn apply(&self, p: &[PSym]) -> Vec<PSym> {
        let mut out = Vec::new();
        for s in p {
            match s {
                PSym::Var(v) => match self.map.get(v) {
                    Some(b) => out.extend(b.iter().cloned()),
                    None => out.push(s.clone()),
                },
                c => out.push(c.clone()),
            }
        }
        out
    }
}

fn equation_vars(eqs: &[Equation]) -> BTreeSet<Var> {
    let mut vars = BTreeSet::new();
    for (l, r) in eqs {
        for s in l.iter().chain(r) {
            if let PSym::Var(v) = s {
                vars.insert(*v);
            }
        }
    }
    vars
}

/// Enumerate unifiers of a set of prefix equations whose constants carry
/// no arguments. `visit` returns `true` to stop; the result says whether it
/// did. Variables left unbound in a solution range over all strings.
pub fn prefix_unify(eqs: &[Equation], mut visit: impl FnMut(&PrefixSubst) -> bool) -> bool {
    let vars = equation_vars(eqs);
    let mut sigma = Substitution::new();
    let mut gen = VarGen::starting_at(vars.iter().next_back().map_or(0, |v| v.0 + 1));
    let is_prefix = |_: Var| true;
    let mut solver = PrefixSolver::new(&mut sigma, &is_prefix, &mut gen, None);
    solver.solve(eqs.to_vec(), &mut |s| {
        let map = vars.iter().map(|v| (*v, s.resolve(&[PSym::Var(*v)]))).collect();
        visit(&PrefixSubst { map })
    })
}

/// The first unifier, if any.
pub fn first_unifier(eqs: &[Equation]) -> Option<PrefixSubst> {
    let mut out = None;
    prefix_unify(eqs, |s| {
        out = Some(s.clone());
        true
    });
    out
}
