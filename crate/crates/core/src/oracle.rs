//! Semantic checks by model enumeration.
//!
//! An HT interpretation has two worlds, *here* and *there*, over one constant
//! domain. Functions are interpreted rigidly; every ground atom is either
//! absent, true only there, or true in both worlds (so here ⊆ there).
//! Truth at *there* is classical truth in the there-world; truth at *here*
//! treats implication intuitionistically across the two worlds.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use crate::frontend::symbols;
use crate::term::{Formula, Sym, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum World {
    Here,
    There,
}

/// Truth status of a ground atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Absent = 0,
    ThereOnly = 1,
    Both = 2,
}

impl Status {
    const ALL: [Status; 3] = [Status::Absent, Status::ThereOnly, Status::Both];

    fn holds(self, w: World) -> bool {
        match w {
            World::Here => self == Status::Both,
            World::There => self != Status::Absent,
        }
    }
}

/// A finite HT interpretation with domain `0..domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interp {
    pub domain: usize,
    /// Function tables indexed by the mixed-radix encoding of the arguments.
    pub funs: HashMap<(Sym, usize), Vec<usize>>,
    pub preds: HashMap<(Sym, usize), Vec<Status>>,
}

impl Interp {
    fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, a| acc * self.domain + a)
    }

    fn term(&self, t: &Term, env: &[(Var, usize)]) -> usize {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(w, _)| w == v)
                .map(|(_, d)| *d)
                .unwrap_or(0),
            Term::Fun(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                match self.funs.get(&(f.clone(), args.len())) {
                    Some(table) => table[self.index(&vals)],
                    None => 0,
                }
            }
        }
    }

    fn atom(&self, p: &Sym, args: &[Term], env: &[(Var, usize)], w: World) -> bool {
        let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
        match self.preds.get(&(p.clone(), args.len())) {
            Some(table) => table[self.index(&vals)].holds(w),
            None => false,
        }
    }

    /// Truth of `f` at world `w`; free variables are looked up in `env`
    /// (innermost binding last) and default to element 0.
    pub fn eval(&self, f: &Formula, w: World, env: &mut Vec<(Var, usize)>) -> bool {
        match f {
            Formula::Atom(p, args) => self.atom(p, args, env, w),
            Formula::Not(a) => !self.eval(a, World::There, env),
            Formula::And(a, b) => self.eval(a, w, env) && self.eval(b, w, env),
            Formula::Or(a, b) => self.eval(a, w, env) || self.eval(b, w, env),
            Formula::Imp(a, b) => self.implies(a, b, w, env),
            Formula::Iff(a, b) => self.implies(a, b, w, env) && self.implies(b, a, w, env),
            Formula::Forall(x, a) => (0..self.domain).all(|d| {
                env.push((*x, d));
                let r = self.eval(a, w, env);
                env.pop();
                r
            }),
            Formula::Exists(x, a) => (0..self.domain).any(|d| {
                env.push((*x, d));
                let r = self.eval(a, w, env);
                env.pop();
                r
            }),
        }
    }

    fn implies(&self, a: &Formula, b: &Formula, w: World, env: &mut Vec<(Var, usize)>) -> bool {
        match w {
            World::There => !self.eval(a, World::There, env) || self.eval(b, World::There, env),
            World::Here => {
                (!self.eval(a, World::Here, env) || self.eval(b, World::Here, env))
                    && (!self.eval(a, World::There, env) || self.eval(b, World::There, env))
            }
        }
    }
}

impl fmt::Display for Interp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain {{0..{}}}", self.domain)?;
        let mut preds: Vec<_> = self.preds.iter().collect();
        preds.sort_by(|a, b| a.0.cmp(b.0));
        for ((p, arity), table) in preds {
            for (i, s) in table.iter().enumerate() {
                if *s == Status::Absent {
                    continue;
                }
                let world = if *s == Status::Both { "here+there" } else { "there" };
                if *arity == 0 {
                    write!(f, "; {p}: {world}")?;
                } else {
                    let args = decode(i, *arity, self.domain);
                    let args: Vec<String> = args.iter().map(|d| d.to_string()).collect();
                    write!(f, "; {p}({}): {world}", args.join(","))?;
                }
            }
        }
        Ok(())
    }
}

fn decode(mut i: usize, arity: usize, domain: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = i % domain;
        i /= domain;
    }
    out
}

/// HT-valid iff true at *here* in every interpretation.
pub fn ht_holds(f: &Formula, m: &Interp) -> bool {
    m.eval(f, World::Here, &mut Vec::new())
}

/// Two-valued propositional model: the atoms true here and the atoms true there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropModel {
    pub here: Vec<Sym>,
    pub there: Vec<Sym>,
}

impl fmt::Display for PropModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Sym]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "H={{{}}} T={{{}}}", join(&self.here), join(&self.there))
    }
}

fn prop_atoms(f: &Formula) -> Vec<Sym> {
    let (_, preds) = symbols(f);
    let mut atoms: Vec<Sym> = preds.into_iter().map(|(p, _)| p).collect();
    atoms.sort();
    atoms
}

fn prop_interp(atoms: &[Sym], statuses: &[Status]) -> Interp {
    Interp {
        domain: 1,
        funs: HashMap::new(),
        preds: atoms
            .iter()
            .zip(statuses)
            .map(|(a, s)| ((a.clone(), 0), vec![*s]))
            .collect(),
    }
}

/// Decide HT validity of a propositional formula. Returns the first
/// countermodel in the enumeration that orders atoms by name and tries
/// absent, there-only, both for each, the first atom varying slowest.
pub fn ht_valid_prop(f: &Formula) -> Result<(), PropModel> {
    assert!(f.is_propositional(), "ht_valid_prop needs a propositional formula");
    let atoms = prop_atoms(f);
    let mut statuses = vec![Status::Absent; atoms.len()];
    loop {
        let m = prop_interp(&atoms, &statuses);
        if !ht_holds(f, &m) {
            let pick = |want: fn(Status) -> bool| {
                atoms
                    .iter()
                    .zip(&statuses)
                    .filter(|(_, s)| want(**s))
                    .map(|(a, _)| a.clone())
                    .collect()
            };
            return Err(PropModel {
                here: pick(|s| s == Status::Both),
                there: pick(|s| s != Status::Absent),
            });
        }
        if !advance(&mut statuses) {
            return Ok(());
        }
    }
}

/// Classical validity of a propositional formula by truth tables.
pub fn classical_valid_prop(f: &Formula) -> bool {
    assert!(f.is_propositional(), "classical_valid_prop needs a propositional formula");
    let atoms = prop_atoms(f);
    (0u64..1 << atoms.len()).all(|bits| {
        let statuses: Vec<Status> = (0..atoms.len())
            .map(|i| if bits >> i & 1 == 1 { Status::Both } else { Status::Absent })
            .collect();
        prop_interp(&atoms, &statuses).eval(f, World::There, &mut Vec::new())
    })
}

fn advance(statuses: &mut [Status]) -> bool {
    for s in statuses.iter_mut().rev() {
        match s {
            Status::Absent => {
                *s = Status::ThereOnly;
                return true;
            }
            Status::ThereOnly => {
                *s = Status::Both;
                return true;
            }
            Status::Both => *s = Status::Absent,
        }
    }
    false
}

/// Search interpretations with domains `1..=max_domain` for one where `f`
/// fails at *here*. Gives up after `budget` interpretations or at `deadline`.
/// A returned interpretation is a genuine countermodel; `None` proves nothing.
pub fn ht_countermodel(f: &Formula, max_domain: usize, budget: u64, deadline: Option<Instant>) -> Option<Interp> {
    let (funs, preds) = symbols(f);
    let mut spent = 0u64;
    for domain in 1..=max_domain {
        let mut cells: Vec<usize> = Vec::new(); // radix per cell
        let mut layout = Vec::new();
        for (name, arity) in &funs {
            let n = domain.pow(*arity as u32);
            layout.push((true, name.clone(), *arity, cells.len(), n));
            cells.extend(std::iter::repeat_n(domain, n));
        }
        for (name, arity) in &preds {
            let n = domain.pow(*arity as u32);
            layout.push((false, name.clone(), *arity, cells.len(), n));
            cells.extend(std::iter::repeat_n(3, n));
        }
        let mut digits = vec![0usize; cells.len()];
        loop {
            spent += 1;
            if spent > budget || (spent.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() >= d)) {
                return None;
            }
            let mut m = Interp { domain, funs: HashMap::new(), preds: HashMap::new() };
            for (is_fun, name, arity, start, n) in &layout {
                let slice = &digits[*start..start + n];
                if *is_fun {
                    m.funs.insert((name.clone(), *arity), slice.to_vec());
                } else {
                    m.preds.insert((name.clone(), *arity), slice.iter().map(|d| Status::ALL[*d]).collect());
                }
            }
            if !ht_holds(f, &m) {
                return Some(m);
            }
            let mut carry = true;
            for i in (0..digits.len()).rev() {
                digits[i] += 1;
                if digits[i] < cells[i] {
                    carry = false;
                    break;
                }
                digits[i] = 0;
            }
            if carry {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_formula;

    fn valid(s: &str) -> bool {
        ht_valid_prop(&parse_formula(s).unwrap()).is_ok()
    }

    #[test]
    fn known_validities() {
        assert!(valid("p => p"));
        assert!(valid("(p ; p) => p"));
        assert!(valid("~p ; ~~p"));
        assert!(valid("p ; (p => q) ; ~q"));
        assert!(!valid("p ; ~p"));
        assert!(!valid("~~p => p"));
        assert!(valid("(p => q) ; (q => p)"));
    }

    #[test]
    fn excluded_middle_countermodel() {
        let m = ht_valid_prop(&parse_formula("p ; ~p").unwrap()).unwrap_err();
        assert_eq!(m.here, Vec::<Sym>::new());
        assert_eq!(m.there, vec![Sym::from("p")]);
    }

    #[test]
    fn classical() {
        assert!(classical_valid_prop(&parse_formula("p ; ~p").unwrap()));
        assert!(classical_valid_prop(&parse_formula("~~p => p").unwrap()));
        assert!(!classical_valid_prop(&parse_formula("p => q").unwrap()));
    }

    #[test]
    fn first_order_countermodels() {
        let shift = parse_formula("(all X: ex Y: p(X,Y)) => (ex Y: all X: p(X,Y))").unwrap();
        let m = ht_countermodel(&shift, 3, 100_000, None).expect("countermodel");
        assert_eq!(m.domain, 2);
        let triv = parse_formula("(all X: p(X)) => p(a)").unwrap();
        assert!(ht_countermodel(&triv, 3, 100_000, None).is_none());
        // static domain: the SQHT shape holds in every interpretation
        let sq = parse_formula("ex X: (p(X) => all X: p(X))").unwrap();
        assert!(ht_countermodel(&sq, 3, 100_000, None).is_none());
    }

    #[test]
    fn budget_is_respected() {
        let f = parse_formula("(all X: ex Y: p(X,Y)) => (ex Y: all X: p(X,Y))").unwrap();
        assert!(ht_countermodel(&f, 3, 2, None).is_none());
    }
}
