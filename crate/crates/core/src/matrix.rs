//! Prefixed non-clausal matrices for intuitionistic logic.
//!
//! A matrix is a set of clauses, a clause a set of literals and nested
//! matrices. Every literal carries a polarity and a prefix, a string of
//! prefix variables and constants naming the world it lives in. Variables
//! (term and prefix) are owned by the clause whose copy renames them.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use crate::term::{skolem_term, substitute, Fm, Formula, Sym, Term, Var, VarGen};

/// One prefix symbol. Constants carry the variables they depend on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PSym {
    Var(Var),
    Const(u32, Rc<[Term]>),
}

pub type Prefix = Rc<[PSym]>;

impl PSym {
    pub fn constant(id: u32) -> PSym {
        PSym::Const(id, Rc::from(Vec::new()))
    }

    pub fn visit_vars(&self, out: &mut impl FnMut(Var)) {
        match self {
            PSym::Var(v) => out(*v),
            PSym::Const(_, args) => {
                for a in args.iter() {
                    for v in a.vars() {
                        out(v)
                    }
                }
            }
        }
    }

    pub fn rename(&self, map: &impl Fn(Var) -> Var) -> PSym {
        match self {
            PSym::Var(v) => PSym::Var(map(*v)),
            PSym::Const(c, args) if args.is_empty() => PSym::Const(*c, args.clone()),
            PSym::Const(c, args) => PSym::Const(*c, args.iter().map(|a| a.rename(&|v| Some(map(v)))).collect()),
        }
    }
}

impl fmt::Display for PSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PSym::Var(v) => write!(f, "V{}", v.0),
            PSym::Const(c, args) => {
                write!(f, "a{c}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Formats a prefix as space-separated symbols, `ε` when empty.
pub struct ShowPrefix<'a>(pub &'a [PSym]);

impl fmt::Display for ShowPrefix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub type ClauseId = usize;
pub type MatId = usize;
pub type LitId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elem {
    Lit(LitId),
    Mat(MatId),
}

#[derive(Clone, Debug)]
pub struct Literal {
    /// `true` for polarity 1.
    pub pol: bool,
    pub pred: Sym,
    pub args: Rc<[Term]>,
    pub prefix: Prefix,
    pub clause: ClauseId,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "^{}:{}", u8::from(self.pol), ShowPrefix(&self.prefix))
    }
}

#[derive(Clone, Debug)]
pub struct Clause {
    pub elems: Vec<Elem>,
    /// Variables introduced at this clause.
    pub owned: Vec<Var>,
    pub parent: Option<MatId>,
    /// Enclosing clauses from the outermost down to this one.
    pub chain: Vec<ClauseId>,
    /// Variables owned by this clause or a descendant, in a fixed order.
    pub subtree_vars: Vec<Var>,
    pub offsets: HashMap<Var, u32>,
}

#[derive(Clone, Debug)]
pub struct Mat {
    pub clauses: Vec<ClauseId>,
    pub parent: Option<ClauseId>,
}

/// Dependencies and world of a Skolem function.
#[derive(Clone, Debug)]
pub struct SkolemInfo {
    pub args: Rc<[Var]>,
    pub prefix: Prefix,
}

#[derive(Clone, Debug)]
pub struct Matrix {
    pub clauses: Vec<Clause>,
    pub mats: Vec<Mat>,
    pub lits: Vec<Literal>,
    pub root: MatId,
    pub owner: HashMap<Var, ClauseId>,
    pub prefix_vars: HashSet<Var>,
    /// World at which each term variable is instantiated.
    pub var_prefix: HashMap<Var, Prefix>,
    pub skolems: HashMap<Sym, SkolemInfo>,
    index: HashMap<(Sym, usize, bool), Vec<LitId>>,
    /// First variable id not used by the matrix.
    pub var_bound: u32,
}

#[derive(Debug, thiserror::Error)]
pub enum MatrixError {
    #[error("formula has free variables: {0}")]
    Unclosed(String),
}

enum BElem {
    Lit(bool, Sym, Rc<[Term]>, Prefix),
    Mat(Vec<BClause>),
}

struct BClause {
    elems: Vec<BElem>,
    owned: Vec<Var>,
}

struct Builder {
    gen: VarGen,
    consts: u32,
    sites: u32,
    prefix_vars: HashSet<Var>,
    var_prefix: HashMap<Var, Prefix>,
    skolems: HashMap<Sym, SkolemInfo>,
}

fn extend(p: &[PSym], s: PSym) -> Vec<PSym> {
    let mut v = p.to_vec();
    v.push(s);
    v
}

/// Free term variables of `f` together with every variable of `p`.
fn deps(f: &Formula, p: &[PSym]) -> Vec<Var> {
    let mut set: BTreeSet<Var> = f.free_vars();
    for s in p {
        s.visit_vars(&mut |v| {
            set.insert(v);
        });
    }
    set.into_iter().collect()
}

fn beta(parts: [Vec<BClause>; 2], owned: Vec<Var>) -> BClause {
    let mut elems = Vec::new();
    for mut m in parts {
        if m.len() == 1 && m[0].owned.is_empty() {
            elems.append(&mut m.pop().unwrap().elems);
        } else {
            elems.push(BElem::Mat(m));
        }
    }
    BClause { elems, owned }
}

fn wrap(mut m: Vec<BClause>, mut owned: Vec<Var>) -> Vec<BClause> {
    if m.len() == 1 {
        let c = m.pop().unwrap();
        owned.extend(c.owned);
        vec![BClause { elems: c.elems, owned }]
    } else {
        vec![BClause { elems: vec![BElem::Mat(m)], owned }]
    }
}

impl Builder {
    fn prefix_const(&mut self, f: &Formula, p: &[PSym]) -> PSym {
        self.consts += 1;
        PSym::Const(self.consts, deps(f, p).into_iter().map(Term::Var).collect())
    }

    fn prefix_var(&mut self) -> Var {
        let v = self.gen.fresh();
        self.prefix_vars.insert(v);
        v
    }

    fn skolem(&mut self, f: &Formula, p: &[PSym], world: Vec<PSym>) -> Term {
        self.sites += 1;
        let args = deps(f, p);
        let t = skolem_term(self.sites, &args);
        if let Term::Fun(name, _) = &t {
            self.skolems.insert(name.clone(), SkolemInfo { args: args.into(), prefix: world.into() });
        }
        t
    }

    fn build(&mut self, f: &Fm, pol: bool, p: &[PSym]) -> Vec<BClause> {
        match (&**f, pol) {
            (Formula::Atom(name, args), false) => {
                let a = self.prefix_const(f, p);
                let lit = BElem::Lit(false, name.clone(), args.clone(), extend(p, a).into());
                vec![BClause { elems: vec![lit], owned: vec![] }]
            }
            (Formula::Atom(name, args), true) => {
                let v = self.prefix_var();
                let lit = BElem::Lit(true, name.clone(), args.clone(), extend(p, PSym::Var(v)).into());
                vec![BClause { elems: vec![lit], owned: vec![v] }]
            }
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                let mut m = self.build(a, pol, p);
                m.extend(self.build(b, pol, p));
                m
            }
            (Formula::Imp(a, b), false) => {
                let p = extend(p, self.prefix_const(f, p));
                let mut m = self.build(a, true, &p);
                m.extend(self.build(b, false, &p));
                m
            }
            (Formula::And(a, b), false) | (Formula::Or(a, b), true) => {
                vec![beta([self.build(a, pol, p), self.build(b, pol, p)], vec![])]
            }
            (Formula::Imp(a, b), true) => {
                let v = self.prefix_var();
                let p = extend(p, PSym::Var(v));
                vec![beta([self.build(a, false, &p), self.build(b, true, &p)], vec![v])]
            }
            (Formula::Not(a), false) => {
                let p = extend(p, self.prefix_const(f, p));
                self.build(a, true, &p)
            }
            (Formula::Not(a), true) => {
                let v = self.prefix_var();
                let p = extend(p, PSym::Var(v));
                wrap(self.build(a, false, &p), vec![v])
            }
            (Formula::Forall(x, a), true) => {
                let v = self.prefix_var();
                let p = extend(p, PSym::Var(v));
                self.var_prefix.insert(*x, p.clone().into());
                wrap(self.build(a, true, &p), vec![*x, v])
            }
            (Formula::Exists(x, a), false) => {
                self.var_prefix.insert(*x, p.to_vec().into());
                wrap(self.build(a, false, p), vec![*x])
            }
            (Formula::Forall(x, a), false) => {
                let p = extend(p, self.prefix_const(f, p));
                let t = self.skolem(f, &p[..p.len() - 1], p.clone());
                self.build(&substitute(a, *x, &t), false, &p)
            }
            (Formula::Exists(x, a), true) => {
                let t = self.skolem(f, p, p.to_vec());
                self.build(&substitute(a, *x, &t), true, p)
            }
            (Formula::Iff(..), _) => self.build(&Formula::expand_iff(f), pol, p),
        }
    }
}

impl Matrix {
    /// The matrix of `f` at polarity 0 with the empty prefix.
    pub fn build(f: &Fm) -> Result<Matrix, MatrixError> {
        let free = f.free_vars();
        if !free.is_empty() {
            let names: Vec<String> = free.iter().map(|v| v.to_string()).collect();
            return Err(MatrixError::Unclosed(names.join(", ")));
        }
        let f = Formula::expand_iff(f);
        let mut b = Builder {
            gen: VarGen::above(&f),
            consts: 0,
            sites: 0,
            prefix_vars: HashSet::new(),
            var_prefix: HashMap::new(),
            skolems: HashMap::new(),
        };
        let top = b.build(&f, false, &[]);
        let mut m = Matrix {
            clauses: Vec::new(),
            mats: Vec::new(),
            lits: Vec::new(),
            root: 0,
            owner: HashMap::new(),
            prefix_vars: b.prefix_vars,
            var_prefix: b.var_prefix,
            skolems: b.skolems,
            index: HashMap::new(),
            var_bound: b.gen.peek(),
        };
        m.root = m.add_mat(top, None, &[]);
        for (i, l) in m.lits.iter().enumerate() {
            m.index.entry((l.pred.clone(), l.args.len(), l.pol)).or_default().push(i);
        }
        Ok(m)
    }

    fn add_mat(&mut self, clauses: Vec<BClause>, parent: Option<ClauseId>, chain: &[ClauseId]) -> MatId {
        let id = self.mats.len();
        self.mats.push(Mat { clauses: Vec::new(), parent });
        let ids = clauses.into_iter().map(|c| self.add_clause(c, id, chain)).collect();
        self.mats[id].clauses = ids;
        id
    }

    fn add_clause(&mut self, c: BClause, parent: MatId, chain: &[ClauseId]) -> ClauseId {
        let id = self.clauses.len();
        let mut chain = chain.to_vec();
        chain.push(id);
        for v in &c.owned {
            self.owner.insert(*v, id);
        }
        self.clauses.push(Clause {
            elems: Vec::new(),
            owned: c.owned.clone(),
            parent: Some(parent),
            chain: chain.clone(),
            subtree_vars: Vec::new(),
            offsets: HashMap::new(),
        });
        let mut subtree = c.owned;
        let mut elems = Vec::new();
        for e in c.elems {
            match e {
                BElem::Lit(pol, pred, args, prefix) => {
                    elems.push(Elem::Lit(self.lits.len()));
                    self.lits.push(Literal { pol, pred, args, prefix, clause: id });
                }
                BElem::Mat(m) => {
                    let mid = self.add_mat(m, Some(id), &chain);
                    for &sub in &self.mats[mid].clauses {
                        subtree.extend(self.clauses[sub].subtree_vars.iter().copied());
                    }
                    elems.push(Elem::Mat(mid));
                }
            }
        }
        let cl = &mut self.clauses[id];
        cl.elems = elems;
        cl.offsets = subtree.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
        cl.subtree_vars = subtree;
        id
    }

    /// Literals with the given predicate, arity and polarity.
    pub fn literals_with(&self, pred: &Sym, arity: usize, pol: bool) -> &[LitId] {
        self.index.get(&(pred.clone(), arity, pol)).map_or(&[], |v| v.as_slice())
    }

    /// Is clause `d` equal to or nested inside clause `root`?
    pub fn in_subtree(&self, d: ClauseId, root: ClauseId) -> bool {
        let depth = self.clauses[root].chain.len() - 1;
        self.clauses[d].chain.get(depth) == Some(&root)
    }

    pub fn top_clauses(&self) -> &[ClauseId] {
        &self.mats[self.root].clauses
    }

    fn fmt_mat(&self, m: MatId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &c) in self.mats[m].clauses.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{")?;
            for (j, e) in self.clauses[c].elems.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                match e {
                    Elem::Lit(l) => write!(f, "{}", self.lits[*l])?,
                    Elem::Mat(sub) => self.fmt_mat(*sub, f)?,
                }
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_mat(self.root, f)
    }
}
