//! Connection proof search in prefixed non-clausal matrices.
//!
//! The search first closes every branch classically: a literal is closed by
//! a reduction against a literal on the active path or by an extension into a
//! fresh copy of a clause, after which the remaining part of that clause (its
//! β-clause) must be proved. Prefixes of the connections are collected on the
//! way and unified only once all branches are closed; if that fails, the
//! classical search backtracks. Clause copies per branch are bounded, and the
//! bound is raised round by round.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;
use std::time::Instant;

use crate::matrix::{ClauseId, Elem, LitId, MatId, Matrix, MatrixError, PSym, Prefix, ShowPrefix};
use crate::prefix::{Equation, PrefixSolver};
use crate::term::{Fm, Substitution, Sym, Term, Var, VarGen};
use crate::Verdict;

#[derive(Clone, Debug)]
pub struct ConnOptions {
    pub deadline: Option<Instant>,
    /// Reject literals that already occur on the active path.
    pub regularity: bool,
    /// One strategy per entry, run in order: `true` means restricted backtracking.
    pub schedule: Vec<bool>,
    /// Upper bound for the path-length limit of the last strategy.
    pub max_depth: Option<usize>,
}

impl Default for ConnOptions {
    fn default() -> Self {
        ConnOptions { deadline: None, regularity: true, schedule: vec![true, false], max_depth: None }
    }
}

/// Without a deadline, all but the last strategy stop at this limit.
const EARLY_STRATEGY_LIMIT: usize = 5;

/// A prefix symbol after applying both substitutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RSym {
    Var(Var),
    Const(u32, Vec<RArg>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RArg {
    Term(Term),
    Prefix(Vec<RSym>),
}

impl fmt::Display for RSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RSym::Var(v) => write!(f, "V{}", v.0),
            RSym::Const(c, args) => {
                write!(f, "a{c}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        match a {
                            RArg::Term(t) => write!(f, "{t}")?,
                            RArg::Prefix(p) => {
                                write!(f, "[")?;
                                for s in p {
                                    write!(f, "{s}")?;
                                }
                                write!(f, "]")?;
                            }
                        }
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A literal of a connection with the final substitutions applied.
#[derive(Clone, Debug)]
pub struct ProofLit {
    pub pol: bool,
    pub pred: Sym,
    pub args: Vec<Term>,
    pub prefix: Vec<RSym>,
}

impl fmt::Display for ProofLit {
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
        write!(f, "^{}:", u8::from(self.pol))?;
        if self.prefix.is_empty() {
            write!(f, "ε")?;
        }
        for (i, s) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ConnProof {
    pub connections: Vec<(ProofLit, ProofLit)>,
    /// Path-length limit of the successful round.
    pub depth: usize,
    pub restricted_backtracking: bool,
}

impl ConnProof {
    /// Both literals of every connection agree on predicate, arguments and
    /// prefix, and have opposite polarities.
    pub fn is_complementary(&self) -> bool {
        self.connections
            .iter()
            .all(|(a, b)| a.pol != b.pol && a.pred == b.pred && a.args == b.args && a.prefix == b.prefix)
    }
}

impl fmt::Display for ConnProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.connections {
            writeln!(f, "{{{a}, {b}}}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ConnResult {
    pub verdict: Verdict<ConnProof>,
    pub rounds: usize,
}

/// Build the matrix of `f` and search for a proof.
pub fn prove_conn(f: &Fm, opts: &ConnOptions) -> Result<ConnResult, MatrixError> {
    Ok(connection_prove(&Matrix::build(f)?, opts))
}

/// Search for a connection proof, trying each strategy of the schedule with
/// increasing copy limits. Never reports `Refuted`.
pub fn connection_prove(m: &Matrix, opts: &ConnOptions) -> ConnResult {
    let schedule: &[bool] = if opts.schedule.is_empty() { &[false] } else { &opts.schedule };
    let mut rounds = 0;
    for (i, &restricted) in schedule.iter().enumerate() {
        let last = i + 1 == schedule.len();
        let (deadline, cap) = if last {
            (opts.deadline, opts.max_depth)
        } else {
            let now = Instant::now();
            match opts.deadline {
                Some(d) => (Some(now + d.saturating_duration_since(now) / 2), opts.max_depth),
                None => (None, Some(opts.max_depth.unwrap_or(EARLY_STRATEGY_LIMIT).min(EARLY_STRATEGY_LIMIT))),
            }
        };
        let mut limit = 1;
        while cap.is_none_or(|c| limit <= c) {
            rounds += 1;
            let mut engine = Engine::new(m, limit, opts.regularity, restricted, deadline);
            match engine.run() {
                Search::Proved(connections) => {
                    let proof = ConnProof { connections, depth: limit, restricted_backtracking: restricted };
                    return ConnResult { verdict: Verdict::Proved(proof), rounds };
                }
                Search::Timeout => break,
                Search::Failed if !engine.limit_hit => break,
                Search::Failed => limit += 1,
            }
        }
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return ConnResult { verdict: Verdict::Timeout, rounds };
        }
    }
    ConnResult { verdict: Verdict::GaveUp, rounds }
}

/// A copy of a clause subtree. Its variables are the block starting at
/// `base`, in the order of the root clause's `subtree_vars`; variables owned
/// above the root are taken from the parent copy.
#[derive(Debug)]
struct Copy {
    root: ClauseId,
    base: u32,
    parent: Option<Rc<Copy>>,
}

/// A literal under a copy, before any substitution.
#[derive(Debug)]
struct RLit {
    pol: bool,
    pred: Sym,
    args: Vec<Term>,
    prefix: Prefix,
}

struct PathNode {
    lit: LitId,
    copy: Rc<Copy>,
    r: Rc<RLit>,
    /// Number of literals on the path up to and including this one.
    depth: usize,
    next: Path,
}

type Path = Option<Rc<PathNode>>;

fn path_iter(p: &Path) -> impl Iterator<Item = &Rc<PathNode>> {
    std::iter::successors(p.as_ref(), |n| n.next.as_ref())
}

enum Goal {
    Lit(LitId, Rc<Copy>, Path),
    Mat(MatId, Rc<Copy>, Path),
    /// Drop the choice points from this stack height upwards.
    Cut(usize),
}

struct GoalNode {
    goal: Goal,
    next: Goals,
}

type Goals = Option<Rc<GoalNode>>;

fn push(goal: Goal, next: Goals) -> Goals {
    Some(Rc::new(GoalNode { goal, next }))
}

enum Alt {
    Start(ClauseId),
    Decompose(ClauseId),
    Reduce(Rc<PathNode>),
    Extend { lit: LitId, level: usize, anchor: Option<Rc<Copy>> },
}

struct Choice {
    node: Goals,
    r1: Option<Rc<RLit>>,
    alts: Vec<Alt>,
    next: usize,
    sigma: usize,
    conns: usize,
    gen: u32,
    copies: usize,
}

enum Search {
    Proved(Vec<(ProofLit, ProofLit)>),
    Failed,
    Timeout,
}

/// Registry of copies, ordered by their variable blocks.
struct Copies {
    list: Vec<(u32, u32, Rc<Copy>)>,
}

impl Copies {
    /// The copy whose block contains `v` and the matrix variable it renames.
    fn origin(&self, m: &Matrix, v: Var) -> Option<(Var, &Rc<Copy>)> {
        let i = self.list.partition_point(|(base, _, _)| *base <= v.0).checked_sub(1)?;
        let (base, len, copy) = &self.list[i];
        (v.0 < base + len).then(|| (m.clauses[copy.root].subtree_vars[(v.0 - base) as usize], copy))
    }

    fn is_prefix_var(&self, m: &Matrix, v: Var) -> bool {
        self.origin(m, v).is_none_or(|(orig, _)| m.prefix_vars.contains(&orig))
    }
}

fn rename(m: &Matrix, v: Var, copy: &Rc<Copy>) -> Var {
    let owner = m.owner[&v];
    let mut c = copy;
    loop {
        if m.in_subtree(owner, c.root) {
            return Var(c.base + m.clauses[c.root].offsets[&v]);
        }
        c = c.parent.as_ref().expect("variable owned above its literal");
    }
}

fn rename_prefix(m: &Matrix, p: &[PSym], copy: &Rc<Copy>) -> Prefix {
    p.iter().map(|s| s.rename(&|v| rename(m, v, copy))).collect()
}

struct Engine<'m> {
    m: &'m Matrix,
    sigma: Substitution,
    gen: VarGen,
    copies: Copies,
    conns: Vec<(Rc<RLit>, Rc<RLit>)>,
    stack: Vec<Choice>,
    limit: usize,
    regularity: bool,
    restricted: bool,
    limit_hit: bool,
    deadline: Option<Instant>,
    ticks: u64,
    timed_out: bool,
}

impl<'m> Engine<'m> {
    fn new(m: &'m Matrix, limit: usize, regularity: bool, restricted: bool, deadline: Option<Instant>) -> Self {
        Engine {
            m,
            sigma: Substitution::new(),
            gen: VarGen::starting_at(m.var_bound),
            copies: Copies { list: Vec::new() },
            conns: Vec::new(),
            stack: Vec::new(),
            limit,
            regularity,
            restricted,
            limit_hit: false,
            deadline,
            ticks: 0,
            timed_out: false,
        }
    }

    fn new_copy(&mut self, root: ClauseId, parent: Option<Rc<Copy>>) -> Rc<Copy> {
        let base = self.gen.peek();
        let n = self.m.clauses[root].subtree_vars.len() as u32;
        for _ in 0..n {
            self.gen.fresh();
        }
        let copy = Rc::new(Copy { root, base, parent });
        self.copies.list.push((base, n, copy.clone()));
        copy
    }

    fn resolve(&self, lit: LitId, copy: &Rc<Copy>) -> Rc<RLit> {
        let l = &self.m.lits[lit];
        let map = |v| Some(rename(self.m, v, copy));
        Rc::new(RLit {
            pol: l.pol,
            pred: l.pred.clone(),
            args: l.args.iter().map(|a| a.rename(&map)).collect(),
            prefix: rename_prefix(self.m, &l.prefix, copy),
        })
    }

    fn choice(&self, node: Goals, r1: Option<Rc<RLit>>, alts: Vec<Alt>) -> Choice {
        Choice {
            node,
            r1,
            alts,
            next: 0,
            sigma: self.sigma.mark(),
            conns: self.conns.len(),
            gen: self.gen.peek(),
            copies: self.copies.list.len(),
        }
    }

    fn tick(&mut self) -> bool {
        self.ticks += 1;
        if self.ticks.is_multiple_of(64) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        !self.timed_out
    }

    fn run(&mut self) -> Search {
        let starts = self.m.top_clauses().iter().rev().map(|c| Alt::Start(*c)).collect();
        let root = self.choice(None, None, starts);
        self.stack.push(root);
        'search: loop {
            let Some(mut goals) = self.advance() else {
                return if self.timed_out { Search::Timeout } else { Search::Failed };
            };
            loop {
                if !self.tick() {
                    return Search::Timeout;
                }
                let Some(node) = goals.clone() else {
                    if let Some(proof) = self.unify_prefixes() {
                        return Search::Proved(proof);
                    }
                    if self.timed_out {
                        return Search::Timeout;
                    }
                    continue 'search;
                };
                match &node.goal {
                    Goal::Cut(h) => {
                        self.stack.truncate(*h);
                        goals = node.next.clone();
                    }
                    Goal::Mat(mat, _, _) => {
                        let alts = self.m.mats[*mat].clauses.iter().map(|c| Alt::Decompose(*c)).collect();
                        let c = self.choice(goals, None, alts);
                        self.stack.push(c);
                        continue 'search;
                    }
                    Goal::Lit(lit, copy, path) => {
                        let r1 = self.resolve(*lit, copy);
                        let alts = self.literal_alternatives(*lit, copy, &r1, path);
                        let c = self.choice(goals, Some(r1), alts);
                        self.stack.push(c);
                        continue 'search;
                    }
                }
            }
        }
    }

    /// Try the remaining alternatives of the newest choice point, popping
    /// exhausted ones. Returns the goal list after the first one that applies.
    fn advance(&mut self) -> Option<Goals> {
        loop {
            if self.timed_out {
                return None;
            }
            let top = self.stack.last_mut()?;
            let (sigma, conns, gen, copies) = (top.sigma, top.conns, top.gen, top.copies);
            if top.next >= top.alts.len() {
                self.stack.pop();
                continue;
            }
            top.next += 1;
            self.sigma.undo(sigma);
            self.conns.truncate(conns);
            self.gen.rewind(gen);
            self.copies.list.truncate(copies);
            if let Some(goals) = self.apply() {
                return Some(goals);
            }
        }
    }

    fn apply(&mut self) -> Option<Goals> {
        let h = self.stack.len() - 1;
        let top = &self.stack[h];
        let node = top.node.clone();
        let r1 = top.r1.clone();
        let alt = match &top.alts[top.next - 1] {
            Alt::Start(c) => Alt::Start(*c),
            Alt::Decompose(c) => Alt::Decompose(*c),
            Alt::Reduce(p) => Alt::Reduce(p.clone()),
            Alt::Extend { lit, level, anchor } => Alt::Extend { lit: *lit, level: *level, anchor: anchor.clone() },
        };
        let rest = node.as_ref().and_then(|n| n.next.clone());
        let after = |rest: Goals, restricted: bool| if restricted { push(Goal::Cut(h), rest) } else { rest };
        match alt {
            Alt::Start(c) => {
                let copy = self.new_copy(c, None);
                Some(self.clause_goals(c, &copy, &None, None, None))
            }
            Alt::Decompose(c) => {
                let node = node.expect("decomposition needs a goal");
                let Goal::Mat(_, copy, path) = &node.goal else { unreachable!() };
                Some(self.clause_goals(c, copy, path, None, rest))
            }
            Alt::Reduce(p) => {
                let r1 = r1.expect("reduction needs a literal");
                if !self.sigma.unify_args(&r1.args, &p.r.args) {
                    return None;
                }
                self.conns.push((r1, p.r.clone()));
                Some(after(rest, self.restricted))
            }
            Alt::Extend { lit, level, anchor } => {
                let node = node.expect("extension needs a goal");
                let Goal::Lit(lit1, copy1, path) = &node.goal else { unreachable!() };
                let r1 = r1.expect("extension needs a literal");
                let chain = &self.m.clauses[self.m.lits[lit].clause].chain;
                let root = chain[level];
                let copy = self.new_copy(root, anchor);
                let r2 = self.resolve(lit, &copy);
                if !self.sigma.unify_args(&r1.args, &r2.args) {
                    return None;
                }
                self.conns.push((r1.clone(), r2));
                let path = Some(Rc::new(PathNode {
                    lit: *lit1,
                    copy: copy1.clone(),
                    r: r1,
                    depth: path.as_ref().map_or(1, |p| p.depth + 1),
                    next: path.clone(),
                }));
                let mut goals = after(rest, self.restricted);
                let chain = chain.clone();
                for j in (level..chain.len()).rev() {
                    let skip = match chain.get(j + 1) {
                        Some(inner) => Elem::Mat(self.m.clauses[*inner].parent.expect("nested clause")),
                        None => Elem::Lit(lit),
                    };
                    goals = self.clause_goals(chain[j], &copy, &path, Some(skip), goals);
                }
                Some(goals)
            }
        }
    }

    /// Goals for the elements of a clause, in order, in front of `rest`.
    fn clause_goals(&self, c: ClauseId, copy: &Rc<Copy>, path: &Path, skip: Option<Elem>, rest: Goals) -> Goals {
        let mut goals = rest;
        for e in self.m.clauses[c].elems.iter().rev() {
            if Some(*e) == skip {
                continue;
            }
            let goal = match e {
                Elem::Lit(l) => Goal::Lit(*l, copy.clone(), path.clone()),
                Elem::Mat(m) => Goal::Mat(*m, copy.clone(), path.clone()),
            };
            goals = push(goal, goals);
        }
        goals
    }

    fn same_prefix_sym(&self, a: &PSym, b: &PSym) -> bool {
        match (a, b) {
            (PSym::Var(x), PSym::Var(y)) => self.sigma.identical(&Term::Var(*x), &Term::Var(*y)),
            (PSym::Const(c, aa), PSym::Const(d, ba)) => {
                c == d && aa.len() == ba.len() && aa.iter().zip(ba.iter()).all(|(s, t)| self.sigma.identical(s, t))
            }
            _ => false,
        }
    }

    fn same_literal(&self, a: &RLit, b: &RLit) -> bool {
        a.pol == b.pol
            && a.pred == b.pred
            && a.args.len() == b.args.len()
            && a.args.iter().zip(&b.args).all(|(s, t)| self.sigma.identical(s, t))
            && a.prefix.len() == b.prefix.len()
            && a.prefix.iter().zip(b.prefix.iter()).all(|(s, t)| self.same_prefix_sym(s, t))
    }

    fn literal_alternatives(&mut self, lit1: LitId, copy1: &Rc<Copy>, r1: &RLit, path: &Path) -> Vec<Alt> {
        if self.regularity && path_iter(path).any(|p| self.same_literal(&p.r, r1)) {
            return Vec::new();
        }
        let m = self.m;
        let mut alts: Vec<Alt> = path_iter(path)
            .filter(|p| p.r.pol != r1.pol && p.r.pred == r1.pred && p.r.args.len() == r1.args.len())
            .map(|p| Alt::Reduce(p.clone()))
            .collect();
        let anchors: Vec<(LitId, &Rc<Copy>)> =
            std::iter::once((lit1, copy1)).chain(path_iter(path).map(|p| (p.lit, &p.copy))).collect();
        let reductions = alts.len();
        let candidates = m.literals_with(&r1.pred, r1.args.len(), !r1.pol);
        if path.as_ref().map_or(0, |p| p.depth) >= self.limit {
            self.limit_hit |= !candidates.is_empty();
            return alts;
        }
        for &lit in candidates {
            let chain = &m.clauses[m.lits[lit].clause].chain;
            for level in (0..chain.len()).rev() {
                let root = chain[level];
                if level == 0 {
                    alts.push(Alt::Extend { lit, level, anchor: None });
                    continue;
                }
                let outer = chain[level - 1];
                let mat = m.clauses[root].parent;
                let mut seen: Vec<&Rc<Copy>> = Vec::new();
                for (l, copy) in &anchors {
                    let ec = &m.clauses[m.lits[*l].clause].chain;
                    if ec.len() <= level || ec[level - 1] != outer || m.clauses[ec[level]].parent != mat {
                        continue;
                    }
                    let mut c = *copy;
                    while !m.in_subtree(outer, c.root) {
                        c = c.parent.as_ref().expect("copy chain reaches the outer clause");
                    }
                    if seen.iter().any(|s| Rc::ptr_eq(s, c)) {
                        continue;
                    }
                    seen.push(c);
                    alts.push(Alt::Extend { lit, level, anchor: Some(c.clone()) });
                }
            }
        }
        // Small β-clauses first; the sort is stable, so deeper copies stay ahead.
        alts[reductions..].sort_by_key(|a| match a {
            Alt::Extend { lit, level, .. } => beta_size(m, *lit, *level),
            _ => 0,
        });
        alts
    }

    /// Prefix of the world where a term variable is instantiated.
    fn term_var_prefix(&self, v: Var) -> Option<Prefix> {
        let (orig, copy) = self.copies.origin(self.m, v)?;
        let template = self.m.var_prefix.get(&orig)?;
        Some(rename_prefix(self.m, template, copy))
    }

    /// Second phase: unify the collected prefixes, together with the domain
    /// condition for every Skolem term a variable was bound to.
    fn unify_prefixes(&mut self) -> Option<Vec<(ProofLit, ProofLit)>> {
        let m = self.m;
        let mut eqs: Vec<Equation> = self.conns.iter().map(|(a, b)| (a.prefix.to_vec(), b.prefix.to_vec())).collect();
        let bound: Vec<Var> = self.sigma.bound_vars().collect();
        for x in bound {
            if self.copies.is_prefix_var(m, x) {
                continue;
            }
            let Some(px) = self.term_var_prefix(x) else { continue };
            let mut worlds = Vec::new();
            skolem_worlds(m, &self.sigma.apply(&Term::Var(x)), &mut worlds);
            for pt in worlds {
                let mut lhs = pt;
                lhs.push(PSym::Var(self.gen.fresh()));
                eqs.push((lhs, px.to_vec()));
            }
        }
        let copies = &self.copies;
        let is_prefix = |v: Var| copies.is_prefix_var(m, v);
        let conns = &self.conns;
        let mut solver = PrefixSolver::new(&mut self.sigma, &is_prefix, &mut self.gen, self.deadline);
        let mut proof = None;
        solver.solve(eqs, &mut |s| {
            if !acyclic(s) {
                return false;
            }
            proof = Some(
                conns
                    .iter()
                    .map(|(a, b)| (final_literal(s, &is_prefix, a), final_literal(s, &is_prefix, b)))
                    .collect(),
            );
            true
        });
        if solver.timed_out() {
            self.timed_out = true;
        }
        proof
    }
}

/// Number of elements left in the β-clause of an extension.
fn beta_size(m: &Matrix, lit: LitId, level: usize) -> usize {
    let chain = &m.clauses[m.lits[lit].clause].chain;
    chain[level..].iter().map(|c| m.clauses[*c].elems.len() - 1).sum()
}

/// Worlds of the Skolem terms occurring in `t`.
fn skolem_worlds(m: &Matrix, t: &Term, out: &mut Vec<Vec<PSym>>) {
    let Term::Fun(f, args) = t else { return };
    for a in args.iter() {
        skolem_worlds(m, a, out);
    }
    let Some(info) = m.skolems.get(f) else { return };
    let map: HashMap<Var, &Term> = info.args.iter().copied().zip(args.iter()).collect();
    let world = info
        .prefix
        .iter()
        .map(|s| match s {
            PSym::Var(v) => match map[v] {
                Term::Var(w) => PSym::Var(*w),
                other => unreachable!("prefix argument bound to {other}"),
            },
            PSym::Const(c, cargs) => {
                PSym::Const(*c, cargs.iter().map(|a| instantiate(a, &map)).collect())
            }
        })
        .collect();
    out.push(world);
}

fn instantiate(t: &Term, map: &HashMap<Var, &Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).map_or_else(|| t.clone(), |u| (*u).clone()),
        Term::Fun(f, args) => Term::Fun(f.clone(), args.iter().map(|a| instantiate(a, map)).collect()),
    }
}

/// No variable depends on itself through term and prefix bindings.
fn acyclic(s: &PrefixSolver) -> bool {
    let mut edges: HashMap<Var, Vec<Var>> = HashMap::new();
    let sigma = s.sigma();
    for v in sigma.bound_vars() {
        if let Some(t) = sigma.get(v) {
            edges.entry(v).or_default().extend(t.vars());
        }
    }
    for (v, p) in s.bindings() {
        let e = edges.entry(v).or_default();
        for sym in p {
            sym.visit_vars(&mut |w| e.push(w));
        }
    }
    let mut done: HashSet<Var> = HashSet::new();
    let mut active: HashSet<Var> = HashSet::new();
    fn visit(v: Var, edges: &HashMap<Var, Vec<Var>>, done: &mut HashSet<Var>, active: &mut HashSet<Var>) -> bool {
        if done.contains(&v) {
            return true;
        }
        if !active.insert(v) {
            return false;
        }
        for w in edges.get(&v).into_iter().flatten() {
            if !visit(*w, edges, done, active) {
                return false;
            }
        }
        active.remove(&v);
        done.insert(v);
        true
    }
    let keys: Vec<Var> = edges.keys().copied().collect();
    keys.into_iter().all(|v| visit(v, &edges, &mut done, &mut active))
}

fn final_prefix(s: &PrefixSolver, is_prefix: &dyn Fn(Var) -> bool, p: &[PSym]) -> Vec<RSym> {
    s.resolve(p)
        .into_iter()
        .map(|sym| match sym {
            PSym::Var(v) => RSym::Var(v),
            PSym::Const(c, args) => RSym::Const(
                c,
                args.iter()
                    .map(|a| match s.sigma().apply(a) {
                        Term::Var(v) if is_prefix(v) => RArg::Prefix(final_prefix(s, is_prefix, &[PSym::Var(v)])),
                        t => RArg::Term(t),
                    })
                    .collect(),
            ),
        })
        .collect()
}

fn final_literal(s: &PrefixSolver, is_prefix: &dyn Fn(Var) -> bool, l: &RLit) -> ProofLit {
    ProofLit {
        pol: l.pol,
        pred: l.pred.clone(),
        args: l.args.iter().map(|a| s.sigma().apply(a)).collect(),
        prefix: final_prefix(s, is_prefix, &l.prefix),
    }
}

impl fmt::Display for RLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}:{}", self.pred, u8::from(self.pol), ShowPrefix(&self.prefix))
    }
}
