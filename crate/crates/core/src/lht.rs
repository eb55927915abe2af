//! Backward proof search in the sequent calculus LHT for HT.
//!
//! The search is depth-first over a list of open sequents. Axioms close a
//! sequent by occurs-check unification of a literal with a formula on the
//! right (or with a negated formula on the left). Otherwise the first
//! applicable rule in table order is applied; all rules except the four
//! free-variable quantifier rules are invertible and commit. Free-variable
//! rules keep their principal formula, introduce a fresh variable and are
//! limited per branch; the limit grows by one per round.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;
use std::time::{Duration, Instant};

use crate::oracle::ht_countermodel;
use crate::term::{fresh_copy, skolem_term, substitute, Fm, Formula, Substitution, Term, Var, VarGen};
use crate::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom1,
    Axiom2,
    AndLeft,
    OrRight,
    NotAndRight,
    NotOrLeft,
    NotImpLeft,
    NotNotLeft,
    NotNotRight,
    AndRight,
    OrLeft,
    NotAndLeft,
    NotOrRight,
    NotImpRight,
    ImpRight,
    ImpLeft,
    IffLeft,
    IffRight,
    NotIffLeft,
    NotIffRight,
    NotForallLeft,
    NotExistsRight,
    ForallRight,
    ExistsLeft,
    NotForallRight,
    NotExistsLeft,
    ForallLeft,
    ExistsRight,
}

/// Rules in the order they are tried: non-splitting, splitting, equivalences,
/// Eigenvariable quantifier rules, free-variable quantifier rules.
pub const RULE_TABLE: [Rule; 26] = {
    use Rule::*;
    [
        AndLeft,
        OrRight,
        NotAndRight,
        NotOrLeft,
        NotImpLeft,
        NotNotLeft,
        NotNotRight,
        AndRight,
        OrLeft,
        NotAndLeft,
        NotOrRight,
        NotImpRight,
        ImpRight,
        ImpLeft,
        IffLeft,
        IffRight,
        NotIffLeft,
        NotIffRight,
        NotForallLeft,
        NotExistsRight,
        ForallRight,
        ExistsLeft,
        NotForallRight,
        NotExistsLeft,
        ForallLeft,
        ExistsRight,
    ]
};

impl Rule {
    pub fn name(self) -> &'static str {
        use Rule::*;
        match self {
            Axiom1 => "axiom1",
            Axiom2 => "axiom2",
            AndLeft => "and-left",
            OrRight => "or-right",
            NotAndRight => "not-and-right",
            NotOrLeft => "not-or-left",
            NotImpLeft => "not-imp-left",
            NotNotLeft => "not-not-left",
            NotNotRight => "not-not-right",
            AndRight => "and-right",
            OrLeft => "or-left",
            NotAndLeft => "not-and-left",
            NotOrRight => "not-or-right",
            NotImpRight => "not-imp-right",
            ImpRight => "imp-right",
            ImpLeft => "imp-left",
            IffLeft => "iff-left",
            IffRight => "iff-right",
            NotIffLeft => "not-iff-left",
            NotIffRight => "not-iff-right",
            NotForallLeft => "not-all-left",
            NotExistsRight => "not-ex-right",
            ForallRight => "all-right",
            ExistsLeft => "ex-left",
            NotForallRight => "not-all-right",
            NotExistsLeft => "not-ex-left",
            ForallLeft => "all-left",
            ExistsRight => "ex-right",
        }
    }

    /// Side of the sequent holding the principal formula.
    pub fn side(self) -> Side {
        use Rule::*;
        match self {
            AndLeft | NotOrLeft | NotImpLeft | NotNotLeft | OrLeft | NotAndLeft | ImpLeft | IffLeft | NotIffLeft
            | NotForallLeft | ExistsLeft | NotExistsLeft | ForallLeft | Axiom1 | Axiom2 => Side::Left,
            _ => Side::Right,
        }
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, Rule::Axiom1 | Rule::Axiom2)
    }

    /// The rules that introduce a free variable and keep their principal formula.
    pub fn is_free_variable(self) -> bool {
        use Rule::*;
        matches!(self, NotForallRight | NotExistsLeft | ForallLeft | ExistsRight)
    }

    pub fn is_eigenvariable(self) -> bool {
        use Rule::*;
        matches!(self, NotForallLeft | NotExistsRight | ForallRight | ExistsLeft)
    }

    pub fn premise_count(self) -> usize {
        use Rule::*;
        match self {
            Axiom1 | Axiom2 => 0,
            ImpLeft => 3,
            AndRight | OrLeft | NotAndLeft | NotOrRight | NotImpRight | ImpRight => 2,
            _ => 1,
        }
    }

    /// Does `f` have the shape of this rule's principal formula?
    pub fn matches(self, f: &Formula) -> bool {
        use Formula as F;
        use Rule::*;
        match (self, f) {
            (AndLeft | AndRight, F::And(..)) => true,
            (OrRight | OrLeft, F::Or(..)) => true,
            (ImpRight | ImpLeft, F::Imp(..)) => true,
            (IffLeft | IffRight, F::Iff(..)) => true,
            (ForallRight | ForallLeft, F::Forall(..)) => true,
            (ExistsLeft | ExistsRight, F::Exists(..)) => true,
            (_, F::Not(inner)) => matches!(
                (self, &**inner),
                (NotAndRight | NotAndLeft, F::And(..))
                    | (NotOrLeft | NotOrRight, F::Or(..))
                    | (NotImpLeft | NotImpRight, F::Imp(..))
                    | (NotNotLeft | NotNotRight, F::Not(..))
                    | (NotIffLeft | NotIffRight, F::Iff(..))
                    | (NotForallLeft | NotForallRight, F::Forall(..))
                    | (NotExistsRight | NotExistsLeft, F::Exists(..))
            ),
            _ => false,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The rule that decomposes `f` on the given side; `None` for literals.
pub fn rule_lookup(f: &Formula, side: Side) -> Option<Rule> {
    RULE_TABLE.iter().copied().find(|r| r.side() == side && r.matches(f))
}

/// Formulas added to the left and right of one premise.
pub type Delta = (Vec<Fm>, Vec<Fm>);

/// How a quantifier rule instantiates its bound variable.
pub enum Instance {
    /// Replace by this (Skolem) term.
    Term(Term),
    /// Replace by a fresh variable drawn from the generator.
    Fresh,
}

/// Premise deltas for applying `rule` to the principal formula `f`. For
/// quantifier rules the body is copied with fresh bound variables, keeping
/// `frozen` untouched; the returned variable is the one introduced by a
/// free-variable rule.
pub fn premises(
    rule: Rule,
    f: &Fm,
    instance: Instance,
    frozen: &BTreeSet<Var>,
    sigma: &Substitution,
    gen: &mut VarGen,
) -> (Vec<Delta>, Option<Var>) {
    use Formula as F;
    use Rule::*;
    let not = |a: &Fm| Formula::not(a.clone());
    let both_ways = |a: &Fm, b: &Fm| Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b.clone(), a.clone()));
    let one = |l: Vec<Fm>, r: Vec<Fm>| vec![(l, r)];
    let inner = match &**f {
        F::Not(a) => Some(a),
        _ => None,
    };
    let deltas = match (rule, &**f) {
        (AndLeft, F::And(a, b)) => one(vec![a.clone(), b.clone()], vec![]),
        (OrRight, F::Or(a, b)) => one(vec![], vec![a.clone(), b.clone()]),
        (AndRight, F::And(a, b)) => vec![(vec![], vec![a.clone()]), (vec![], vec![b.clone()])],
        (OrLeft, F::Or(a, b)) => vec![(vec![a.clone()], vec![]), (vec![b.clone()], vec![])],
        (ImpRight, F::Imp(a, b)) => vec![(vec![a.clone()], vec![b.clone()]), (vec![not(b)], vec![not(a)])],
        (ImpLeft, F::Imp(a, b)) => vec![
            (vec![not(a)], vec![]),
            (vec![], vec![a.clone(), not(b)]),
            (vec![b.clone()], vec![]),
        ],
        (IffLeft, F::Iff(a, b)) => one(vec![both_ways(a, b)], vec![]),
        (IffRight, F::Iff(a, b)) => one(vec![], vec![both_ways(a, b)]),
        (ForallRight | ExistsLeft | ForallLeft | ExistsRight, F::Forall(x, body) | F::Exists(x, body)) => {
            let (c, v) = instantiate(f, *x, body, instance, frozen, sigma, gen);
            return (
                match rule {
                    ForallRight => one(vec![], vec![c]),
                    ExistsLeft => one(vec![c], vec![]),
                    ForallLeft => one(vec![c, f.clone()], vec![]),
                    _ => one(vec![], vec![c, f.clone()]),
                },
                v,
            );
        }
        _ => {
            let a = inner.expect("rule does not match principal formula");
            match (rule, &**a) {
                (NotAndRight, F::And(p, q)) => one(vec![], vec![not(p), not(q)]),
                (NotOrLeft, F::Or(p, q)) => one(vec![not(p), not(q)], vec![]),
                (NotImpLeft, F::Imp(p, q)) => one(vec![not(q)], vec![not(p)]),
                (NotNotLeft, F::Not(p)) => one(vec![], vec![not(p)]),
                (NotNotRight, F::Not(p)) => one(vec![not(p)], vec![]),
                (NotAndLeft, F::And(p, q)) => vec![(vec![not(p)], vec![]), (vec![not(q)], vec![])],
                (NotOrRight, F::Or(p, q)) => vec![(vec![], vec![not(p)]), (vec![], vec![not(q)])],
                (NotImpRight, F::Imp(p, q)) => vec![(vec![not(p)], vec![]), (vec![], vec![not(q)])],
                (NotIffLeft, F::Iff(p, q)) => one(vec![Formula::not(both_ways(p, q))], vec![]),
                (NotIffRight, F::Iff(p, q)) => one(vec![], vec![Formula::not(both_ways(p, q))]),
                (
                    NotForallLeft | NotExistsRight | NotForallRight | NotExistsLeft,
                    F::Forall(x, body) | F::Exists(x, body),
                ) => {
                    let (c, v) = instantiate(a, *x, body, instance, frozen, sigma, gen);
                    let c = Formula::not(c);
                    return (
                        match rule {
                            NotForallLeft => one(vec![c], vec![]),
                            NotExistsRight => one(vec![], vec![c]),
                            NotForallRight => one(vec![], vec![c, f.clone()]),
                            _ => one(vec![c, f.clone()], vec![]),
                        },
                        v,
                    );
                }
                _ => panic!("rule {rule} does not match {f}"),
            }
        }
    };
    (deltas, None)
}

fn instantiate(
    quantified: &Fm,
    x: Var,
    body: &Fm,
    instance: Instance,
    frozen: &BTreeSet<Var>,
    sigma: &Substitution,
    gen: &mut VarGen,
) -> (Fm, Option<Var>) {
    match instance {
        Instance::Term(t) => (fresh_copy(&substitute(body, x, &t), frozen, sigma, gen), None),
        Instance::Fresh => match &*fresh_copy(quantified, frozen, sigma, gen) {
            Formula::Forall(y, c) | Formula::Exists(y, c) => (c.clone(), Some(*y)),
            _ => unreachable!(),
        },
    }
}

/// Would some quantifier of `f`, placed on the right of a sequent, be
/// principal to a free-variable rule? Negation and the antecedent of an
/// implication flip the side; both sides of an equivalence count both ways.
pub fn has_free_var_quantifier(f: &Formula) -> bool {
    fn go(f: &Formula, left: bool) -> bool {
        match f {
            Formula::Atom(..) => false,
            Formula::Not(a) => go(a, !left),
            Formula::And(a, b) | Formula::Or(a, b) => go(a, left) || go(b, left),
            Formula::Imp(a, b) => go(a, !left) || go(b, left),
            Formula::Iff(a, b) => go(a, true) || go(a, false) || go(b, true) || go(b, false),
            Formula::Forall(_, a) => left || go(a, left),
            Formula::Exists(_, a) => !left || go(a, left),
        }
    }
    go(f, false)
}

#[derive(Clone, Debug)]
pub struct Sequent {
    pub left: Vec<Fm>,
    pub right: Vec<Fm>,
    /// Free variables introduced on the branch so far, oldest first.
    pub free: Vec<Var>,
}

impl Sequent {
    pub fn goal(f: Fm) -> Sequent {
        Sequent { left: vec![], right: vec![f], free: vec![] }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Fm]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.left)?;
        f.write_str(if self.left.is_empty() { "|-" } else { " |-" })?;
        if !self.right.is_empty() {
            f.write_str(" ")?;
        }
        write_list(f, &self.right)
    }
}

/// A node of a closed proof, with the closing substitution applied.
#[derive(Clone, Debug)]
pub struct ProofNode {
    pub left: Vec<Fm>,
    pub right: Vec<Fm>,
    pub rule: Rule,
    /// The principal formula, or for axioms the two formulas that were matched
    /// (the second is the right-hand formula or the formula under the left negation).
    pub principal: Vec<Fm>,
    pub children: Vec<ProofNode>,
}

impl ProofNode {
    pub fn rule_applications(&self) -> usize {
        usize::from(!self.rule.is_axiom()) + self.children.iter().map(ProofNode::rule_applications).sum::<usize>()
    }

    pub fn axiom_leaves(&self) -> usize {
        usize::from(self.rule.is_axiom()) + self.children.iter().map(ProofNode::axiom_leaves).sum::<usize>()
    }

    pub fn visit(&self, out: &mut impl FnMut(&ProofNode)) {
        out(self);
        self.children.iter().for_each(|c| c.visit(out));
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let seq = Sequent { left: self.left.clone(), right: self.right.clone(), free: vec![] };
        writeln!(f, "{:indent$}{seq}   [{}]", "", self.rule, indent = 2 * depth)?;
        self.children.iter().try_for_each(|c| c.write(f, depth + 1))
    }
}

impl fmt::Display for ProofNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

pub type Proof = ProofNode;

#[derive(Clone, Debug)]
pub struct LhtOptions {
    pub initial_limit: usize,
    /// Stop deepening after this limit and give up.
    pub max_limit: Option<usize>,
    pub deadline: Option<Instant>,
    /// Look for a small finite countermodel when the first round fails on a
    /// formula with free-variable quantifiers.
    pub countermodels: bool,
}

impl Default for LhtOptions {
    fn default() -> Self {
        LhtOptions { initial_limit: 1, max_limit: None, deadline: None, countermodels: true }
    }
}

#[derive(Clone, Debug)]
pub struct LhtResult {
    pub verdict: Verdict<Proof>,
    /// Free-variable limit of the last round.
    pub rounds: usize,
}

pub fn prove_lht(f: &Fm, opts: &LhtOptions) -> LhtResult {
    let mut limit = opts.initial_limit.max(1);
    let decidable = !has_free_var_quantifier(f);
    loop {
        match prove_sequent(Sequent::goal(f.clone()), VarGen::above(f), limit, opts.deadline) {
            Search::Proved(p) => return LhtResult { verdict: Verdict::Proved(p), rounds: limit },
            Search::Timeout => return LhtResult { verdict: Verdict::Timeout, rounds: limit },
            Search::Failed if decidable => return LhtResult { verdict: Verdict::Refuted, rounds: limit },
            Search::Failed => {}
        }
        if opts.countermodels && limit == opts.initial_limit.max(1) {
            let cutoff = Instant::now() + Duration::from_millis(200);
            let cutoff = opts.deadline.map_or(cutoff, |d| d.min(cutoff));
            if ht_countermodel(f, 3, 20_000, Some(cutoff)).is_some() {
                return LhtResult { verdict: Verdict::Refuted, rounds: limit };
            }
        }
        if opts.max_limit.is_some_and(|m| limit >= m) {
            return LhtResult { verdict: Verdict::GaveUp, rounds: limit };
        }
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return LhtResult { verdict: Verdict::Timeout, rounds: limit };
        }
        limit += 1;
    }
}

pub enum Search {
    Proved(Proof),
    Failed,
    Timeout,
}

/// One round of search with a fixed free-variable limit per branch.
pub fn prove_sequent(root: Sequent, gen: VarGen, var_limit: usize, deadline: Option<Instant>) -> Search {
    let mut engine = Engine { sigma: Substitution::new(), gen, sites: 0, var_limit, log: Vec::new() };
    let mut stack: Vec<Choice> = Vec::new();
    let mut goals = cons(Rc::new(root), None);
    let mut ticks = 0u32;
    loop {
        let Some(node) = goals else {
            return Search::Proved(engine.proof());
        };
        ticks += 1;
        if ticks.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() >= d) {
            return Search::Timeout;
        }
        stack.push(Choice {
            seq: node.seq.clone(),
            rest: node.next.clone(),
            cursor: Cursor::Axiom { a: 0, j: 0 },
            mark: engine.sigma.mark(),
            log_len: engine.log.len(),
        });
        goals = loop {
            let Some(choice) = stack.last_mut() else {
                return Search::Failed;
            };
            match engine.next_alternative(choice) {
                Some(g) => {
                    if matches!(choice.cursor, Cursor::Done) {
                        stack.pop();
                    }
                    break g;
                }
                None => {
                    stack.pop();
                }
            }
        };
    }
}

struct GoalNode {
    seq: Rc<Sequent>,
    next: Goals,
}

type Goals = Option<Rc<GoalNode>>;

fn cons(seq: Rc<Sequent>, next: Goals) -> Goals {
    Some(Rc::new(GoalNode { seq, next }))
}

#[derive(Clone, Copy)]
enum Cursor {
    /// Next axiom candidate: left formula `a`, then right formula `j`, or
    /// left formula `j - |right|` when it is a negation.
    Axiom { a: usize, j: usize },
    Rule { idx: usize, pos: usize },
    Done,
}

struct Choice {
    seq: Rc<Sequent>,
    rest: Goals,
    cursor: Cursor,
    mark: usize,
    log_len: usize,
}

struct Step {
    seq: Rc<Sequent>,
    rule: Rule,
    principal: Vec<Fm>,
    premises: usize,
}

struct Engine {
    sigma: Substitution,
    gen: VarGen,
    sites: u32,
    var_limit: usize,
    log: Vec<Step>,
}

impl Engine {
    fn next_alternative(&mut self, ch: &mut Choice) -> Option<Goals> {
        self.sigma.undo(ch.mark);
        self.log.truncate(ch.log_len);
        let seq = ch.seq.clone();
        loop {
            match ch.cursor {
                Cursor::Done => return None,
                Cursor::Axiom { a, j } => {
                    if a >= seq.left.len() {
                        ch.cursor = Cursor::Rule { idx: 0, pos: 0 };
                        continue;
                    }
                    let nr = seq.right.len();
                    if j >= nr + seq.left.len() {
                        ch.cursor = Cursor::Axiom { a: a + 1, j: 0 };
                        continue;
                    }
                    ch.cursor = Cursor::Axiom { a, j: j + 1 };
                    let lhs = &seq.left[a];
                    let (rhs, rule) = if j < nr {
                        (&seq.right[j], Rule::Axiom1)
                    } else {
                        match &*seq.left[j - nr] {
                            Formula::Not(b) => (b, Rule::Axiom2),
                            _ => continue,
                        }
                    };
                    let identical = self.sigma.identical_formulas(lhs, rhs);
                    if identical || (lhs.is_literal() && self.sigma.unify_literals(lhs, rhs)) {
                        if identical {
                            ch.cursor = Cursor::Done;
                        }
                        self.log.push(Step {
                            seq: seq.clone(),
                            rule,
                            principal: vec![lhs.clone(), rhs.clone()],
                            premises: 0,
                        });
                        return Some(ch.rest.clone());
                    }
                }
                Cursor::Rule { idx, pos } => {
                    let Some(&rule) = RULE_TABLE.get(idx) else {
                        ch.cursor = Cursor::Done;
                        return None;
                    };
                    let list = match rule.side() {
                        Side::Left => &seq.left,
                        Side::Right => &seq.right,
                    };
                    if pos >= list.len() {
                        ch.cursor = Cursor::Rule { idx: idx + 1, pos: 0 };
                        continue;
                    }
                    ch.cursor = Cursor::Rule { idx, pos: pos + 1 };
                    if !rule.matches(&list[pos]) {
                        continue;
                    }
                    if rule.is_free_variable() {
                        if seq.free.len() >= self.var_limit {
                            continue;
                        }
                    } else {
                        ch.cursor = Cursor::Done;
                    }
                    return Some(self.apply(rule, &seq, pos, ch.rest.clone()));
                }
            }
        }
    }

    fn apply(&mut self, rule: Rule, seq: &Rc<Sequent>, pos: usize, rest: Goals) -> Goals {
        let (mut left, mut right) = (seq.left.clone(), seq.right.clone());
        let principal = match rule.side() {
            Side::Left => left.remove(pos),
            Side::Right => right.remove(pos),
        };
        let mut frozen = BTreeSet::new();
        for v in &seq.free {
            frozen.extend(self.sigma.apply(&Term::Var(*v)).vars());
        }
        let instance = if rule.is_eigenvariable() {
            self.sites += 1;
            Instance::Term(skolem_term(self.sites, &seq.free))
        } else {
            Instance::Fresh
        };
        let (deltas, new_var) = premises(rule, &principal, instance, &frozen, &self.sigma, &mut self.gen);
        let mut free = seq.free.clone();
        free.extend(new_var);
        self.log.push(Step { seq: seq.clone(), rule, principal: vec![principal], premises: deltas.len() });
        let mut goals = rest;
        for (l, r) in deltas.into_iter().rev() {
            let premise = Sequent {
                left: l.into_iter().chain(left.iter().cloned()).collect(),
                right: r.into_iter().chain(right.iter().cloned()).collect(),
                free: free.clone(),
            };
            goals = cons(Rc::new(premise), goals);
        }
        goals
    }

    fn proof(&self) -> Proof {
        let mut idx = 0;
        self.build(&mut idx)
    }

    fn build(&self, idx: &mut usize) -> ProofNode {
        let step = &self.log[*idx];
        *idx += 1;
        let resolve = |v: &[Fm]| v.iter().map(|f| self.sigma.apply_formula(f)).collect();
        let children = (0..step.premises).map(|_| self.build(idx)).collect();
        ProofNode {
            left: resolve(&step.seq.left),
            right: resolve(&step.seq.right),
            rule: step.rule,
            principal: resolve(&step.principal),
            children,
        }
    }
}
