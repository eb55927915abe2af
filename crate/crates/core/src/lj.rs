//! Single-succedent intuitionistic sequent search (LJ) with free variables and
//! Skolem terms.
//!
//! Invertible rules commit: ∧-left, →-right, ¬-right, ∀-right, ∃-left and the
//! equivalence rewrites first, then the branching ∧-right and ∨-left. The
//! remaining rules are backtrack points: ∨-right (either disjunct), →-left and
//! ¬-left (both keep their principal formula), ∀-left (keeps its principal
//! formula) and ∃-right. A branch fails when a sequent repeats one of its
//! ancestors, which makes the search terminate on propositional input. The
//! round limit bounds both the free variables on a branch and how often one
//! formula is skolemized on it; without the second bound a loop through
//! ¬-left and ∀-right adds a new Skolem constant on every pass and never
//! repeats a sequent.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;
use std::time::Instant;

use crate::lht::has_free_var_quantifier;
use crate::term::{fresh_copy, skolem_term, substitute, Fm, Formula, Substitution, Term, Var, VarGen};
use crate::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LjRule {
    Axiom,
    AndLeft,
    AndRight,
    OrLeft,
    OrRight1,
    OrRight2,
    ImpLeft,
    ImpRight,
    NotLeft,
    NotRight,
    IffLeft,
    IffRight,
    ForallLeft,
    ForallRight,
    ExistsLeft,
    ExistsRight,
}

impl LjRule {
    pub fn name(self) -> &'static str {
        use LjRule::*;
        match self {
            Axiom => "axiom",
            AndLeft => "and-left",
            AndRight => "and-right",
            OrLeft => "or-left",
            OrRight1 => "or-right-1",
            OrRight2 => "or-right-2",
            ImpLeft => "imp-left",
            ImpRight => "imp-right",
            NotLeft => "not-left",
            NotRight => "not-right",
            IffLeft => "iff-left",
            IffRight => "iff-right",
            ForallLeft => "all-left",
            ForallRight => "all-right",
            ExistsLeft => "ex-left",
            ExistsRight => "ex-right",
        }
    }
}

impl fmt::Display for LjRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct LjSeq {
    left: Vec<Fm>,
    right: Option<Fm>,
    free: Vec<Var>,
    /// Principal formulas of the ∀-right and ∃-left steps on the branch.
    skolemized: Vec<Fm>,
    parent: Option<Rc<LjSeq>>,
}

/// A node of a closed LJ proof with the closing substitution applied.
#[derive(Clone, Debug)]
pub struct LjProof {
    pub left: Vec<Fm>,
    pub right: Option<Fm>,
    pub rule: LjRule,
    pub children: Vec<LjProof>,
}

impl LjProof {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(LjProof::size).sum::<usize>()
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        write!(f, "{:indent$}", "", indent = 2 * depth)?;
        for (i, a) in self.left.iter().enumerate() {
            write!(f, "{}{a}", if i > 0 { ", " } else { "" })?;
        }
        f.write_str(if self.left.is_empty() { "|-" } else { " |-" })?;
        if let Some(c) = &self.right {
            write!(f, " {c}")?;
        }
        writeln!(f, "   [{}]", self.rule)?;
        self.children.iter().try_for_each(|c| c.write(f, depth + 1))
    }
}

impl fmt::Display for LjProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[derive(Clone, Debug)]
pub struct LjOptions {
    pub initial_limit: usize,
    pub max_limit: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Default for LjOptions {
    fn default() -> Self {
        LjOptions { initial_limit: 1, max_limit: None, deadline: None }
    }
}

#[derive(Clone, Debug)]
pub struct LjResult {
    pub verdict: Verdict<LjProof>,
    pub rounds: usize,
}

pub fn prove_lj(f: &Fm, opts: &LjOptions) -> LjResult {
    let mut limit = opts.initial_limit.max(1);
    let decidable = !has_free_var_quantifier(f);
    loop {
        match search(f, limit, opts.deadline) {
            Round::Proved(p) => return LjResult { verdict: Verdict::Proved(p), rounds: limit },
            Round::Timeout => return LjResult { verdict: Verdict::Timeout, rounds: limit },
            Round::Failed { bounded: false } if decidable => return LjResult { verdict: Verdict::Refuted, rounds: limit },
            Round::Failed { .. } => {}
        }
        if opts.max_limit.is_some_and(|m| limit >= m) {
            return LjResult { verdict: Verdict::GaveUp, rounds: limit };
        }
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return LjResult { verdict: Verdict::Timeout, rounds: limit };
        }
        limit += 1;
    }
}

enum Round {
    Proved(LjProof),
    /// `bounded` when the Skolem bound cut off a branch.
    Failed { bounded: bool },
    Timeout,
}

struct GoalNode {
    seq: Rc<LjSeq>,
    next: Goals,
}

type Goals = Option<Rc<GoalNode>>;

fn cons(seq: Rc<LjSeq>, next: Goals) -> Goals {
    Some(Rc::new(GoalNode { seq, next }))
}

#[derive(Clone, Copy, Debug)]
enum Move {
    Left(LjRule, usize),
    Right(LjRule),
}

enum Cursor {
    Axiom(usize),
    Invertible,
    Choices(Vec<Move>, usize),
    Done,
}

struct Choice {
    seq: Rc<LjSeq>,
    rest: Goals,
    cursor: Cursor,
    mark: usize,
    log_len: usize,
}

struct Step {
    seq: Rc<LjSeq>,
    rule: LjRule,
    premises: usize,
}

struct Engine {
    sigma: Substitution,
    gen: VarGen,
    sites: u32,
    var_limit: usize,
    skolem_hit: bool,
    log: Vec<Step>,
}

fn search(f: &Fm, var_limit: usize, deadline: Option<Instant>) -> Round {
    let mut engine = Engine { sigma: Substitution::new(), gen: VarGen::above(f), sites: 0, var_limit, skolem_hit: false, log: Vec::new() };
    let root = LjSeq { left: vec![], right: Some(f.clone()), free: vec![], skolemized: vec![], parent: None };
    let mut stack: Vec<Choice> = Vec::new();
    let mut goals = cons(Rc::new(root), None);
    let mut ticks = 0u32;
    loop {
        let Some(node) = goals else {
            let mut idx = 0;
            return Round::Proved(engine.build(&mut idx));
        };
        ticks += 1;
        if ticks.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() >= d) {
            return Round::Timeout;
        }
        let cursor = if engine.repeats_ancestor(&node.seq) { Cursor::Done } else { Cursor::Axiom(0) };
        stack.push(Choice {
            seq: node.seq.clone(),
            rest: node.next.clone(),
            cursor,
            mark: engine.sigma.mark(),
            log_len: engine.log.len(),
        });
        goals = loop {
            let Some(choice) = stack.last_mut() else {
                return Round::Failed { bounded: engine.skolem_hit };
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

impl Engine {
    fn same_sequent(&self, a: &LjSeq, b: &LjSeq) -> bool {
        let same_right = match (&a.right, &b.right) {
            (None, None) => true,
            (Some(x), Some(y)) => self.sigma.identical_formulas(x, y),
            _ => false,
        };
        let contains = |xs: &[Fm], ys: &[Fm]| xs.iter().all(|x| ys.iter().any(|y| self.sigma.identical_formulas(x, y)));
        same_right && contains(&a.left, &b.left) && contains(&b.left, &a.left)
    }

    fn repeats_ancestor(&self, seq: &LjSeq) -> bool {
        let mut cur = seq.parent.as_ref();
        while let Some(anc) = cur {
            if self.same_sequent(seq, anc) {
                return true;
            }
            cur = anc.parent.as_ref();
        }
        false
    }

    fn next_alternative(&mut self, ch: &mut Choice) -> Option<Goals> {
        self.sigma.undo(ch.mark);
        self.log.truncate(ch.log_len);
        let seq = ch.seq.clone();
        loop {
            match &mut ch.cursor {
                Cursor::Done => return None,
                Cursor::Axiom(i) => {
                    let Some(c) = &seq.right else {
                        ch.cursor = Cursor::Invertible;
                        continue;
                    };
                    let Some(a) = seq.left.get(*i) else {
                        ch.cursor = Cursor::Invertible;
                        continue;
                    };
                    *i += 1;
                    let identical = self.sigma.identical_formulas(a, c);
                    if identical || (a.is_atom() && self.sigma.unify_literals(a, c)) {
                        if identical {
                            ch.cursor = Cursor::Done;
                        }
                        self.log.push(Step { seq: seq.clone(), rule: LjRule::Axiom, premises: 0 });
                        return Some(ch.rest.clone());
                    }
                }
                Cursor::Invertible => {
                    if let Some(mv) = self.invertible(&seq) {
                        ch.cursor = Cursor::Done;
                        return Some(self.apply(mv, &seq, ch.rest.clone()));
                    }
                    ch.cursor = Cursor::Choices(self.choices(&seq), 0);
                }
                Cursor::Choices(moves, k) => {
                    let Some(&mv) = moves.get(*k) else {
                        ch.cursor = Cursor::Done;
                        return None;
                    };
                    *k += 1;
                    return Some(self.apply(mv, &seq, ch.rest.clone()));
                }
            }
        }
    }

    fn invertible(&mut self, seq: &LjSeq) -> Option<Move> {
        use Formula as F;
        let may_skolemize = |f: &Fm| {
            seq.skolemized.iter().filter(|g| self.sigma.identical_formulas(f, g)).count() < self.var_limit
        };
        if let Some(c) = &seq.right {
            let rule = match &**c {
                F::Imp(..) => Some(LjRule::ImpRight),
                F::Not(..) => Some(LjRule::NotRight),
                F::Forall(..) if may_skolemize(c) => Some(LjRule::ForallRight),
                F::Forall(..) => {
                    self.skolem_hit = true;
                    None
                }
                F::Iff(..) => Some(LjRule::IffRight),
                _ => None,
            };
            if let Some(r) = rule {
                return Some(Move::Right(r));
            }
        }
        for (i, a) in seq.left.iter().enumerate() {
            match &**a {
                F::And(..) => return Some(Move::Left(LjRule::AndLeft, i)),
                F::Exists(..) if may_skolemize(a) => return Some(Move::Left(LjRule::ExistsLeft, i)),
                F::Exists(..) => self.skolem_hit = true,
                F::Iff(..) => return Some(Move::Left(LjRule::IffLeft, i)),
                _ => {}
            }
        }
        if matches!(seq.right.as_deref(), Some(F::And(..))) {
            return Some(Move::Right(LjRule::AndRight));
        }
        seq.left
            .iter()
            .position(|a| matches!(&**a, F::Or(..)))
            .map(|i| Move::Left(LjRule::OrLeft, i))
    }

    fn choices(&self, seq: &LjSeq) -> Vec<Move> {
        use Formula as F;
        let mut moves = Vec::new();
        if matches!(seq.right.as_deref(), Some(F::Or(..))) {
            moves.push(Move::Right(LjRule::OrRight1));
            moves.push(Move::Right(LjRule::OrRight2));
        }
        for (i, a) in seq.left.iter().enumerate() {
            match &**a {
                F::Imp(..) => moves.push(Move::Left(LjRule::ImpLeft, i)),
                F::Not(..) => moves.push(Move::Left(LjRule::NotLeft, i)),
                _ => {}
            }
        }
        if seq.free.len() < self.var_limit {
            for (i, a) in seq.left.iter().enumerate() {
                if matches!(&**a, F::Forall(..)) {
                    moves.push(Move::Left(LjRule::ForallLeft, i));
                }
            }
            if matches!(seq.right.as_deref(), Some(F::Exists(..))) {
                moves.push(Move::Right(LjRule::ExistsRight));
            }
        }
        moves
    }

    fn frozen(&self, seq: &LjSeq) -> BTreeSet<Var> {
        let mut frozen = BTreeSet::new();
        for v in &seq.free {
            frozen.extend(self.sigma.apply(&Term::Var(*v)).vars());
        }
        frozen
    }

    /// Body of a quantified formula with the bound variable replaced by a
    /// Skolem term over the branch's free variables.
    fn skolemize(&mut self, seq: &LjSeq, x: Var, body: &Fm) -> Fm {
        self.sites += 1;
        let t = skolem_term(self.sites, &seq.free);
        let frozen = self.frozen(seq);
        fresh_copy(&substitute(body, x, &t), &frozen, &self.sigma, &mut self.gen)
    }

    /// Fresh copy of a quantified formula, returning its new bound variable and body.
    fn instantiate(&mut self, seq: &LjSeq, q: &Fm) -> (Var, Fm) {
        let frozen = self.frozen(seq);
        match &*fresh_copy(q, &frozen, &self.sigma, &mut self.gen) {
            Formula::Forall(y, c) | Formula::Exists(y, c) => (*y, c.clone()),
            _ => unreachable!(),
        }
    }

    fn apply(&mut self, mv: Move, seq: &Rc<LjSeq>, rest: Goals) -> Goals {
        use Formula as F;
        use LjRule::*;
        let both_ways = |a: &Fm, b: &Fm| Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b.clone(), a.clone()));
        let c = seq.right.clone();
        // (formulas added on the left, new right side, drop principal from left)
        let mut prems: Vec<(Vec<Fm>, Option<Fm>, bool)> = Vec::new();
        let mut new_var = None;
        let rule = match mv {
            Move::Right(rule) => {
                let principal = c.clone().expect("right rule needs a succedent");
                match (rule, &*principal) {
                    (ImpRight, F::Imp(a, b)) => prems.push((vec![a.clone()], Some(b.clone()), false)),
                    (NotRight, F::Not(a)) => prems.push((vec![a.clone()], None, false)),
                    (IffRight, F::Iff(a, b)) => prems.push((vec![], Some(both_ways(a, b)), false)),
                    (AndRight, F::And(a, b)) => {
                        prems.push((vec![], Some(a.clone()), false));
                        prems.push((vec![], Some(b.clone()), false));
                    }
                    (OrRight1, F::Or(a, _)) => prems.push((vec![], Some(a.clone()), false)),
                    (OrRight2, F::Or(_, b)) => prems.push((vec![], Some(b.clone()), false)),
                    (ForallRight, F::Forall(x, body)) => {
                        let inst = self.skolemize(seq, *x, body);
                        prems.push((vec![], Some(inst), false));
                    }
                    (ExistsRight, F::Exists(..)) => {
                        let (y, inst) = self.instantiate(seq, &principal);
                        new_var = Some(y);
                        prems.push((vec![], Some(inst), false));
                    }
                    _ => unreachable!("{rule} does not match {principal}"),
                }
                rule
            }
            Move::Left(rule, i) => {
                let principal = seq.left[i].clone();
                match (rule, &*principal) {
                    (AndLeft, F::And(a, b)) => prems.push((vec![a.clone(), b.clone()], c, true)),
                    (IffLeft, F::Iff(a, b)) => prems.push((vec![both_ways(a, b)], c, true)),
                    (OrLeft, F::Or(a, b)) => {
                        prems.push((vec![a.clone()], c.clone(), true));
                        prems.push((vec![b.clone()], c, true));
                    }
                    (ExistsLeft, F::Exists(x, body)) => {
                        let inst = self.skolemize(seq, *x, body);
                        prems.push((vec![inst], c, true));
                    }
                    (ImpLeft, F::Imp(a, b)) => {
                        prems.push((vec![], Some(a.clone()), false));
                        prems.push((vec![b.clone()], c, true));
                    }
                    (NotLeft, F::Not(a)) => prems.push((vec![], Some(a.clone()), false)),
                    (ForallLeft, F::Forall(..)) => {
                        let (y, inst) = self.instantiate(seq, &principal);
                        new_var = Some(y);
                        prems.push((vec![inst], c, false));
                    }
                    _ => unreachable!("{rule} does not match {principal}"),
                }
                return self.finish(rule, seq, Some(i), prems, new_var, rest);
            }
        };
        self.finish(rule, seq, None, prems, new_var, rest)
    }

    fn finish(
        &mut self,
        rule: LjRule,
        seq: &Rc<LjSeq>,
        principal: Option<usize>,
        prems: Vec<(Vec<Fm>, Option<Fm>, bool)>,
        new_var: Option<Var>,
        rest: Goals,
    ) -> Goals {
        let mut free = seq.free.clone();
        free.extend(new_var);
        let mut skolemized = seq.skolemized.clone();
        match (rule, principal) {
            (LjRule::ForallRight, _) => skolemized.extend(seq.right.clone()),
            (LjRule::ExistsLeft, Some(i)) => skolemized.push(seq.left[i].clone()),
            _ => {}
        }
        self.log.push(Step { seq: seq.clone(), rule, premises: prems.len() });
        let mut goals = rest;
        for (added, right, drop) in prems.into_iter().rev() {
            let mut left: Vec<Fm> = Vec::with_capacity(seq.left.len() + added.len());
            for a in added {
                if !left.iter().any(|b| self.sigma.identical_formulas(&a, b)) {
                    left.push(a);
                }
            }
            for (j, a) in seq.left.iter().enumerate() {
                if drop && Some(j) == principal {
                    continue;
                }
                if !left.iter().any(|b| self.sigma.identical_formulas(a, b)) {
                    left.push(a.clone());
                }
            }
            let premise = LjSeq { left, right, free: free.clone(), skolemized: skolemized.clone(), parent: Some(seq.clone()) };
            goals = cons(Rc::new(premise), goals);
        }
        goals
    }

    fn build(&self, idx: &mut usize) -> LjProof {
        let step = &self.log[*idx];
        *idx += 1;
        let children = (0..step.premises).map(|_| self.build(idx)).collect();
        LjProof {
            left: step.seq.left.iter().map(|f| self.sigma.apply_formula(f)).collect(),
            right: step.seq.right.as_ref().map(|f| self.sigma.apply_formula(f)),
            rule: step.rule,
            children,
        }
    }
}
