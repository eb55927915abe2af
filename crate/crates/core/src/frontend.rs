//! Problem input: a TPTP `fof` subset and the compact native syntax
//! (`,` `;` `~` `=>` `<=>` `all X:` `ex X:`), goal assembly and equality axioms.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use thiserror::Error;

use crate::term::{Fm, Formula, Sym, Term, Var, VarGen, EQUALITY};

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unsupported role `{0}`")]
    UnsupportedRole(String),
    #[error("symbol `{symbol}` used with arity {first} and {second}")]
    ArityClash { symbol: String, first: usize, second: usize },
    #[error("more than one conjecture")]
    MultipleConjectures,
    #[error("problem has neither axioms nor a conjecture")]
    EmptyProblem,
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Tptp,
    Native,
}

impl Format {
    /// `.p` and `.ax` files are TPTP, anything else native.
    pub fn guess(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("p") | Some("ax") | Some("tptp") => Format::Tptp,
            _ => Format::Native,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Directory that `include('...')` paths are resolved against.
    pub axiom_root: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub name: String,
    pub axioms: Vec<Fm>,
    pub conjecture: Option<Fm>,
    pub uses_equality: bool,
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Semi,
    Dot,
    Tilde,
    Amp,
    Pipe,
    Imp,
    RevImp,
    Iff,
    Xor,
    Nor,
    Nand,
    Eq,
    Neq,
    Bang,
    Question,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, FrontendError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| FrontendError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let adv = |n: usize, i: &mut usize, line: &mut usize, col: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            adv(1, &mut i, &mut line, &mut col);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                adv(1, &mut i, &mut line, &mut col);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            adv(2, &mut i, &mut line, &mut col);
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                adv(1, &mut i, &mut line, &mut col);
            }
            if i >= chars.len() {
                return Err(err(l0, c0, "unterminated comment".into()));
            }
            adv(2, &mut i, &mut line, &mut col);
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let sym3 = [("<=>", Tok::Iff), ("<~>", Tok::Xor)];
        let sym2 = [
            ("=>", Tok::Imp),
            ("<=", Tok::RevImp),
            ("~|", Tok::Nor),
            ("~&", Tok::Nand),
            ("!=", Tok::Neq),
        ];
        if let Some((s, t)) = sym3.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push(Spanned { tok: t.clone(), line: l0, col: c0 });
            adv(s.len(), &mut i, &mut line, &mut col);
            continue;
        }
        if let Some((s, t)) = sym2.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push(Spanned { tok: t.clone(), line: l0, col: c0 });
            adv(s.len(), &mut i, &mut line, &mut col);
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            ';' => Some(Tok::Semi),
            '.' => Some(Tok::Dot),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Pipe),
            '=' => Some(Tok::Eq),
            '!' => Some(Tok::Bang),
            '?' => Some(Tok::Question),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Spanned { tok: t, line: l0, col: c0 });
            adv(1, &mut i, &mut line, &mut col);
            continue;
        }
        if c == '\'' || c == '"' {
            let mut s = String::new();
            adv(1, &mut i, &mut line, &mut col);
            while i < chars.len() && chars[i] != c {
                if chars[i] == '\\' && i + 1 < chars.len() {
                    adv(1, &mut i, &mut line, &mut col);
                }
                s.push(chars[i]);
                adv(1, &mut i, &mut line, &mut col);
            }
            if i >= chars.len() {
                return Err(err(l0, c0, "unterminated quoted name".into()));
            }
            adv(1, &mut i, &mut line, &mut col);
            out.push(Spanned { tok: Tok::Lower(s), line: l0, col: c0 });
            continue;
        }
        if c.is_alphanumeric() || c == '_' || c == '$' {
            let mut s = String::new();
            if c == '$' {
                adv(1, &mut i, &mut line, &mut col);
            }
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                adv(1, &mut i, &mut line, &mut col);
            }
            let tok = if c == '$' {
                Tok::Dollar(s)
            } else if c.is_uppercase() || c == '_' {
                Tok::Upper(s)
            } else {
                Tok::Lower(s)
            };
            out.push(Spanned { tok, line: l0, col: c0 });
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character `{c}`")));
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<(String, Var)>,
    gen: &'a mut VarGen,
    arities: &'a mut HashMap<(bool, String), usize>,
    syms: &'a mut HashMap<String, Sym>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, FrontendError> {
        let s = &self.toks[self.pos];
        Err(FrontendError::Syntax { line: s.line, col: s.col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> Result<(), FrontendError> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {:?}, found {:?}", t, self.peek()))
        }
    }

    fn sym(&mut self, name: &str) -> Sym {
        self.syms.entry(name.to_string()).or_insert_with(|| Rc::from(name)).clone()
    }

    fn check_arity(&mut self, predicate: bool, name: &str, arity: usize) -> Result<(), FrontendError> {
        match self.arities.get(&(predicate, name.to_string())) {
            Some(&a) if a != arity => Err(FrontendError::ArityClash {
                symbol: name.to_string(),
                first: a,
                second: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert((predicate, name.to_string()), arity);
                Ok(())
            }
        }
    }

    fn term(&mut self) -> Result<Term, FrontendError> {
        match self.next() {
            Tok::Upper(name) => match self.scope.iter().rev().find(|(n, _)| *n == name) {
                Some((_, v)) => Ok(Term::Var(*v)),
                None => {
                    self.pos -= 1;
                    self.error(format!("unbound variable `{name}`"))
                }
            },
            Tok::Lower(name) => {
                let args = self.args()?;
                self.check_arity(false, &name, args.len())?;
                Ok(Term::Fun(self.sym(&name), args.into()))
            }
            t => {
                self.pos -= 1;
                self.error(format!("expected a term, found {t:?}"))
            }
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, FrontendError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            loop {
                args.push(self.term()?);
                match self.next() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected `,` or `)` in argument list");
                    }
                }
            }
        }
        Ok(args)
    }

    /// Atom, or `s = t` / `s != t`.
    fn atomic(&mut self) -> Result<Fm, FrontendError> {
        if let Tok::Dollar(w) = self.peek().clone() {
            return self.error(format!("`${w}` is not supported"));
        }
        let start = self.pos;
        let (lhs, head) = match self.peek().clone() {
            Tok::Lower(name) => {
                self.next();
                let args = self.args()?;
                (Term::Fun(self.sym(&name), args.into()), Some(name))
            }
            _ => (self.term()?, None),
        };
        match self.peek() {
            Tok::Eq | Tok::Neq => {
                if let (Some(name), Term::Fun(_, args)) = (&head, &lhs) {
                    self.check_arity(false, name, args.len())?;
                }
                let neg = self.next() == Tok::Neq;
                let rhs = self.term()?;
                let eq = Rc::new(Formula::Atom(self.sym(EQUALITY), vec![lhs, rhs].into()));
                Ok(if neg { Formula::not(eq) } else { eq })
            }
            _ => match lhs {
                Term::Fun(name, args) => {
                    self.check_arity(true, &name, args.len())?;
                    Ok(Rc::new(Formula::Atom(name, args)))
                }
                Term::Var(_) => {
                    self.pos = start;
                    self.error("a variable is not a formula")
                }
            },
        }
    }

    fn bind_vars(&mut self, names: &[String]) -> Vec<Var> {
        names
            .iter()
            .map(|n| {
                let v = self.gen.fresh();
                self.scope.push((n.clone(), v));
                v
            })
            .collect()
    }

    // ---- TPTP -------------------------------------------------------------

    fn tptp_formula(&mut self) -> Result<Fm, FrontendError> {
        let lhs = self.tptp_unitary()?;
        match self.peek().clone() {
            Tok::Amp | Tok::Pipe => {
                let op = self.peek().clone();
                let mut items = vec![lhs];
                while *self.peek() == op {
                    self.next();
                    items.push(self.tptp_unitary()?);
                }
                let join = if op == Tok::Amp { Formula::and } else { Formula::or };
                Ok(items.into_iter().reduce(join).unwrap())
            }
            Tok::Imp | Tok::RevImp | Tok::Iff | Tok::Xor | Tok::Nor | Tok::Nand => {
                let op = self.next();
                let rhs = self.tptp_unitary()?;
                Ok(match op {
                    Tok::Imp => Formula::imp(lhs, rhs),
                    Tok::RevImp => Formula::imp(rhs, lhs),
                    Tok::Iff => Formula::iff(lhs, rhs),
                    Tok::Xor => Formula::not(Formula::iff(lhs, rhs)),
                    Tok::Nor => Formula::not(Formula::or(lhs, rhs)),
                    Tok::Nand => Formula::not(Formula::and(lhs, rhs)),
                    _ => unreachable!(),
                })
            }
            _ => Ok(lhs),
        }
    }

    fn tptp_unitary(&mut self) -> Result<Fm, FrontendError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.tptp_unitary()?))
            }
            Tok::Bang | Tok::Question => {
                let universal = self.next() == Tok::Bang;
                self.expect(Tok::LBrack)?;
                let mut names = Vec::new();
                loop {
                    match self.next() {
                        Tok::Upper(n) => names.push(n),
                        _ => {
                            self.pos -= 1;
                            return self.error("expected a variable in quantifier list");
                        }
                    }
                    match self.next() {
                        Tok::Comma => continue,
                        Tok::RBrack => break,
                        _ => {
                            self.pos -= 1;
                            return self.error("expected `,` or `]`");
                        }
                    }
                }
                self.expect(Tok::Colon)?;
                let vars = self.bind_vars(&names);
                let body = self.tptp_unitary()?;
                self.scope.truncate(self.scope.len() - vars.len());
                Ok(quantify(universal, &vars, body))
            }
            Tok::LParen => {
                self.next();
                let f = self.tptp_formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atomic(),
        }
    }

    // ---- native -----------------------------------------------------------

    fn native_formula(&mut self) -> Result<Fm, FrontendError> {
        let lhs = self.native_binary(0)?;
        Ok(lhs)
    }

    /// Levels: 0 `<=>`, 1 `=>`, 2 `;`, 3 `,`. All right-associative.
    fn native_binary(&mut self, level: u8) -> Result<Fm, FrontendError> {
        if level == 4 {
            return self.native_unary();
        }
        let lhs = self.native_binary(level + 1)?;
        let (tok, join): (Tok, fn(Fm, Fm) -> Fm) = match level {
            0 => (Tok::Iff, Formula::iff),
            1 => (Tok::Imp, Formula::imp),
            2 => (Tok::Semi, Formula::or),
            _ => (Tok::Comma, Formula::and),
        };
        if *self.peek() == tok {
            self.next();
            let rhs = self.native_binary(level)?;
            Ok(join(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn native_unary(&mut self) -> Result<Fm, FrontendError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.native_unary()?))
            }
            Tok::Lower(w) if (w == "all" || w == "ex") && matches!(self.peek2(), Tok::Upper(_) | Tok::LBrack) => {
                self.next();
                let mut names = Vec::new();
                if *self.peek() == Tok::LBrack {
                    self.next();
                    loop {
                        match self.next() {
                            Tok::Upper(n) => names.push(n),
                            _ => {
                                self.pos -= 1;
                                return self.error("expected a variable");
                            }
                        }
                        match self.next() {
                            Tok::Comma => continue,
                            Tok::RBrack => break,
                            _ => {
                                self.pos -= 1;
                                return self.error("expected `,` or `]`");
                            }
                        }
                    }
                } else if let Tok::Upper(n) = self.next() {
                    names.push(n);
                }
                self.expect(Tok::Colon)?;
                let vars = self.bind_vars(&names);
                let body = self.native_formula()?;
                self.scope.truncate(self.scope.len() - vars.len());
                Ok(quantify(w == "all", &vars, body))
            }
            Tok::LParen => {
                self.next();
                let f = self.native_formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atomic(),
        }
    }
}

fn quantify(universal: bool, vars: &[Var], body: Fm) -> Fm {
    vars.iter().rev().fold(body, |acc, v| {
        if universal {
            Formula::forall(*v, acc)
        } else {
            Formula::exists(*v, acc)
        }
    })
}

/// Shared state while reading one problem (possibly across included files).
struct Reader {
    gen: VarGen,
    arities: HashMap<(bool, String), usize>,
    syms: HashMap<String, Sym>,
    axioms: Vec<Fm>,
    conjecture: Option<Fm>,
    options: ParseOptions,
}

impl Reader {
    fn parser(&mut self, text: &str) -> Result<Parser<'_>, FrontendError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            scope: Vec::new(),
            gen: &mut self.gen,
            arities: &mut self.arities,
            syms: &mut self.syms,
        })
    }

    fn read_tptp(&mut self, text: &str, base: Option<&Path>) -> Result<(), FrontendError> {
        let mut includes = Vec::new();
        let mut entries = Vec::new();
        {
            let mut p = self.parser(text)?;
            loop {
                match p.next() {
                    Tok::Eof => break,
                    Tok::Lower(kw) if kw == "fof" => {
                        p.expect(Tok::LParen)?;
                        match p.next() {
                            Tok::Lower(_) | Tok::Upper(_) => {}
                            _ => return p.error("expected a formula name"),
                        }
                        p.expect(Tok::Comma)?;
                        let role = match p.next() {
                            Tok::Lower(r) => r,
                            _ => return p.error("expected a role"),
                        };
                        p.expect(Tok::Comma)?;
                        let f = p.tptp_formula()?;
                        // optional source / useful info annotations are skipped
                        let mut depth = 0usize;
                        loop {
                            match p.peek() {
                                Tok::RParen if depth == 0 => break,
                                Tok::LParen | Tok::LBrack => depth += 1,
                                Tok::RParen | Tok::RBrack => depth -= 1,
                                Tok::Eof => return p.error("unexpected end of input"),
                                _ => {}
                            }
                            p.next();
                        }
                        p.expect(Tok::RParen)?;
                        p.expect(Tok::Dot)?;
                        entries.push((role, f));
                    }
                    Tok::Lower(kw) if kw == "include" => {
                        p.expect(Tok::LParen)?;
                        let path = match p.next() {
                            Tok::Lower(s) => s,
                            _ => return p.error("expected a quoted path"),
                        };
                        if *p.peek() == Tok::Comma {
                            while !matches!(p.peek(), Tok::RParen | Tok::Eof) {
                                p.next();
                            }
                        }
                        p.expect(Tok::RParen)?;
                        p.expect(Tok::Dot)?;
                        includes.push(path);
                    }
                    Tok::Lower(kw) if kw == "cnf" || kw == "tff" || kw == "thf" => {
                        p.pos -= 1;
                        return p.error(format!("`{kw}` formulas are not supported"));
                    }
                    _ => {
                        p.pos -= 1;
                        return p.error("expected `fof(` or `include(`");
                    }
                }
            }
        }
        for inc in includes {
            let root = self
                .options
                .axiom_root
                .clone()
                .or_else(|| base.map(Path::to_path_buf))
                .unwrap_or_default();
            let path = root.join(&inc);
            let text = std::fs::read_to_string(&path).map_err(|source| FrontendError::Io { path: path.clone(), source })?;
            self.read_tptp(&text, path.parent())?;
        }
        for (role, f) in entries {
            match role.as_str() {
                "axiom" | "hypothesis" | "lemma" | "definition" | "theorem" => self.axioms.push(f),
                "conjecture" => {
                    if self.conjecture.replace(f).is_some() {
                        return Err(FrontendError::MultipleConjectures);
                    }
                }
                other => return Err(FrontendError::UnsupportedRole(other.to_string())),
            }
        }
        Ok(())
    }
}

/// Parse a problem. For native syntax the whole text is one conjecture
/// (an optional trailing `.` is accepted).
pub fn parse_problem(text: &str, format: Format, options: &ParseOptions) -> Result<Problem, FrontendError> {
    parse_problem_named("problem", text, format, options, None)
}

pub fn parse_problem_named(
    name: &str,
    text: &str,
    format: Format,
    options: &ParseOptions,
    base: Option<&Path>,
) -> Result<Problem, FrontendError> {
    let mut r = Reader {
        gen: VarGen::new(),
        arities: HashMap::new(),
        syms: HashMap::new(),
        axioms: Vec::new(),
        conjecture: None,
        options: options.clone(),
    };
    match format {
        Format::Tptp => r.read_tptp(text, base)?,
        Format::Native => {
            let mut p = r.parser(text)?;
            let f = p.native_formula()?;
            if *p.peek() == Tok::Dot {
                p.next();
            }
            if *p.peek() != Tok::Eof {
                return p.error("trailing input after formula");
            }
            r.conjecture = Some(f);
        }
    }
    let mut uses_equality = false;
    for f in r.axioms.iter().chain(r.conjecture.iter()) {
        f.visit_atoms(&mut |p, _| uses_equality |= &**p == EQUALITY);
    }
    Ok(Problem {
        name: name.to_string(),
        axioms: r.axioms,
        conjecture: r.conjecture,
        uses_equality,
    })
}

/// Parse a single native-syntax formula.
pub fn parse_formula(text: &str) -> Result<Fm, FrontendError> {
    let p = parse_problem(text, Format::Native, &ParseOptions::default())?;
    Ok(p.conjecture.expect("native parse yields a conjecture"))
}

pub fn read_problem(path: &Path, format: Option<Format>, options: &ParseOptions) -> Result<Problem, FrontendError> {
    let text = std::fs::read_to_string(path).map_err(|source| FrontendError::Io { path: path.to_path_buf(), source })?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("problem");
    let format = format.unwrap_or_else(|| Format::guess(path));
    parse_problem_named(name, &text, format, options, path.parent())
}

/// `(A1 & ... & An) => C`; `C` without axioms; `~(A1 & ... & An)` without a conjecture.
pub fn assemble_goal(problem: &Problem) -> Result<Fm, FrontendError> {
    let axioms = Formula::conj(problem.axioms.iter().cloned());
    match (axioms, &problem.conjecture) {
        (Some(a), Some(c)) => Ok(Formula::imp(a, c.clone())),
        (None, Some(c)) => Ok(c.clone()),
        (Some(a), None) => Ok(Formula::not(a)),
        (None, None) => Err(FrontendError::EmptyProblem),
    }
}

/// Symbols with their arities.
pub type Arities = Vec<(Sym, usize)>;

/// Function and predicate symbols with arities, in first-occurrence order.
pub fn symbols(f: &Formula) -> (Arities, Arities) {
    fn term_syms(t: &Term, out: &mut Vec<(Sym, usize)>) {
        if let Term::Fun(name, args) = t {
            if !out.iter().any(|(n, a)| n == name && *a == args.len()) {
                out.push((name.clone(), args.len()));
            }
            args.iter().for_each(|a| term_syms(a, out));
        }
    }
    let mut funs = Vec::new();
    let mut preds = Vec::new();
    f.visit_atoms(&mut |p, args| {
        if !preds.iter().any(|(n, a): &(Sym, usize)| n == p && *a == args.len()) {
            preds.push((p.clone(), args.len()));
        }
        args.iter().for_each(|a| term_syms(a, &mut funs));
    });
    (funs, preds)
}

/// Prefix the goal with the equality theory of its signature when `=` occurs:
/// reflexivity, symmetry, transitivity and one substitution axiom per
/// argument position of every function and predicate symbol.
pub fn add_equality_axioms(f: &Fm) -> Fm {
    let (funs, preds) = symbols(f);
    if !preds.iter().any(|(p, _)| &**p == EQUALITY) {
        return f.clone();
    }
    let mut gen = VarGen::above(f);
    let eq_sym: Sym = EQUALITY.into();
    let eq = |a: Term, b: Term| Rc::new(Formula::Atom(eq_sym.clone(), vec![a, b].into()));
    let mut axioms = Vec::new();

    let x = gen.fresh();
    axioms.push(Formula::forall(x, eq(Term::Var(x), Term::Var(x))));

    let (x, y) = (gen.fresh(), gen.fresh());
    axioms.push(quantify(
        true,
        &[x, y],
        Formula::imp(eq(Term::Var(x), Term::Var(y)), eq(Term::Var(y), Term::Var(x))),
    ));

    let (x, y, z) = (gen.fresh(), gen.fresh(), gen.fresh());
    axioms.push(quantify(
        true,
        &[x, y, z],
        Formula::imp(
            Formula::and(eq(Term::Var(x), Term::Var(y)), eq(Term::Var(y), Term::Var(z))),
            eq(Term::Var(x), Term::Var(z)),
        ),
    ));

    // one axiom per argument position; the other positions are shared variables
    let position_axioms = |gen: &mut VarGen, arity: usize, build: &dyn Fn(Vec<Term>, Vec<Term>) -> Fm| {
        let mut out = Vec::new();
        for i in 0..arity {
            let (x, y) = (gen.fresh(), gen.fresh());
            let others: Vec<Var> = (0..arity - 1).map(|_| gen.fresh()).collect();
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut k = 0;
            for j in 0..arity {
                if j == i {
                    left.push(Term::Var(x));
                    right.push(Term::Var(y));
                } else {
                    left.push(Term::Var(others[k]));
                    right.push(Term::Var(others[k]));
                    k += 1;
                }
            }
            let mut vars = vec![x, y];
            vars.extend(others);
            out.push(quantify(true, &vars, build(left, right)));
        }
        out
    };

    for (name, arity) in &funs {
        let name = name.clone();
        let eqc = eq_sym.clone();
        axioms.extend(position_axioms(&mut gen, *arity, &|l, r| {
            let (x, y) = l.iter().zip(&r).find(|(a, b)| a != b).map(|(a, b)| (a.clone(), b.clone())).unwrap();
            Formula::imp(
                Rc::new(Formula::Atom(eqc.clone(), vec![x, y].into())),
                Rc::new(Formula::Atom(
                    eqc.clone(),
                    vec![Term::Fun(name.clone(), l.into()), Term::Fun(name.clone(), r.into())].into(),
                )),
            )
        }));
    }
    for (name, arity) in preds.iter().filter(|(p, _)| &**p != EQUALITY) {
        let name = name.clone();
        let eqc = eq_sym.clone();
        axioms.extend(position_axioms(&mut gen, *arity, &|l, r| {
            let (x, y) = l.iter().zip(&r).find(|(a, b)| a != b).map(|(a, b)| (a.clone(), b.clone())).unwrap();
            Formula::imp(
                Rc::new(Formula::Atom(eqc.clone(), vec![x, y].into())),
                Formula::imp(
                    Rc::new(Formula::Atom(name.clone(), l.into())),
                    Rc::new(Formula::Atom(name.clone(), r.into())),
                ),
            )
        }));
    }
    Formula::imp(Formula::conj(axioms).unwrap(), f.clone())
}
