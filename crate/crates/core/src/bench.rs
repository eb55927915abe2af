//! Benchmark harness: run problems through a backend under a time limit and
//! aggregate the outcomes.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::conn::{prove_conn, ConnOptions};
use crate::embed::embed;
use crate::frontend::{add_equality_axioms, assemble_goal, parse_problem_named, read_problem, Format, ParseOptions, Problem};
use crate::lht::{prove_lht, LhtOptions};
use crate::lj::{prove_lj, LjOptions};
use crate::term::Fm;
use crate::Verdict;

/// Provers run deep recursions on large goals.
const WORKER_STACK: usize = 512 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Backend {
    Lht,
    Lj,
    LjHt,
    Conn,
    ConnHt,
}

impl Backend {
    pub const ALL: [Backend; 5] = [Backend::Lht, Backend::Lj, Backend::LjHt, Backend::Conn, Backend::ConnHt];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Lht => "lht",
            Backend::Lj => "lj",
            Backend::LjHt => "lj-ht",
            Backend::Conn => "conn",
            Backend::ConnHt => "conn-ht",
        }
    }

    /// Backends that prove the embedded goal intuitionistically. They cannot
    /// refute: an unprovable embedding says nothing about HT validity.
    pub fn embeds(self) -> bool {
        matches!(self, Backend::LjHt | Backend::ConnHt)
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown backend `{s}` (expected lht, lj, lj-ht, conn or conn-ht)"))
    }
}

/// SZS result status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Theorem,
    NonTheorem,
    Timeout,
    GaveUp,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Theorem => "Theorem",
            Status::NonTheorem => "Non-Theorem",
            Status::Timeout => "Timeout",
            Status::GaveUp => "GaveUp",
            Status::Error => "Error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub backend: Backend,
    pub timeout: Option<Duration>,
    /// `None` picks the format from the file extension.
    pub format: Option<Format>,
    pub axiom_root: Option<PathBuf>,
    pub regularity: bool,
    pub restricted_backtracking: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            backend: Backend::Lht,
            timeout: Some(Duration::from_secs(10)),
            format: None,
            axiom_root: None,
            regularity: true,
            restricted_backtracking: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub problem: String,
    pub backend: Backend,
    pub status: Status,
    pub seconds: f64,
    /// Deepening rounds of the engine.
    pub rounds: Option<usize>,
    /// Size of the proof: rule applications or connections.
    pub proof_size: Option<usize>,
    pub message: Option<String>,
}

impl RunResult {
    pub fn szs_line(&self) -> String {
        format!("% SZS status {} for {}", self.status, self.problem)
    }
}

/// Outcome of one engine call before the harness adds timing.
struct Outcome {
    status: Status,
    rounds: Option<usize>,
    proof_size: Option<usize>,
    message: Option<String>,
}

fn from_verdict<P>(v: &Verdict<P>, rounds: usize, size: impl Fn(&P) -> usize, embeds: bool) -> Outcome {
    let status = match v {
        Verdict::Proved(_) => Status::Theorem,
        Verdict::Refuted if embeds => Status::GaveUp,
        Verdict::Refuted => Status::NonTheorem,
        Verdict::Timeout => Status::Timeout,
        Verdict::GaveUp => Status::GaveUp,
    };
    Outcome { status, rounds: Some(rounds), proof_size: v.proof().map(size), message: None }
}

/// The formula a backend works on: the assembled goal with equality axioms,
/// embedded for the `*-ht` backends.
pub fn prepare_goal(problem: &Problem, backend: Backend) -> Result<Fm, String> {
    let goal = assemble_goal(problem).map_err(|e| e.to_string())?;
    let goal = if problem.uses_equality { add_equality_axioms(&goal) } else { goal };
    Ok(if backend.embeds() { embed(&goal) } else { goal })
}

fn prove(goal: &Fm, cfg: &RunConfig, deadline: Option<Instant>) -> Outcome {
    let embeds = cfg.backend.embeds();
    match cfg.backend {
        Backend::Lht => {
            let r = prove_lht(goal, &LhtOptions { deadline, ..LhtOptions::default() });
            from_verdict(&r.verdict, r.rounds, |p| p.rule_applications(), embeds)
        }
        Backend::Lj | Backend::LjHt => {
            let r = prove_lj(goal, &LjOptions { deadline, ..LjOptions::default() });
            from_verdict(&r.verdict, r.rounds, |p| p.size(), embeds)
        }
        Backend::Conn | Backend::ConnHt => {
            let opts = ConnOptions {
                deadline,
                regularity: cfg.regularity,
                schedule: if cfg.restricted_backtracking { vec![true, false] } else { vec![false] },
                max_depth: None,
            };
            match prove_conn(goal, &opts) {
                Ok(r) => from_verdict(&r.verdict, r.rounds, |p| p.connections.len(), embeds),
                Err(e) => Outcome { status: Status::Error, rounds: None, proof_size: None, message: Some(e.to_string()) },
            }
        }
    }
}

fn error(message: String) -> Outcome {
    Outcome { status: Status::Error, rounds: None, proof_size: None, message: Some(message) }
}

/// Run `load` and the prover on a worker thread with a large stack. Parsing
/// happens on the worker because formulas are not `Send`. Panics and late
/// answers are turned into `Error` and `Timeout`.
fn run_on_worker(name: String, cfg: &RunConfig, load: impl FnOnce() -> Result<Problem, String> + Send) -> RunResult {
    let start = Instant::now();
    let deadline = cfg.timeout.map(|t| start + t);
    let joined = std::thread::scope(|s| {
        let worker = std::thread::Builder::new().stack_size(WORKER_STACK).spawn_scoped(s, || {
            let problem = load()?;
            let goal = prepare_goal(&problem, cfg.backend)?;
            Ok::<_, String>((problem.name.clone(), prove(&goal, cfg, deadline)))
        });
        match worker {
            Ok(handle) => handle.join().map_err(|panic| {
                let msg = panic
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| panic.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "engine panicked".to_string());
                format!("engine panicked: {msg}")
            }),
            Err(e) => Err(format!("cannot start worker thread: {e}")),
        }
    });
    let elapsed = start.elapsed();
    let (problem, mut outcome) = match joined {
        Ok(Ok((problem, outcome))) => (problem, outcome),
        Ok(Err(msg)) | Err(msg) => (name, error(msg)),
    };
    // An answer that arrives after the limit does not count.
    if outcome.status != Status::Error && cfg.timeout.is_some_and(|t| elapsed > t) {
        outcome = Outcome { status: Status::Timeout, proof_size: None, ..outcome };
    }
    RunResult {
        problem,
        backend: cfg.backend,
        status: outcome.status,
        seconds: elapsed.as_secs_f64(),
        rounds: outcome.rounds,
        proof_size: outcome.proof_size,
        message: outcome.message,
    }
}

fn parse_options(cfg: &RunConfig) -> ParseOptions {
    ParseOptions { axiom_root: cfg.axiom_root.clone() }
}

/// Read, prepare and prove one problem file.
pub fn run_problem(path: &Path, cfg: &RunConfig) -> RunResult {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("problem").to_string();
    let options = parse_options(cfg);
    run_on_worker(name, cfg, || read_problem(path, cfg.format, &options).map_err(|e| e.to_string()))
}

/// Prove a problem given as text.
pub fn run_text(name: &str, text: &str, format: Format, cfg: &RunConfig) -> RunResult {
    let options = parse_options(cfg);
    run_on_worker(name.to_string(), cfg, || {
        parse_problem_named(name, text, format, &options, None).map_err(|e| e.to_string())
    })
}

/// Aggregate counts for one backend.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub total: usize,
    pub proved: usize,
    pub proved_within_1s: usize,
    pub proved_1_to_10s: usize,
    pub refuted: usize,
    pub timeout: usize,
    pub gave_up: usize,
    pub error: usize,
}

impl Counts {
    fn add(&mut self, r: &RunResult) {
        self.total += 1;
        match r.status {
            Status::Theorem => {
                self.proved += 1;
                if r.seconds <= 1.0 {
                    self.proved_within_1s += 1;
                } else if r.seconds <= 10.0 {
                    self.proved_1_to_10s += 1;
                }
            }
            Status::NonTheorem => self.refuted += 1,
            Status::Timeout => self.timeout += 1,
            Status::GaveUp => self.gave_up += 1,
            Status::Error => self.error += 1,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    /// Sorted by problem name, then backend.
    pub rows: Vec<RunResult>,
}

impl Report {
    pub fn new(mut rows: Vec<RunResult>) -> Report {
        rows.sort_by(|a, b| a.problem.cmp(&b.problem).then(a.backend.cmp(&b.backend)));
        Report { rows }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn counts(&self) -> BTreeMap<Backend, Counts> {
        let mut out: BTreeMap<Backend, Counts> = BTreeMap::new();
        for r in &self.rows {
            out.entry(r.backend).or_default().add(r);
        }
        out
    }

    pub fn write_csv(&self, out: impl io::Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["problem", "backend", "status", "seconds", "rounds"])?;
        for r in &self.rows {
            w.write_record([
                r.problem.clone(),
                r.backend.to_string(),
                r.status.to_string(),
                format!("{:.3}", r.seconds),
                r.rounds.map(|n| n.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Per-backend summary table.
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<8} {:>6} {:>7} {:>7} {:>7} {:>8} {:>8} {:>7} {:>6}\n",
            "backend", "total", "proved", "0-1s", "1-10s", "refuted", "timeout", "gaveup", "error"
        );
        for (b, c) in self.counts() {
            s += &format!(
                "{:<8} {:>6} {:>7} {:>7} {:>7} {:>8} {:>8} {:>7} {:>6}\n",
                b.name(),
                c.total,
                c.proved,
                c.proved_within_1s,
                c.proved_1_to_10s,
                c.refuted,
                c.timeout,
                c.gave_up,
                c.error
            );
        }
        s
    }
}

/// Problem files below `dir`: every regular file except hidden ones and
/// `.ax` include files, sorted by path.
pub fn problem_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(io::Error::from)?;
        let hidden = entry.file_name().to_str().is_some_and(|n| n.starts_with('.'));
        let is_axiom_file = entry.path().extension().is_some_and(|e| e == "ax");
        if entry.file_type().is_file() && !hidden && !is_axiom_file {
            files.push(entry.into_path());
        }
    }
    Ok(files)
}

/// Run every file in `paths` on up to `jobs` worker slots.
pub fn run_files(paths: &[PathBuf], cfg: &RunConfig, jobs: usize) -> Report {
    let next = AtomicUsize::new(0);
    let rows = Mutex::new(Vec::with_capacity(paths.len()));
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, paths.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = paths.get(i) else { break };
                let r = run_problem(path, cfg);
                rows.lock().unwrap_or_else(|e| e.into_inner()).push(r);
            });
        }
    });
    Report::new(rows.into_inner().unwrap_or_else(|e| e.into_inner()))
}

/// Run all problems below `dir`.
pub fn run_suite(dir: &Path, cfg: &RunConfig, jobs: usize) -> io::Result<Report> {
    Ok(run_files(&problem_files(dir)?, cfg, jobs))
}
