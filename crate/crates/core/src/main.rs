use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use hatprove::bench::{problem_files, run_files, Backend, RunConfig, RunResult, Status};
use hatprove::embed::axioms_for;
use hatprove::frontend::{read_problem, Format, ParseOptions};
use hatprove::matrix::Matrix;
use hatprove::oracle::{classical_valid_prop, ht_valid_prop};

/// Print a line to stdout; a closed pipe ends the process quietly.
macro_rules! out {
    ($($arg:tt)*) => {
        if let Err(e) = writeln!(io::stdout(), $($arg)*) {
            if e.kind() == io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("hatprove: cannot write output: {e}");
            std::process::exit(1);
        }
    };
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Tptp,
    Native,
}

#[derive(Debug, Parser)]
#[command(name = "hatprove", version, about = "Theorem provers for the logic of here-and-there")]
struct Args {
    /// Prover backend.
    #[arg(long, default_value = "lht", value_parser = |s: &str| s.parse::<Backend>())]
    backend: Backend,
    /// Time limit per problem in seconds; 0 disables it.
    #[arg(long, default_value_t = 10.0)]
    timeout: f64,
    /// Input syntax; guessed from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Directory that TPTP `include` paths are resolved against.
    #[arg(long)]
    axiom_root: Option<PathBuf>,
    /// Also check propositional goals with the brute-force HT oracle.
    #[arg(long)]
    oracle: bool,
    /// Print the HT axiom instances generated for each goal.
    #[arg(long)]
    emit_axioms: bool,
    /// Print the prefixed matrix of each goal (embedded for `*-ht` backends).
    #[arg(long)]
    emit_matrix: bool,
    /// Number of problems run in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Connection prover: switch off the regularity check.
    #[arg(long)]
    no_reg: bool,
    /// Connection prover: skip the restricted-backtracking strategy.
    #[arg(long)]
    no_rb: bool,
    /// Write one CSV row per problem to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Problem files or directories.
    #[arg(required = true)]
    paths: Vec<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if !(args.timeout >= 0.0 && args.timeout.is_finite()) {
        eprintln!("hatprove: invalid timeout {}", args.timeout);
        return ExitCode::from(2);
    }
    let cfg = RunConfig {
        backend: args.backend,
        timeout: (args.timeout > 0.0).then(|| Duration::from_secs_f64(args.timeout)),
        format: args.format.map(|f| match f {
            FormatArg::Tptp => Format::Tptp,
            FormatArg::Native => Format::Native,
        }),
        axiom_root: args.axiom_root.clone(),
        regularity: !args.no_reg,
        restricted_backtracking: !args.no_rb,
    };

    let mut files = Vec::new();
    let mut saw_dir = false;
    for path in &args.paths {
        if path.is_dir() {
            saw_dir = true;
            match problem_files(path) {
                Ok(found) => files.extend(found),
                Err(e) => {
                    eprintln!("hatprove: {}: {e}", path.display());
                    return ExitCode::FAILURE;
                }
            }
        } else {
            files.push(path.clone());
        }
    }
    if files.is_empty() {
        eprintln!("hatprove: no problems found");
        return ExitCode::from(3);
    }

    for path in &files {
        if args.oracle || args.emit_axioms || args.emit_matrix {
            inspect(path, &args, &cfg);
        }
    }

    let report = run_files(&files, &cfg, args.jobs);
    for r in &report.rows {
        print_result(r);
    }
    if saw_dir || files.len() > 1 {
        out!("{}", report.table().trim_end());
    }
    if let Some(out) = &args.csv {
        let written = File::create(out).map_err(csv::Error::from).and_then(|f| report.write_csv(f));
        if let Err(e) = written {
            eprintln!("hatprove: cannot write {}: {e}", out.display());
            return ExitCode::FAILURE;
        }
    }
    ExitCode::SUCCESS
}

fn print_result(r: &RunResult) {
    out!("{}", r.szs_line());
    let mut detail = format!("% {} {:.3}s", r.backend, r.seconds);
    if let Some(n) = r.rounds {
        detail += &format!(" rounds={n}");
    }
    if let Some(n) = r.proof_size {
        detail += &format!(" proof_size={n}");
    }
    out!("{detail}");
    if let (Status::Error, Some(msg)) = (r.status, &r.message) {
        out!("% error: {msg}");
    }
}

/// Diagnostics requested by `--oracle`, `--emit-axioms` and `--emit-matrix`.
fn inspect(path: &Path, args: &Args, cfg: &RunConfig) {
    let options = ParseOptions { axiom_root: cfg.axiom_root.clone() };
    let problem = match read_problem(path, cfg.format, &options) {
        Ok(p) => p,
        Err(e) => {
            out!("% {}: {e}", path.display());
            return;
        }
    };
    let plain = match hatprove::bench::prepare_goal(&problem, Backend::Lht) {
        Ok(g) => g,
        Err(e) => {
            out!("% {}: {e}", problem.name);
            return;
        }
    };
    if args.oracle {
        if plain.is_propositional() {
            let ht = match ht_valid_prop(&plain) {
                Ok(()) => "valid".to_string(),
                Err(m) => format!("invalid, countermodel {m}"),
            };
            let classical = if classical_valid_prop(&plain) { "valid" } else { "invalid" };
            out!("% Oracle for {}: HT {ht}; classical {classical}", problem.name);
        } else {
            out!("% Oracle for {}: not propositional", problem.name);
        }
    }
    if args.emit_axioms {
        let axioms = axioms_for(&plain);
        out!("% {} HT axiom instances for {}", axioms.len(), problem.name);
        for a in axioms {
            out!("{a}");
        }
    }
    if args.emit_matrix {
        let goal = if cfg.backend.embeds() { hatprove::embed::embed(&plain) } else { plain };
        match Matrix::build(&goal) {
            Ok(m) => out!("% Matrix for {}\n{m}", problem.name),
            Err(e) => out!("% Matrix for {}: {e}", problem.name),
        }
    }
}
