//! Runs the bundled problem corpus through every backend.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use hatprove::bench::{run_suite, Backend, Report, RunConfig, Status};

/// Problems that are not valid in HT; everything else in the corpus is.
const HT_NON_THEOREMS: [&str; 6] =
    ["SYN387+1", "classical_contraposition", "double_negation", "neg_or_neg", "peirce", "quantifier_swap"];

fn corpus(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(sub)
}

fn run(sub: &str, backend: Backend, secs: u64) -> Report {
    let cfg = RunConfig { backend, timeout: Some(Duration::from_secs(secs)), ..RunConfig::default() };
    run_suite(&corpus(sub), &cfg, 4).unwrap()
}

fn statuses(report: &Report) -> BTreeMap<String, Status> {
    report.rows.iter().map(|r| (r.problem.clone(), r.status)).collect()
}

#[test]
fn lht_decides_the_whole_corpus() {
    let mut all = statuses(&run("showcase", Backend::Lht, 10));
    all.extend(statuses(&run("syn", Backend::Lht, 10)));
    assert_eq!(all.len(), 30);
    for (name, status) in &all {
        let expected = if HT_NON_THEOREMS.contains(&name.as_str()) { Status::NonTheorem } else { Status::Theorem };
        assert_eq!(*status, expected, "{name}");
    }
}

#[test]
fn showcase_corpus_counts() {
    let lht = run("showcase", Backend::Lht, 10);
    let c = &lht.counts()[&Backend::Lht];
    assert_eq!((c.total, c.proved, c.refuted), (8, 5, 3));

    // The axiom embedding is incomplete for exists_antecedent, so conn-ht
    // only has to find the other four theorems.
    let conn = run("showcase", Backend::ConnHt, 3);
    let proved: Vec<&str> =
        conn.rows.iter().filter(|r| r.status == Status::Theorem).map(|r| r.problem.as_str()).collect();
    for name in ["SYN416+1", "SYN048+1", "weak_lem", "idempotent_or"] {
        assert!(proved.contains(&name), "conn-ht missed {name}");
    }
    assert_eq!(conn.counts()[&Backend::ConnHt].refuted, 0);
}

#[test]
fn every_backend_is_sound_on_the_corpus() {
    for backend in Backend::ALL {
        for sub in ["showcase", "syn"] {
            let report = run(sub, backend, 3);
            for r in &report.rows {
                assert_ne!(r.status, Status::Error, "{backend} {}: {:?}", r.problem, r.message);
                if r.status == Status::Theorem {
                    assert!(!HT_NON_THEOREMS.contains(&r.problem.as_str()), "{backend} proved {}", r.problem);
                }
                // Refutations by the intuitionistic backends say nothing about HT.
                if r.status == Status::NonTheorem && backend.embeds() {
                    assert!(HT_NON_THEOREMS.contains(&r.problem.as_str()), "{backend} refuted {}", r.problem);
                }
            }
        }
    }
}
