//! One line per acceptance criterion. A criterion passes when its suites
//! report no failures or skips, at least one check passes, and the run
//! finishes inside its time limit.

use std::time::{Duration, Instant};

use krwlab::report::{Report, Status};
use krwlab::suites::{run_suite, SuiteConfig};

const CRITERIA: &[(u32, &str, &[&str], u64)] = &[
    (1, "winning-set identity", &["winning-set"], 60),
    (2, "thick sets intersect", &["thick-intersection"], 60),
    (3, "projection-count bound", &["projection-bound"], 120),
    (4, "KW connection", &["kw-connection"], 300),
    (5, "obvious-protocol upper bound", &["composition"], 300),
    (6, "graph equality covers", &["graph-eq"], 300),
    (7, "parity formula size", &["parity"], 10),
    (8, "half-duplex reduction", &["reduction"], 600),
    (9, "candidate-transcript invariants", &["candidate"], 300),
    (10, "pair-event implication", &["pair-events"], 600),
    (11, "barrier instance", &["barrier"], 300),
    (12, "vacuity honesty", &["vacuity", "chromatic"], 120),
];

fn verdict(report: &Report, elapsed: Duration, limit: u64) -> (bool, String) {
    let bad: Vec<String> = report
        .checks
        .iter()
        .filter(|c| matches!(c.status, Status::Fail | Status::Skipped))
        .map(|c| format!("{} {}: {}", c.id, c.status, c.detail))
        .collect();
    let in_time = elapsed.as_secs_f64() < limit as f64;
    let ok = bad.is_empty() && report.count(Status::Pass) > 0 && in_time;
    let mut detail = format!(
        "{} checks ({} pass, {} vacuous, {} infeasible) in {:.1}s of {limit}s",
        report.checks.len(),
        report.count(Status::Pass),
        report.count(Status::Vacuous),
        report.count(Status::Infeasible),
        elapsed.as_secs_f64()
    );
    if !bad.is_empty() {
        detail.push_str(&format!("; {}", bad.join("; ")));
    }
    (ok, detail)
}

fn main() {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    for &(n, name, suites, limit) in CRITERIA {
        let start = Instant::now();
        let mut report = Report::new(name);
        for s in suites {
            report.extend(run_suite(s, &cfg).expect("registered suite"));
        }
        let (ok, detail) = verdict(&report, start.elapsed(), limit);
        println!("[{}] {n:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("criteria failed: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", CRITERIA.len());
}
