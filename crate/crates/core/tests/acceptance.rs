//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure or budget overrun.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use k3verify_core::families::{self, IrreducibilityConfig, IrreducibilityVerdict};
use k3verify_core::report::{CheckReport, Status};
use k3verify_core::verify::{self, VerifyOptions};

struct Outcome {
    ok: bool,
    details: String,
}

fn from_reports(reports: &[CheckReport], required: &[&str]) -> Outcome {
    let mut bad: Vec<String> = Vec::new();
    for r in reports {
        for c in r.checks.iter().filter(|c| c.status != Status::Pass) {
            bad.push(format!("{} [{}] {}", c.name, c.status.label(), c.details));
        }
    }
    for name in required {
        if !reports.iter().any(|r| r.check(name).is_some()) {
            bad.push(format!("missing check `{name}`"));
        }
    }
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    if bad.is_empty() {
        Outcome { ok: true, details: format!("{total} checks") }
    } else {
        Outcome { ok: false, details: bad.join("; ") }
    }
}

fn run(opts: &VerifyOptions, suite: &str) -> CheckReport {
    verify::run_suite(suite, opts).expect("known suite")
}

fn criterion_1(opts: &VerifyOptions) -> Outcome {
    let symbolic = run(opts, "disc-factor");
    let pit_opts = VerifyOptions { pit: true, trials: 100, ..opts.clone() };
    let start = Instant::now();
    let pit = run(&pit_opts, "disc-factor");
    let pit_time = start.elapsed();
    let mut out = from_reports(
        &[symbolic, pit],
        &["disc(R) = c r^3 d90 (symbolic)", "disc(R) = c r^3 d90 (PIT)"],
    );
    out.details.push_str(&format!("; PIT {} ms", pit_time.as_millis()));
    if pit_time > Duration::from_secs(5) {
        out.ok = false;
        out.details.push_str(" over the 5 s PIT budget");
    }
    out
}

fn criterion_2(opts: &VerifyOptions) -> Outcome {
    from_reports(&[run(opts, "d90-check")], &[])
}

fn criterion_3(opts: &VerifyOptions) -> Outcome {
    let r = run(opts, "lattices");
    let mut out = from_reports(std::slice::from_ref(&r), &[]);
    if r.constants.get("|O(q_A)|").map(String::as_str) != Some("2") {
        out.ok = false;
        out.details.push_str(&format!("; |O(q_A)| = {:?}", r.constants.get("|O(q_A)|")));
    }
    out
}

fn criterion_4(opts: &VerifyOptions) -> Outcome {
    from_reports(&[run(opts, "fibers")], &[])
}

fn criterion_5(opts: &VerifyOptions) -> Outcome {
    from_reports(&[run(opts, "cd")], &[])
}

fn criterion_6(opts: &VerifyOptions) -> Outcome {
    let r = run(opts, "irreducible");
    let mut out = from_reports(std::slice::from_ref(&r), &[]);
    if let Some(c) = r.checks.first() {
        out.details = format!("{}: {}", c.name, c.details);
    }
    if r.checks.iter().any(|c| c.status == Status::Inconclusive) {
        // Enlarged-budget retry for diagnosis only; the criterion stays failed.
        let base = IrreducibilityConfig { seed: opts.seed, ..Default::default() };
        let cfg = IrreducibilityConfig { specializations: 4 * base.specializations, ..base };
        let retry = families::d90_irreducibility_certificate(&cfg, opts.exec);
        let certified = matches!(retry, Ok(IrreducibilityVerdict::CertifiedIrreducible { .. }));
        out.details.push_str(&format!("; retry with {} specializations certified: {certified}", cfg.specializations));
    }
    out
}

fn criterion_7(opts: &VerifyOptions) -> Outcome {
    let r = run(opts, "dims");
    let mut out = from_reports(std::slice::from_ref(&r), &[]);
    if !families::s54_square_identity() {
        out.ok = false;
        out.details.push_str("; weight identities fail");
    }
    out
}

fn criterion_8(_: &VerifyOptions) -> Outcome {
    let failures: Vec<String> = common::PROPERTIES
        .iter()
        .filter_map(|(name, prop)| prop(common::CASES).err().map(|e| format!("{name}: {e}")))
        .collect();
    if failures.is_empty() {
        Outcome { ok: true, details: format!("{} properties x {} cases", common::PROPERTIES.len(), common::CASES) }
    } else {
        Outcome { ok: false, details: failures.join("; ") }
    }
}

type Criterion = (u32, &'static str, u64, fn(&VerifyOptions) -> Outcome);

const CRITERIA: [Criterion; 8] = [
    (1, "discriminant factorization", 600, criterion_1),
    (2, "d90 golden diff", 600, criterion_2),
    (3, "lattice suite", 30, criterion_3),
    (4, "fiber suite", 60, criterion_4),
    (5, "four-parameter family suite", 120, criterion_5),
    (6, "irreducibility certificate", 120, criterion_6),
    (7, "ring bookkeeping", 5, criterion_7),
    (8, "property suites", 60, criterion_8),
];

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--nocapture`; a bare word
    // filters criteria by number.
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let opts = VerifyOptions::default();
    let mut failed = 0;
    let mut shared = Duration::ZERO;
    let mut lines = Vec::new();
    // The fiber suite reuses the cached four-parameter factorization, so
    // criterion 5 runs first to be timed on its own work.
    for idx in [0, 1, 2, 4, 3, 5, 6, 7] {
        let (n, name, budget, f) = CRITERIA[idx];
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let mut out = f(&opts);
        let mut elapsed = start.elapsed();
        // Criterion 2 shares the symbolic discriminant with criterion 1.
        if n == 1 {
            shared = elapsed;
        } else if n == 2 {
            elapsed += shared;
        }
        if elapsed > Duration::from_secs(budget) {
            out.ok = false;
            out.details.push_str(" (over budget)");
        }
        if !out.ok {
            failed += 1;
        }
        let label = if out.ok { "PASS" } else { "FAIL" };
        lines.push((n, format!("criterion {n} {label} {name} [{:.2} s / {budget} s]: {}", elapsed.as_secs_f64(), out.details)));
    }
    lines.sort();
    for (_, line) in lines {
        println!("{line}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
