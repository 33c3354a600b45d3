//! Acceptance criteria, one line each.
//!
//! Run with `cargo test -p starprod-core --test acceptance`; pass criterion
//! numbers after `--` to run a subset. The process fails only on failures
//! that are not listed in `KNOWN_RED`.

use std::process::ExitCode;
use std::time::Instant;

use starprod_core::verify::{run_suite, Report, Suite, VerifyOptions};

/// Gate checks expected to fail, as `(suite, check name)`.
const KNOWN_RED: &[(&str, &str)] = &[
    ("roundtrip", "wigner q"),
    ("roundtrip", "wigner p"),
    ("roundtrip", "wigner qp+pq"),
    ("associativity", "photon-number kernel s=-0.5, n<=8 |alpha|<=3, 5 samples, relative"),
];

const CRITERIA: [(u32, &str, &[Suite]); 10] = [
    (1, "round-trip fidelity", &[Suite::Roundtrip]),
    (2, "Groenewold kernel", &[Suite::Groenewold]),
    (3, "associativity", &[Suite::Associativity]),
    (4, "tomogram laws", &[Suite::TomogramLaws]),
    (5, "Fock closed forms", &[Suite::ClosedForms]),
    (6, "transform chain", &[Suite::Transforms]),
    (7, "Hermite-Laguerre identity", &[Suite::HermiteLaguerre]),
    (8, "dual means", &[Suite::Means]),
    (9, "classical sector", &[Suite::Classical, Suite::KernelRelation]),
    (10, "photon closed-form kernel", &[Suite::PhotonKernel]),
];

fn is_known_red(suite: &str, check: &str) -> bool {
    KNOWN_RED.iter().any(|&(s, c)| s == suite && c == check)
}

fn summarize(reports: &[Report]) -> (String, bool) {
    let mut known = Vec::new();
    let mut unexpected = Vec::new();
    let mut flags = Vec::new();
    let mut worst_margin: f64 = 0.0;
    for r in reports {
        for c in &r.checks {
            if c.pass && c.tolerance > 0.0 && c.kind == starprod_core::verify::CheckKind::Gate {
                worst_margin = worst_margin.max(c.value / c.tolerance);
            }
        }
        for c in r.failed() {
            let item = format!("{}: {:.3e} > {:.1e}", c.name, c.value, c.tolerance);
            if is_known_red(&r.suite, &c.name) {
                known.push(item);
            } else {
                unexpected.push(item);
            }
        }
        flags.extend(r.flags.iter().cloned());
    }
    let mut line = if unexpected.is_empty() && known.is_empty() {
        format!("PASS (largest value/tolerance among passing gates {worst_margin:.2e})")
    } else if unexpected.is_empty() {
        format!("FAIL, known red [{}]", known.join("; "))
    } else {
        let mut s = format!("FAIL [{}]", unexpected.join("; "));
        if !known.is_empty() {
            s.push_str(&format!(", known red [{}]", known.join("; ")));
        }
        s
    };
    if !flags.is_empty() {
        line.push_str(&format!(", flagged [{}]", flags.join("; ")));
    }
    (line, unexpected.is_empty())
}

fn main() -> ExitCode {
    if let Err(e) = starprod_core::init_thread_pool_from_env() {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let opts = VerifyOptions::default();
    let mut ok = true;
    for (n, title, suites) in CRITERIA {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let reports: Result<Vec<Report>, _> = suites.iter().map(|&s| run_suite(s, &opts)).collect();
        let (line, good) = match reports {
            Ok(r) => summarize(&r),
            Err(e) => (format!("FAIL [error: {e}]"), false),
        };
        ok &= good;
        println!("criterion {n:>2} {title}: {line} ({:.1}s)", start.elapsed().as_secs_f64());
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
