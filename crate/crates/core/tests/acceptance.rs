//! One line per acceptance criterion, each PASS or FAIL with its runtime.

use std::io::Write;
use std::time::{Duration, Instant};

use vcfan_core::verify::run_claim;

const SEED: u64 = 20240601;

struct Criterion {
    number: u8,
    claims: &'static [&'static str],
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        claims: &["type2-count"],
        limit: Some(Duration::from_secs(5)),
    },
    Criterion {
        number: 2,
        claims: &["variety-isomorphism"],
        limit: None,
    },
    Criterion {
        number: 3,
        claims: &["cohomology-structure", "degree-two-products"],
        limit: Some(Duration::from_secs(30)),
    },
    Criterion {
        number: 4,
        claims: &["annihilator-rank"],
        limit: None,
    },
    Criterion {
        number: 5,
        claims: &["ring-isomorphisms"],
        limit: None,
    },
    Criterion {
        number: 6,
        claims: &["determinant-rigidity"],
        limit: None,
    },
    Criterion {
        number: 7,
        claims: &["projectivity-rule"],
        limit: Some(Duration::from_secs(60)),
    },
    Criterion {
        number: 8,
        claims: &["r-matrix-identities"],
        limit: None,
    },
    Criterion {
        number: 9,
        claims: &["diffeo-labels"],
        limit: None,
    },
];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let mut ok = true;
        let mut details = Vec::new();
        for id in c.claims {
            let r = run_claim(id, SEED).expect("claim is registered");
            ok &= r.passed;
            details.push(format!("{}: {}", r.id, r.details));
        }
        let elapsed = start.elapsed();
        if let Some(limit) = c.limit {
            if elapsed > limit {
                ok = false;
                details.push(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        // Written past the test harness capture so the lines show in every run.
        writeln!(
            std::io::stdout().lock(),
            "criterion {}: {} ({:.2?}) {}",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            details.join("; ")
        )
        .unwrap();
        if !ok {
            failed.push(c.number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
