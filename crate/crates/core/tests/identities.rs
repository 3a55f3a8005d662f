use curvchern::fixtures;
use curvchern::suites::{run_suite, Suite, SuiteConfig};

fn run(suite: Suite, samples: usize) {
    let cfg = SuiteConfig {
        samples,
        ..SuiteConfig::default()
    };
    let mut failures = Vec::new();
    for (name, input) in fixtures::named() {
        let r = run_suite(&input, suite, &cfg);
        for c in &r.checks {
            eprintln!("{name:>16} {:?} {} {:?}", c.outcome, c.name, c.detail);
        }
        if !r.passed() {
            failures.push(name);
        }
    }
    assert!(failures.is_empty(), "{suite:?} failed on {failures:?}");
}

#[test]
fn algebra_suite() {
    run(Suite::Algebra, 1);
}

#[test]
fn operator_suite() {
    run(Suite::Operators, 20);
}

#[test]
fn lemma_suite() {
    run(Suite::Lemma, 1);
}

#[test]
fn homotopy_suite() {
    run(Suite::Homotopy, 10);
}

#[test]
fn trace_suite() {
    run(Suite::Trace, 10);
}

#[test]
fn cocycle_suite() {
    run(Suite::Cocycle, 1);
}
