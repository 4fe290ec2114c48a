//! Quick corpus runner: `corpus_probe [count] [f64] [seed] [tol]`.

use ginv_core::suites::{self, CorpusBackend, SuiteConfig, SuiteKind};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let count: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let backend = if args.get(2).map(|s| s == "f64").unwrap_or(false) {
        let tol: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1e-8);
        ginv_core::scalar::set_float_tolerance(tol);
        CorpusBackend::Float
    } else {
        CorpusBackend::Exact
    };
    let mut cfg = SuiteConfig::default();
    if let Some(seed) = args.get(3).and_then(|s| s.parse().ok()) {
        cfg.seed = seed;
    }
    let t0 = std::time::Instant::now();
    let report = suites::run_corpus("all", &SuiteKind::ALL, backend, &cfg, count, true);
    println!(
        "{} instances in {:?}: pass {} fail {} skipped {}",
        count,
        t0.elapsed(),
        report.summary.pass,
        report.summary.fail,
        report.summary.skipped
    );
    for inst in &report.instances {
        for e in &inst.entries {
            if e.status == ginv_core::report::PropertyStatus::Fail {
                println!(
                    "FAIL instance {:?} n={} {}: {:?}",
                    inst.descriptor.instance, inst.descriptor.n, e.id, e.witness
                );
            }
        }
    }
}
