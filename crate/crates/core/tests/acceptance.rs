use std::time::Instant;

use phigamma::suites::{run_suite, SuiteConfig, SUITES};

fn criterion(name: &str) -> bool {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let reports = match run_suite(name, &cfg) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL {name}: {e}");
            return false;
        }
    };
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        println!("  {}", r.summary_line());
    }
    let ok = failed.is_empty() && !reports.is_empty();
    let worst = reports.iter().map(|r| r.max_discrepancy_valuation).min().unwrap_or(0);
    println!(
        "{} {name}: {} reports, min digits {worst}, {:.1}s",
        if ok { "PASS" } else { "FAIL" },
        reports.len(),
        start.elapsed().as_secs_f64()
    );
    ok
}

#[test]
fn acceptance() {
    let failed: Vec<_> = SUITES.iter().filter(|s| !criterion(s)).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
