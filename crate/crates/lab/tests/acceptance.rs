//! Runs every suite criterion at its fixed counts and tolerances with the
//! default seed. One PASS/FAIL line per criterion; run with `--nocapture`
//! to see them.

use std::time::Instant;

use effectus_core::DEFAULT_SEED;
use effectus_lab::suite::CRITERIA;

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in CRITERIA.iter() {
        let t = Instant::now();
        let rep = (c.run)(DEFAULT_SEED);
        let verdict = if rep.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {:<24} max_residual={:.3e} time={:.2?}", c.id, c.name, rep.max_residual(), t.elapsed());
        for chk in rep.checks.iter().filter(|k| !k.passed) {
            println!("     {}: {}", chk.law, chk.witness.as_deref().unwrap_or("-"));
        }
        if !rep.passed() {
            failed.push(c.name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
