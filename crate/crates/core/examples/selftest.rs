//! Runs the built-in invariant suite.

fn main() -> symlab::Result<()> {
    let report = symlab::selftest::selftest()?;
    for c in &report.checks {
        println!("[{}] {}: {}", if c.passed { "ok" } else { "FAILED" }, c.name, c.detail);
    }
    println!("seed {}: {} passed, {} failed", report.seed, report.passed, report.failed);
    Ok(())
}
