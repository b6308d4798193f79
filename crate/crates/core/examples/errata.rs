//! Printed claims next to recomputed values.

use symlab::errata::errata_report;

fn main() -> symlab::Result<()> {
    let report = errata_report()?;
    for e in &report.entries {
        println!("[{}] {}", e.verdict, e.id);
        println!("  printed:  {}", e.printed);
        println!("  computed: {}", e.computed);
    }
    println!("{} of {} entries differ", report.differing, report.entries.len());
    Ok(())
}
