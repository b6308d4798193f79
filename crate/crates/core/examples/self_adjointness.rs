//! Strict, quasi and nonlinear self-adjointness probes.

use symlab::conslaw::{self_adjointness, ProbeClass};

fn main() -> symlab::Result<()> {
    for class in [ProbeClass::Strict, ProbeClass::Quasi, ProbeClass::Nonlinear] {
        let p = self_adjointness(class)?;
        println!("{class}: holds = {}", p.holds);
        println!("  obstruction {}", p.obstruction);
        if !p.forced_zero.is_empty() {
            println!("  forced: {}", p.forced_zero.join(", "));
        }
    }
    Ok(())
}
