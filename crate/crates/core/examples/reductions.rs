//! Similarity variables and reduced equations of the listed groups.

use symlab::reductions::reduce;
use symlab::symcore::Rational;

fn main() -> symlab::Result<()> {
    let k = Rational::from_integer(2.into());
    for group in ["Xi1", "Xi2", "Xi3", "Xi4", "Xi5", "Xi6", "Xi7"] {
        let slope = (group == "Xi4").then_some(&k);
        match reduce(group, slope) {
            Ok(r) => {
                println!("{group}: η = {}", r.invariant.eta);
                if r.feasible {
                    println!("  order {}: {} = 0", r.order, r.equation);
                } else {
                    println!("  no reduction, leftover {}", r.leftover);
                }
            }
            Err(e) => println!("{group}: {e}"),
        }
    }
    Ok(())
}
