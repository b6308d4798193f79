//! Reduces a few elements to the canonical one-dimensional subalgebras.

use symlab::lie::{canonical_set, optimal_representative, AlgebraElement};

fn main() -> symlab::Result<()> {
    let set: Vec<String> = canonical_set().iter().map(|c| c.to_string()).collect();
    println!("canonical set: {}", set.join(", "));
    for text in ["G1 + G3", "3*G1 - 2*G2", "G2/2 - 4*G3", "5*G1"] {
        let v: AlgebraElement = text.parse()?;
        let r = optimal_representative(&v)?;
        println!("{v}  ->  {}  via {} moves", r.representative, r.word.len());
    }
    Ok(())
}
