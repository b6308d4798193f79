//! Conserved vectors of the translations, their on-shell divergence and a
//! finite-difference convergence study along the tanh front.

use symlab::conslaw::{conserved_vector, convergence_study, divergence_onshell, FormalLagrangian, Rectangle};
use symlab::groups::soliton;
use symlab::lie::VectorField;

fn main() -> symlab::Result<()> {
    let l = FormalLagrangian::chaffee_infante();
    for g in [VectorField::translation_x(), VectorField::translation_t(), VectorField::scaling()] {
        let tv = conserved_vector(&g, &l)?;
        let r = divergence_onshell(&tv)?;
        println!("{g}");
        println!("  T^t = {}", tv.tt);
        println!("  T^x = {}", tv.tx);
        println!("  remainder = {} (conserved: {})", r.remainder, r.conserved);
    }
    let u = soliton(1.0)?;
    let tv = conserved_vector(&VectorField::translation_t(), &l)?;
    let study = convergence_study(&tv, &u, Rectangle::default(), &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0])?;
    for level in &study.levels {
        println!("h = {:<10} max |div| = {:.3e}", level.h, level.max_abs);
    }
    println!("ratios {:?}", study.ratios);
    Ok(())
}
