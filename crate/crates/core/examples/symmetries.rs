//! Invariance residuals of the basis generators and of a non-symmetry.

use symlab::lie::{invariance_residual, PDESpec, VectorField};
use symlab::symcore::parse;

fn main() -> symlab::Result<()> {
    let pde = PDESpec::chaffee_infante();
    let candidates = [
        VectorField::translation_x(),
        VectorField::translation_t(),
        VectorField::scaling(),
        VectorField::new(parse("0")?, parse("0")?, parse("x*t")?)?,
    ];
    for g in &candidates {
        let r = invariance_residual(g, &pde)?;
        println!("{g}");
        println!("  on-shell residual: {}", r.residual_onshell);
        println!("  symmetry: {} ({:?})", r.is_symmetry, r.certificate);
    }
    Ok(())
}
