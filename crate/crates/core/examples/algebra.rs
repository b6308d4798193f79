//! Commutator table and adjoint actions of the three-dimensional algebra.

use symlab::lie::{adjoint_action, basis_combination, commutator_table, epsilon, standard_basis, BASIS_NAMES};

fn main() -> symlab::Result<()> {
    let basis = standard_basis();
    let table = commutator_table(&basis, &BASIS_NAMES)?;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let c: Vec<String> = table.entries[i][j].iter().map(|r| r.to_string()).collect();
            println!("[{}, {}] = ({})", BASIS_NAMES[i], BASIS_NAMES[j], c.join(", "));
        }
    }
    let eps = epsilon();
    for (i, gi) in basis.iter().enumerate() {
        for (j, gj) in basis.iter().enumerate() {
            let a = adjoint_action(gi, gj, &eps)?;
            println!("Ad(exp(ε{})) {} = {}", BASIS_NAMES[i], BASIS_NAMES[j], basis_combination(&a.result)?);
        }
    }
    Ok(())
}
