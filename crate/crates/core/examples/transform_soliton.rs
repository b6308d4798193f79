//! Moves the tanh front by the listed group actions and reports residuals.

use symlab::groups::{residual_sweep, soliton, transform_solution, GroupAction, Grid};

fn main() -> symlab::Result<()> {
    let grid: Grid = "-2:2:41".parse()?;
    let u = soliton(2.0)?;
    println!("front: max residual {:.3e}", residual_sweep(&u, &grid)?.max_residual);
    for index in 1..=3 {
        let action = GroupAction::xi(index)?;
        for eps in [0.3, 1.0] {
            let moved = transform_solution(&action, eps, &u)?;
            let sweep = residual_sweep(&moved, &grid)?;
            println!("Xi{index}, ε = {eps}: max residual {:.3e}", sweep.max_residual);
        }
    }
    Ok(())
}
