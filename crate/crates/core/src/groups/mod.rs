//! One-parameter groups of the equation, their closed-form flows, and the
//! transport of known solutions along them.

mod action;
mod solution;

pub use action::{apply_action, catalogue, epsilon_coord, ActionId, GroupAction};
pub use solution::{
    grid_values, residual_sweep, soliton, soliton_expr, transform_solution, Grid, GridPoint,
    ResidualSweep, SolutionFn,
};
