//! Reduction to ODEs along group invariants, power-series solutions of the
//! reduced equations and a Runge–Kutta oracle for them.

mod integrate;
mod reduce;
mod series;

pub use integrate::{ode_integrate, Trajectory};
pub use reduce::{invariant_box, invariant_for, reduce, reduce_with, AutonomousOde, Invariant, ReducedOde};
pub use series::{
    series, series_eval, series_first_order, series_second_order, series_traveling, Coefficient,
    SeriesSolution,
};
