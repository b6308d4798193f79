mod lagrangian;
mod numeric;
mod probe;
mod vector;

pub use lagrangian::{adjoint_equation, variational_derivative, AdjointEquation, FormalLagrangian};
pub(crate) use probe::apply_forced;
pub use probe::{self_adjointness, Constraint, ProbeClass, SelfAdjointnessProbe};
pub use vector::{conserved_vector, divergence_onshell, system_rules, ConservedVector, DivergenceReport, Multipliers};
pub use numeric::{
    convergence_study, numeric_divergence, solve_adjoint, AdjointSolution, ConvergenceStudy, NumericDivergence,
    Rectangle, SOLVE_PADDING,
};
