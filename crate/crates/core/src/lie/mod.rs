//! Point vector fields on (x, t, u): prolongation, invariance checks against
//! the equation, brackets, adjoint actions and optimal-system reduction.

mod algebra;
mod field;
mod optimal;
mod pde;
mod prolong;

pub use algebra::{
    adjoint_action, adjoint_element, basis_combination, combination_field, commutator_table, decompose, epsilon, field_coefficients_at, standard_basis,
    AdjointAction, AlgebraElement, CommutatorTable, SeriesForm, LIE_SERIES_CAP,
};
pub use field::{commutator, jacobi_sum, VectorField};
pub use optimal::{canonical_set, in_translation_family, optimal_representative, replay, Move, OptimalResult};
pub use pde::{
    invariance_residual, jet_coefficient, onshell_reduce, split_by_jet_monomials, InvarianceReport,
    OnShellRule, PDESpec,
};
pub use prolong::{prolong2, ProlongedField};

/// Names of the standard basis elements.
pub const BASIS_NAMES: [&str; 3] = ["G1", "G2", "G3"];
