//! Lie point symmetries, symmetry reductions and conservation laws for the
//! Chaffee–Infante equation `u_t − u_xx + λ(u³ − u) = 0`.

mod error;

pub mod conslaw;
pub mod cli;
pub mod errata;
pub mod groups;
pub mod lie;
pub mod reductions;
pub mod selftest;
pub mod symcore;

pub use error::{Error, Result};
