use thiserror::Error;

use crate::symcore::Coord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no derivative rule registered for opaque function `{0}`")]
    RuleMissing(String),

    #[error("jet order {order} of `{coord}` exceeds the jet universe bound {bound}")]
    Capacity {
        coord: String,
        order: usize,
        bound: usize,
    },

    #[error("cyclic substitution involving `{0}`")]
    CyclicBinding(String),

    #[error("coordinate `{0}` is unbound")]
    Unbound(Coord),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("expression is not polynomial in jet coordinates: {0}")]
    NotPolynomial(String),

    #[error("invalid vector field: {0}")]
    InvalidField(String),

    #[error("commutator {0} does not close over the basis")]
    NonClosure(String),

    #[error("Lie series did not terminate or stabilise within {0} terms")]
    SeriesCap(usize),

    #[error("zero algebra element has no optimal-system representative")]
    ZeroElement,

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("reduction is infeasible: {0}")]
    Infeasible(String),

    #[error("integration blew up after eta = {last_good}")]
    BlowUp { last_good: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
