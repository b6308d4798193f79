use serde::Serialize;

use crate::lie::PDESpec;
use crate::symcore::{expr_text, partial_derivative, total_along, Coord, Expr, Field, Jet};
use crate::{Error, Result};

/// `L = v·H` for the equation `H = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalLagrangian {
    #[serde(rename = "L", with = "expr_text")]
    pub lagrangian: Expr,
}

impl FormalLagrangian {
    pub fn new(pde: &PDESpec) -> Self {
        FormalLagrangian { lagrangian: (Expr::coord(Coord::v()) * pde.residual.clone()).normalize() }
    }

    pub fn chaffee_infante() -> Self {
        Self::new(&PDESpec::chaffee_infante())
    }

    /// `∂L/∂u_J` for the jet `J` of `u`.
    pub fn partial(&self, jet: &str) -> Result<Expr> {
        partial_derivative(&self.lagrangian, &Coord::u_jet(jet))
    }
}

const SECOND_ORDER_JETS: [(u8, u8); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// Euler operator `δ/δw = ∂/∂w − D_i ∂/∂w_i + D_iD_j ∂/∂w_ij` for the field
/// `w` over jets up to second order.
pub fn variational_derivative(l: &Expr, field: Field) -> Result<Expr> {
    if let Some(c) = l.coords().into_iter().find(|c| matches!(c.jet(), Some((f, j)) if f == field && j.order() > 2)) {
        return Err(Error::InvalidArgument(format!("`{c}` is above second order")));
    }
    let mut out = Expr::zero();
    for (t, x) in SECOND_ORDER_JETS {
        let jet = Jet::new(t, x);
        let d = partial_derivative(l, &Coord::Dep(field, jet))?;
        if d.is_literal_zero() {
            continue;
        }
        let term = total_along(&d, jet)?;
        out = if jet.order() % 2 == 1 { out - term } else { out + term };
    }
    Ok(out.normalize())
}

/// `H* = δL/δu`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointEquation {
    #[serde(rename = "Hstar", with = "expr_text")]
    pub hstar: Expr,
}

pub fn adjoint_equation(l: &FormalLagrangian) -> Result<AdjointEquation> {
    Ok(AdjointEquation { hstar: variational_derivative(&l.lagrangian, Field::U)? })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::symcore::strategies::leaf;
    use crate::symcore::{parse, total_derivative, Dir};

    fn p(s: &str) -> Expr {
        parse(s).unwrap().normalize()
    }

    #[test]
    fn single_terms() {
        assert_eq!(variational_derivative(&p("v*u_t"), Field::U).unwrap(), p("-v_t"));
        assert_eq!(variational_derivative(&p("-v*u_xx"), Field::U).unwrap(), p("-v_xx"));
        assert_eq!(variational_derivative(&p("u_x^2/2"), Field::U).unwrap(), p("-u_xx"));
        assert_eq!(variational_derivative(&p("v*u_tx"), Field::U).unwrap(), p("v_tx"));
    }

    #[test]
    fn adjoint_of_the_equation() {
        let l = FormalLagrangian::chaffee_infante();
        assert_eq!(l.lagrangian, p("v*(u_t - u_xx + λ*(u^3 - u))"));
        let a = adjoint_equation(&l).unwrap();
        assert_eq!(a.hstar, p("3*λ*u^2*v - λ*v - v_t - v_xx"));
        // Varying v returns the equation itself.
        assert_eq!(variational_derivative(&l.lagrangian, Field::V).unwrap(), PDESpec::chaffee_infante().residual);
    }

    #[test]
    fn third_order_is_rejected() {
        assert!(variational_derivative(&p("v*u_xxx"), Field::U).is_err());
    }

    /// Products of leaves up to first-order jets, so a total derivative stays
    /// within second order.
    fn first_order_poly() -> impl Strategy<Value = Expr> {
        let leaf = leaf().prop_filter("first-order jets", |e| {
            e.coords().iter().all(|c| c.jet().map_or(true, |(_, j)| j.order() <= 1))
        });
        prop::collection::vec(prop::collection::vec(leaf, 1..4).prop_map(Expr::Mul), 1..4).prop_map(Expr::Add)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn total_divergences_are_annihilated(a in first_order_poly(), b in first_order_poly()) {
            let div = total_derivative(&a, Dir::T).unwrap() + total_derivative(&b, Dir::X).unwrap();
            prop_assert!(variational_derivative(&div, Field::U).unwrap().is_literal_zero());
            prop_assert!(variational_derivative(&div, Field::V).unwrap().is_literal_zero());
        }

        #[test]
        fn euler_operator_is_linear(a in first_order_poly(), b in first_order_poly(), k in -4i64..=4) {
            let lhs = variational_derivative(&(Expr::int(k) * a.clone() + b.clone()), Field::U).unwrap();
            let rhs = Expr::int(k) * variational_derivative(&a, Field::U).unwrap()
                + variational_derivative(&b, Field::U).unwrap();
            prop_assert!((lhs - rhs).normalize().is_literal_zero());
        }
    }
}
