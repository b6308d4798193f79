use serde::Serialize;

use super::lagrangian::{adjoint_equation, FormalLagrangian};
use crate::lie::{onshell_reduce, OnShellRule, PDESpec, VectorField};
use crate::symcore::{
    expr_text, is_zero, partial_derivative, rat, substitute_one, total_derivative, Atom, Certificate,
    Coord, Dir, Expr, Field, Rational,
};
use crate::{Error, Result};

/// A flux pair `(T^t, T^x)` with the characteristic it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConservedVector {
    pub generator: String,
    #[serde(with = "expr_text")]
    pub w: Expr,
    #[serde(rename = "Tt", with = "expr_text")]
    pub tt: Expr,
    #[serde(rename = "Tx", with = "expr_text")]
    pub tx: Expr,
}

impl ConservedVector {
    /// A hand-written pair, e.g. for negative controls.
    pub fn custom(name: &str, tt: Expr, tx: Expr) -> Self {
        ConservedVector { generator: name.into(), w: Expr::zero(), tt: tt.normalize(), tx: tx.normalize() }
    }
}

/// `T^i = ξ^i L + w(∂L/∂u_i − D_j ∂L/∂u_ij) + D_j(w) ∂L/∂u_ij` with
/// `w = χ − ψ u_t − ω u_x`. The mixed jet counts half for each order of
/// differentiation.
pub fn conserved_vector(g: &VectorField, l: &FormalLagrangian) -> Result<ConservedVector> {
    let ut = Expr::coord(Coord::u_jet("t"));
    let ux = Expr::coord(Coord::u_jet("x"));
    let w = (g.chi.clone() - g.psi.clone() * ut - g.omega.clone() * ux).normalize();
    let lag = &l.lagrangian;
    let d = |jet: &str| partial_derivative(lag, &Coord::u_jet(jet));
    let second = |i: Dir, j: Dir| -> Result<Expr> {
        Ok(match (i, j) {
            (Dir::T, Dir::T) => d("tt")?,
            (Dir::X, Dir::X) => d("xx")?,
            _ => Expr::num(rat(1, 2)) * d("tx")?,
        })
    };
    let mut out = Vec::new();
    for (i, xi, first) in [(Dir::T, &g.psi, d("t")?), (Dir::X, &g.omega, d("x")?)] {
        let mut bracket = first;
        let mut tail = Expr::zero();
        for j in [Dir::T, Dir::X] {
            let s = second(i, j)?;
            bracket = bracket - total_derivative(&s, j)?;
            tail = tail + total_derivative(&w, j)? * s;
        }
        out.push((xi.clone() * lag.clone() + w.clone() * bracket + tail).normalize());
    }
    let tx = out.pop().expect("two components");
    let tt = out.pop().expect("two components");
    Ok(ConservedVector { generator: g.to_string(), w, tt, tx })
}

/// The equation and its adjoint as rewrite rules for `u_t` and `v_t`.
pub fn system_rules() -> Result<[OnShellRule; 2]> {
    let pde = PDESpec::chaffee_infante();
    let hstar = adjoint_equation(&FormalLagrangian::new(&pde))?.hstar;
    let vt = Coord::v_jet("t");
    let slope = partial_derivative(&hstar, &vt)?
        .as_rational()
        .filter(|r| *r != Rational::from_integer(0.into()))
        .ok_or_else(|| Error::InvalidArgument("adjoint equation is not solved by v_t".into()))?;
    let rest = substitute_one(&hstar, vt, Expr::zero());
    let v_rhs = -rest * Expr::num(slope.recip());
    Ok([pde.rule.clone(), OnShellRule::new(Field::V, v_rhs)])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub generator: String,
    #[serde(with = "expr_text")]
    pub divergence: Expr,
    /// After eliminating `u_t` by the equation and then `v_t` by its adjoint.
    #[serde(with = "expr_text")]
    pub remainder: Expr,
    pub conserved: bool,
    pub certificate: Certificate,
    /// `(Λ₁, Λ₂)` with `D_tT^t + D_xT^x = Λ₁H + Λ₂H*`, when found.
    pub multipliers: Option<Multipliers>,
    /// Eliminating `v_t` first gives the same remainder.
    pub order_independent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Multipliers {
    #[serde(rename = "H", with = "expr_text")]
    pub on_equation: Expr,
    #[serde(rename = "Hstar", with = "expr_text")]
    pub on_adjoint: Expr,
}

/// Synthetic division of `q` by `H = u_t − R` in the variable `u_t`.
fn divide_by_equation(q: &Expr, rhs: &Expr) -> Result<Option<Expr>> {
    let ut = Coord::u_jet("t");
    let other_t_jets = q.coords().into_iter().any(|c| match c.jet() {
        Some((Field::U, j)) => j.t > 0 && c != ut,
        _ => false,
    });
    if other_t_jets {
        return Ok(None);
    }
    let atom = Atom::Coord(ut.clone());
    let parts = q.to_poly().split_by(|a| *a == atom);
    let degree = parts.keys().map(|m| m.exponent(&atom)).max().unwrap_or(0);
    if degree < 1 || parts.keys().any(|m| m.exponent(&atom) < 0) {
        return Ok(None);
    }
    let coeff = |k: i32| {
        parts
            .iter()
            .find(|(m, _)| m.exponent(&atom) == k)
            .map(|(_, p)| Expr::from_poly(p))
            .unwrap_or_else(Expr::zero)
    };
    let ut_e = Expr::coord(ut);
    // q = Σ q_k u_tᵏ; quotient b with b_{d−1} = q_d, b_{k−1} = q_k + R b_k.
    let mut b = coeff(degree);
    let mut quotient = b.clone() * ut_e.powi(degree - 1);
    for k in (1..degree).rev() {
        b = (coeff(k) + rhs.clone() * b).normalize();
        quotient = quotient + b.clone() * ut_e.powi(k - 1);
    }
    let remainder = (coeff(0) + rhs.clone() * b).normalize();
    Ok(is_zero(&remainder)?.zero.then(|| quotient.normalize()))
}

/// `D_tT^t + D_xT^x`, reduced on solutions of the equation and its adjoint.
pub fn divergence_onshell(t: &ConservedVector) -> Result<DivergenceReport> {
    let div = (total_derivative(&t.tt, Dir::T)? + total_derivative(&t.tx, Dir::X)?).normalize();
    let [u_rule, v_rule] = system_rules()?;
    let remainder = onshell_reduce(&div, &[u_rule.clone(), v_rule.clone()])?;
    let swapped = onshell_reduce(&div, &[v_rule.clone(), u_rule.clone()])?;
    let verdict = is_zero(&remainder)?;
    let order_independent = is_zero(&(remainder.clone() - swapped))?.zero;

    let pde = PDESpec::chaffee_infante();
    let hstar = adjoint_equation(&FormalLagrangian::new(&pde))?.hstar;
    let on_adjoint = (-t.w.clone()).normalize();
    let q = (div.clone() - on_adjoint.clone() * hstar).normalize();
    let multipliers = if t.w.is_literal_zero() {
        None
    } else {
        divide_by_equation(&q, &u_rule.rhs)?.map(|on_equation| Multipliers { on_equation, on_adjoint })
    };
    Ok(DivergenceReport {
        generator: t.generator.clone(),
        divergence: div,
        remainder,
        conserved: verdict.zero,
        certificate: verdict.certificate,
        multipliers,
        order_independent,
    })
}
