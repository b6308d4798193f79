use serde::Serialize;

use super::field::VectorField;
use crate::symcore::{expr_text, partial_derivative, total_derivative, Coord, Dir, Expr, Field, Jet};
use crate::{Error, Result};

/// A point field together with its second-order extension coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProlongedField {
    pub base: VectorField,
    #[serde(with = "expr_text")]
    pub chi_t: Expr,
    #[serde(with = "expr_text")]
    pub chi_x: Expr,
    #[serde(with = "expr_text")]
    pub chi_xx: Expr,
    #[serde(with = "expr_text")]
    pub chi_tt: Expr,
    #[serde(with = "expr_text")]
    pub chi_tx: Expr,
}

fn u(s: &str) -> Expr {
    Expr::coord(Coord::u_jet(s))
}

/// `first − u_a D_d(ψ) − u_b D_d(ω)` for the extension formula.
fn extend(g: &VectorField, first: Expr, dir: Dir, ua: Expr, ub: Expr) -> Result<Expr> {
    let dpsi = total_derivative(&g.psi, dir)?;
    let domega = total_derivative(&g.omega, dir)?;
    Ok((first - ua * dpsi - ub * domega).normalize())
}

pub fn prolong2(g: &VectorField) -> Result<ProlongedField> {
    let (ut, ux) = (u("t"), u("x"));
    let chi_t = extend(g, total_derivative(&g.chi, Dir::T)?, Dir::T, ut.clone(), ux.clone())?;
    let chi_x = extend(g, total_derivative(&g.chi, Dir::X)?, Dir::X, ut, ux)?;
    let chi_tt = extend(g, total_derivative(&chi_t, Dir::T)?, Dir::T, u("tt"), u("tx"))?;
    let chi_xx = extend(g, total_derivative(&chi_x, Dir::X)?, Dir::X, u("tx"), u("xx"))?;
    let chi_tx = extend(g, total_derivative(&chi_t, Dir::X)?, Dir::X, u("tt"), u("tx"))?;
    Ok(ProlongedField { base: g.clone(), chi_t, chi_x, chi_xx, chi_tt, chi_tx })
}

impl ProlongedField {
    fn jet_coefficient(&self, j: Jet) -> Option<&Expr> {
        match (j.t, j.x) {
            (1, 0) => Some(&self.chi_t),
            (0, 1) => Some(&self.chi_x),
            (2, 0) => Some(&self.chi_tt),
            (1, 1) => Some(&self.chi_tx),
            (0, 2) => Some(&self.chi_xx),
            _ => None,
        }
    }

    /// Action of the prolonged field on a function of (x, t, u) and the jets
    /// of `u` up to second order.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        let mut out = self.base.apply(f)?;
        for c in f.coords() {
            let Coord::Dep(Field::U, j) = c else { continue };
            if j.order() == 0 {
                continue;
            }
            let coef = self.jet_coefficient(j).ok_or_else(|| {
                Error::InvalidArgument(format!("second prolongation cannot act on `{c}`"))
            })?;
            out = out + coef * partial_derivative(f, &c)?;
        }
        Ok(out.normalize())
    }
}
