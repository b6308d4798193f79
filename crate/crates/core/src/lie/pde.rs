use std::collections::BTreeMap;

use serde::Serialize;

use super::field::VectorField;
use super::prolong::prolong2;
use crate::symcore::{
    expr_text, is_zero, poly_subst, poly_total, total_along, Atom, Bindings, Certificate, Coord,
    Dir, Expr, Field, Jet, Poly,
};
use crate::{Error, Result};

/// Rewrite rule `field_t = rhs`, extended to every jet with a t-derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnShellRule {
    pub field: Field,
    pub rhs: Expr,
}

const ONSHELL_PASSES: usize = 16;

impl OnShellRule {
    pub fn new(field: Field, rhs: Expr) -> Self {
        OnShellRule { field, rhs: rhs.normalize() }
    }

    /// Replacement for a jet with at least one t-derivative.
    fn replacement(&self, rhs: &Poly, jet: Jet) -> Result<Poly> {
        let mut p = rhs.clone();
        for _ in 1..jet.t {
            p = poly_total(&p, Dir::T)?;
        }
        for _ in 0..jet.x {
            p = poly_total(&p, Dir::X)?;
        }
        Ok(p)
    }
}

/// Eliminates every t-derivative jet of the ruled fields, applying the rules
/// in order and repeating until none is left.
pub fn onshell_reduce(e: &Expr, rules: &[OnShellRule]) -> Result<Expr> {
    Ok(Expr::from_poly(&onshell_reduce_poly(&e.to_poly(), rules)?))
}

pub(crate) fn onshell_reduce_poly(p: &Poly, rules: &[OnShellRule]) -> Result<Poly> {
    let rhs: Vec<Poly> = rules.iter().map(|r| r.rhs.to_poly()).collect();
    let mut p = p.clone();
    for _ in 0..ONSHELL_PASSES {
        let mut changed = false;
        for (rule, rhs) in rules.iter().zip(&rhs) {
            let mut map = BTreeMap::new();
            for c in p.coords() {
                if let Coord::Dep(f, j) = c {
                    if f == rule.field && j.t > 0 {
                        map.insert(c.clone(), rule.replacement(rhs, j)?);
                    }
                }
            }
            if !map.is_empty() {
                p = poly_subst(&p, &map);
                changed = true;
            }
        }
        if !changed {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument("on-shell reduction did not reach a fixed point".into()))
}

/// An evolution equation `ρ = 0` with its on-shell rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDESpec {
    pub residual: Expr,
    pub rule: OnShellRule,
}

impl PDESpec {
    /// `u_t − u_xx + λ(u³ − u) = 0`.
    pub fn chaffee_infante() -> Self {
        let e = |s: &str| crate::symcore::parse(s).expect("static expression");
        PDESpec {
            residual: e("u_t - u_xx + λ*(u^3 - u)").normalize(),
            rule: OnShellRule::new(Field::U, e("u_xx - λ*(u^3 - u)")),
        }
    }

    /// Explicit bindings for `u_t` and its x-derivatives that stay inside
    /// the jet universe.
    pub fn onshell_bindings(&self) -> Result<Bindings> {
        let mut out = Bindings::new();
        for x in 0..=2 {
            let jet = Jet::new(1, x);
            out.insert(Coord::Dep(self.rule.field, jet), total_along(&self.rule.rhs, Jet::new(0, x))?);
        }
        Ok(out)
    }

    pub fn onshell(&self, e: &Expr) -> Result<Expr> {
        onshell_reduce(e, std::slice::from_ref(&self.rule))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub field: String,
    #[serde(with = "expr_text")]
    pub residual_preshell: Expr,
    #[serde(with = "expr_text")]
    pub residual_onshell: Expr,
    pub is_symmetry: bool,
    pub certificate: Certificate,
}

/// `G⁽²⁾ρ` before and after the on-shell substitution.
pub fn invariance_residual(g: &VectorField, pde: &PDESpec) -> Result<InvarianceReport> {
    let pre = prolong2(g)?.apply(&pde.residual)?;
    let on = pde.onshell(&pre)?;
    let verdict = is_zero(&on)?;
    Ok(InvarianceReport {
        field: g.to_string(),
        residual_preshell: pre,
        residual_onshell: on,
        is_symmetry: verdict.zero,
        certificate: verdict.certificate,
    })
}

fn is_u_jet(a: &Atom) -> bool {
    matches!(a, Atom::Coord(Coord::Dep(Field::U, j)) if j.order() > 0)
}

/// Groups an expression by monomials in the jets of `u`. Each coefficient is
/// one determining equation.
pub fn split_by_jet_monomials(e: &Expr) -> Result<Vec<(Expr, Expr)>> {
    let p = e.to_poly();
    for (m, _) in p.terms() {
        for (a, k) in m.factors() {
            let hidden = match a {
                Atom::Apply(_, q) | Atom::Recip(q) => {
                    q.coords().iter().any(|c| matches!(c, Coord::Dep(Field::U, j) if j.order() > 0))
                }
                Atom::Coord(_) => false,
            };
            if hidden || (is_u_jet(a) && *k < 0) {
                return Err(Error::NotPolynomial(e.to_string()));
            }
        }
    }
    Ok(p.split_by(is_u_jet)
        .into_iter()
        .map(|(m, c)| (Expr::from_poly(&Poly::monomial(m, crate::symcore::int(1))), Expr::from_poly(&c)))
        .collect())
}

/// Coefficient of one jet monomial, zero if absent.
pub fn jet_coefficient(split: &[(Expr, Expr)], monomial: &Expr) -> Expr {
    let key = monomial.normalize();
    split
        .iter()
        .find(|(m, _)| *m == key)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Expr::zero)
}
