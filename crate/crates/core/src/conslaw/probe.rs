use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::lagrangian::{adjoint_equation, FormalLagrangian};
use crate::lie::{jet_coefficient, split_by_jet_monomials, PDESpec};
use crate::symcore::{
    expr_text, parse, partial_derivative, substitute, substitute_one, total_along, Atom, Bindings,
    Coord, Expr, Field, FuncSym, Jet, Rational,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeClass {
    /// `v = u`.
    Strict,
    /// `v = h(u)`.
    Quasi,
    /// `v = h(t, x, u)`.
    Nonlinear,
}

impl ProbeClass {
    pub const ALL: [ProbeClass; 3] = [ProbeClass::Strict, ProbeClass::Quasi, ProbeClass::Nonlinear];

    fn substitution(self) -> Expr {
        let text = match self {
            ProbeClass::Strict => "u",
            ProbeClass::Quasi => "h{u}",
            ProbeClass::Nonlinear => "h{t,x,u}",
        };
        parse(text).expect("static expression")
    }
}

impl fmt::Display for ProbeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeClass::Strict => "strict",
            ProbeClass::Quasi => "quasi",
            ProbeClass::Nonlinear => "nonlinear",
        })
    }
}

impl FromStr for ProbeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProbeClass::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown probe class `{s}`")))
    }
}

/// One coefficient of a jet monomial that has to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    #[serde(with = "expr_text")]
    pub monomial: Expr,
    #[serde(with = "expr_text")]
    pub coefficient: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfAdjointnessProbe {
    pub class: ProbeClass,
    #[serde(with = "expr_text")]
    pub substitution: Expr,
    /// `H*` with `v` replaced.
    #[serde(with = "expr_text")]
    pub hstar: Expr,
    /// Coefficients of `−H* + ΛH` with Λ left free.
    pub conditions: Vec<Constraint>,
    /// Λ solved from the `u_t` condition.
    #[serde(with = "expr_text")]
    pub multiplier: Expr,
    /// `−H* + ΛH` at that Λ; zero exactly when the probe holds.
    #[serde(with = "expr_text")]
    pub obstruction: Expr,
    pub constraints: Vec<Constraint>,
    /// Function symbols the constraints force to vanish, in order.
    pub forced_zero: Vec<String>,
    pub holds: bool,
    /// Set when the only admissible substitution is `v = 0`.
    pub trivial_only: bool,
}

fn multiplier_symbol() -> Coord {
    Coord::constant("Λ")
}

fn split(e: &Expr) -> Result<Vec<Constraint>> {
    Ok(split_by_jet_monomials(e)?
        .into_iter()
        .filter(|(_, c)| !c.is_literal_zero())
        .map(|(monomial, coefficient)| Constraint { monomial, coefficient })
        .collect())
}

/// Zeroes every derivative of a forced symbol, including itself.
pub(crate) fn apply_forced(e: &Expr, forced: &[FuncSym]) -> Expr {
    let mut out = e.clone();
    for c in e.coords() {
        let Coord::Func(sym) = &c else { continue };
        let hit = forced.iter().any(|f| {
            f.name == sym.name && f.args == sym.args && (0..3).all(|i| sym.derivs[i] >= f.derivs[i])
        });
        if hit {
            out = substitute_one(&out, c.clone(), Expr::zero());
        }
    }
    out.normalize()
}

/// A single-term coefficient `c·F·(coordinates)` forces the one function
/// symbol `F` in it to vanish.
fn forced_by(e: &Expr) -> Option<FuncSym> {
    let p = e.to_poly();
    let mut terms = p.terms();
    let (m, _) = terms.next()?;
    if terms.next().is_some() {
        return None;
    }
    let funcs: Vec<&FuncSym> = m
        .factors()
        .iter()
        .filter_map(|(a, _)| match a {
            Atom::Coord(Coord::Func(s)) => Some(s),
            _ => None,
        })
        .collect();
    match funcs.as_slice() {
        [only] => Some((*only).clone()),
        _ => None,
    }
}

/// Propagates single-term constraints. Once every `u`-derivative of the
/// multiplier function is zero, the remaining coefficients also split by
/// powers of `u`.
fn propagate(constraints: &[Constraint]) -> Vec<FuncSym> {
    let mut forced: Vec<FuncSym> = Vec::new();
    let mut pending: Vec<Expr> = constraints.iter().map(|c| c.coefficient.clone()).collect();
    let mut split_in_u = false;
    loop {
        pending = pending.iter().map(|e| apply_forced(e, &forced)).filter(|e| !e.is_literal_zero()).collect();
        if let Some(f) = pending.iter().find_map(forced_by) {
            forced.push(f);
            continue;
        }
        let u_free = forced.iter().any(|f| f.derivs == [0, 0, 1]);
        if u_free && !split_in_u {
            split_in_u = true;
            let u = Atom::Coord(Coord::u());
            pending = pending
                .iter()
                .flat_map(|e| e.to_poly().split_by(|a| *a == u).into_values().map(|p| Expr::from_poly(&p)))
                .collect();
            continue;
        }
        return forced;
    }
}

/// Tests whether `v = u`, `v = h(u)` or `v = h(t, x, u)` turns the adjoint
/// equation into a multiple of the equation.
pub fn self_adjointness(class: ProbeClass) -> Result<SelfAdjointnessProbe> {
    let pde = PDESpec::chaffee_infante();
    let hstar = adjoint_equation(&FormalLagrangian::new(&pde))?.hstar;
    let v = class.substitution();
    let mut b = Bindings::new();
    for (t, x) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        let jet = Jet::new(t, x);
        b.insert(Coord::Dep(Field::V, jet), total_along(&v, jet)?);
    }
    let s = substitute(&hstar, &b)?.normalize();

    let lam = Expr::coord(multiplier_symbol());
    let free = (-s.clone() + lam * pde.residual.clone()).normalize();
    let conditions = split(&free)?;
    let ut = jet_coefficient(&split_by_jet_monomials(&free)?, &Expr::coord(Coord::u_jet("t")));
    let slope = partial_derivative(&ut, &multiplier_symbol())?;
    let Some(slope) = slope.as_rational().filter(|r| *r != Rational::from_integer(0.into())) else {
        return Err(Error::InvalidArgument(format!("u_t condition `{ut}` does not fix Λ")));
    };
    let offset = substitute_one(&ut, multiplier_symbol(), Expr::zero());
    let multiplier = (-offset * Expr::num(slope.recip())).normalize();
    let obstruction = substitute_one(&free, multiplier_symbol(), multiplier.clone()).normalize();
    let constraints = split(&obstruction)?;
    let forced = propagate(&constraints);
    let trivial_only = forced.iter().any(|f| f.derivs == [0, 0, 0]);
    Ok(SelfAdjointnessProbe {
        class,
        substitution: v,
        hstar: s,
        conditions,
        multiplier,
        holds: obstruction.is_literal_zero(),
        obstruction,
        constraints,
        forced_zero: forced.iter().map(|f| format!("{} = 0", Coord::Func(f.clone()))).collect(),
        trivial_only,
    })
}
