use std::collections::BTreeSet;

use super::coord::{Base, Coord, Dir, Field, Jet, JET_ORDER_MAX};
use super::expr::{Expr, Func};
use super::poly::{Atom, Monomial, Poly};
use super::expr::{int, rat};
use crate::{Error, Result};

fn atom_partial(a: &Atom, c: &Coord) -> Result<Poly> {
    match a {
        Atom::Coord(b) if b == c => Ok(Poly::one()),
        Atom::Coord(Coord::Func(sym)) => {
            let derived = Base::of_coord(c).and_then(|base| sym.differentiate(base));
            Ok(derived.map(|s| Poly::coord(Coord::Func(s))).unwrap_or_default())
        }
        Atom::Coord(_) => Ok(Poly::zero()),
        Atom::Apply(f, arg) => {
            let inner = poly_partial(arg, c)?;
            if inner.is_zero() {
                return Ok(Poly::zero());
            }
            let outer = match f {
                Func::Tanh => Poly::one().sub(&Poly::apply(Func::Tanh, (**arg).clone()).pow(2)),
                Func::Exp => Poly::apply(Func::Exp, (**arg).clone()),
                Func::Sqrt => Poly::apply(Func::Sqrt, (**arg).clone())
                    .pow(-1)
                    .scale(&rat(1, 2)),
                Func::Sech => Poly::apply(Func::Sech, (**arg).clone())
                    .mul(&Poly::apply(Func::Tanh, (**arg).clone()))
                    .neg(),
                Func::Opaque(name) => return Err(Error::RuleMissing(name.clone())),
            };
            Ok(outer.mul(&inner))
        }
        Atom::Recip(p) => {
            let inner = poly_partial(p, c)?;
            if inner.is_zero() {
                return Ok(Poly::zero());
            }
            Ok(Poly::atom(a.clone(), 2).mul(&inner).neg())
        }
    }
}

/// ∂p/∂c with every other coordinate held fixed. Arbitrary function symbols
/// follow their declared dependencies.
pub fn poly_partial(p: &Poly, c: &Coord) -> Result<Poly> {
    let mut out = Poly::zero();
    for (m, coeff) in p.terms() {
        for (a, e) in m.factors() {
            let da = atom_partial(a, c)?;
            if da.is_zero() {
                continue;
            }
            let rest = m.without(a).mul(&Monomial::atom(a.clone(), e - 1));
            out = out.add(&da.mul_monomial(&rest, &(coeff * int(*e as i64))));
        }
    }
    Ok(out)
}

pub fn partial_derivative(e: &Expr, c: &Coord) -> Result<Expr> {
    Ok(Expr::from_poly(&poly_partial(&e.to_poly(), c)?))
}

/// Dependent-variable coordinates whose chain-rule terms a total derivative
/// of `p` needs: every jet present plus the bases `u` and `v`.
fn chain_coords(p: &Poly) -> BTreeSet<(Field, Jet)> {
    let mut out: BTreeSet<(Field, Jet)> = p.coords().iter().filter_map(Coord::jet).collect();
    out.insert((Field::U, Jet::ZERO));
    out.insert((Field::V, Jet::ZERO));
    out
}

pub fn poly_total(p: &Poly, dir: Dir) -> Result<Poly> {
    let mut out = poly_partial(p, &dir.coord())?;
    for (field, jet) in chain_coords(p) {
        let d = poly_partial(p, &Coord::Dep(field, jet))?;
        if d.is_zero() {
            continue;
        }
        let next = jet.bump(dir);
        if next.order() > JET_ORDER_MAX {
            return Err(Error::Capacity {
                coord: Coord::Dep(field, next).to_string(),
                order: next.order(),
                bound: JET_ORDER_MAX,
            });
        }
        out = out.add(&d.mul(&Poly::coord(Coord::Dep(field, next))));
    }
    Ok(out)
}

/// Total derivative D_x or D_t over the jet universe, including the adjoint
/// variable's jets. Reduced-ODE symbols and named constants are inert.
pub fn total_derivative(e: &Expr, dir: Dir) -> Result<Expr> {
    Ok(Expr::from_poly(&poly_total(&e.to_poly(), dir)?))
}

/// Applies a sequence of total derivatives.
pub fn total_derivatives(e: &Expr, dirs: &[Dir]) -> Result<Expr> {
    let mut p = e.to_poly();
    for d in dirs {
        p = poly_total(&p, *d)?;
    }
    Ok(Expr::from_poly(&p))
}

/// Total derivative along a jet multi-index.
pub fn total_along(e: &Expr, jet: Jet) -> Result<Expr> {
    let mut dirs = vec![Dir::T; jet.t as usize];
    dirs.extend(std::iter::repeat(Dir::X).take(jet.x as usize));
    total_derivatives(e, &dirs)
}
