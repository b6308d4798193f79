use std::collections::BTreeMap;

use super::coord::Coord;
use super::expr::Expr;
use super::poly::{Atom, Poly};
use crate::{Error, Result};

pub type Bindings = BTreeMap<Coord, Expr>;

pub(crate) fn poly_subst(p: &Poly, map: &BTreeMap<Coord, Poly>) -> Poly {
    if map.is_empty() {
        return p.clone();
    }
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut term = Poly::constant(c.clone());
        for (a, e) in m.factors() {
            let base = match a {
                Atom::Coord(coord) => match map.get(coord) {
                    Some(rhs) => rhs.clone(),
                    None => Poly::coord(coord.clone()),
                },
                Atom::Apply(f, arg) => Poly::apply(f.clone(), poly_subst(arg, map)),
                Atom::Recip(inner) => poly_subst(inner, map).invert(),
            };
            term = term.mul(&base.pow(*e));
        }
        out = out.add(&term);
    }
    out
}

/// Simultaneous substitution followed by normalisation.
///
/// A right-hand side that mentions another bound coordinate is resolved
/// through that binding; a chain that returns to its start is an error.
/// Self-reference such as `x → 2x` is ordinary simultaneous substitution.
/// Derivatives of a bound coordinate are not rewritten.
pub fn substitute(e: &Expr, bindings: &Bindings) -> Result<Expr> {
    Ok(Expr::from_poly(&substitute_poly(&e.to_poly(), bindings)?))
}

pub(crate) fn substitute_poly(p: &Poly, bindings: &Bindings) -> Result<Poly> {
    let raw: BTreeMap<Coord, Poly> =
        bindings.iter().map(|(c, rhs)| (c.clone(), rhs.to_poly())).collect();
    let mut resolved = BTreeMap::new();
    for target in raw.keys() {
        resolve(target, &raw, &mut resolved, &mut Vec::new())?;
    }
    Ok(poly_subst(p, &resolved))
}

/// Resolves the binding of `target` through the other bindings, depth first.
fn resolve(
    target: &Coord,
    raw: &BTreeMap<Coord, Poly>,
    resolved: &mut BTreeMap<Coord, Poly>,
    stack: &mut Vec<Coord>,
) -> Result<Poly> {
    if let Some(done) = resolved.get(target) {
        return Ok(done.clone());
    }
    if stack.contains(target) {
        return Err(Error::CyclicBinding(target.to_string()));
    }
    stack.push(target.clone());
    let rhs = &raw[target];
    let mut inner = BTreeMap::new();
    for c in rhs.coords() {
        if c != *target && raw.contains_key(&c) {
            let r = resolve(&c, raw, resolved, stack)?;
            inner.insert(c, r);
        }
    }
    stack.pop();
    let out = poly_subst(rhs, &inner);
    resolved.insert(target.clone(), out.clone());
    Ok(out)
}

/// Substitution with a single binding.
pub fn substitute_one(e: &Expr, c: Coord, rhs: Expr) -> Expr {
    let map = BTreeMap::from([(c, rhs.to_poly())]);
    Expr::from_poly(&poly_subst(&e.to_poly(), &map))
}
