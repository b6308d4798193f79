use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::coord::Coord;
use super::poly::{Atom, Monomial, Poly};
use super::Rational;
use crate::{Error, Result};

/// Opaque functions of one argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Func {
    Tanh,
    Exp,
    Sqrt,
    Sech,
    /// A user-named function with no derivative rule and no numeric value.
    Opaque(String),
}

impl Func {
    pub fn name(&self) -> &str {
        match self {
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Sech => "sech",
            Func::Opaque(name) => name,
        }
    }

    pub fn from_name(name: &str) -> Func {
        match name {
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "sech" => Func::Sech,
            other => Func::Opaque(other.to_string()),
        }
    }

    pub fn eval(&self, a: f64) -> Result<f64> {
        Ok(match self {
            Func::Tanh => a.tanh(),
            Func::Exp => a.exp(),
            Func::Sqrt => a.sqrt(),
            Func::Sech => 1.0 / a.cosh(),
            Func::Opaque(name) => {
                return Err(Error::Domain(format!("opaque function `{name}` has no numeric value")))
            }
        })
    }
}

/// Symbolic expression tree over the coordinate universe.
///
/// Trees are built unnormalised; [`Expr::normalize`] produces the canonical
/// sum-of-monomials tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Num(#[serde(with = "rational_str")] Rational),
    Coord(Coord),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i32),
    Apply(Func, Box<Expr>),
}

/// Serde adapter writing a rational as `p/q` text.
pub mod rational_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Rational>().map_err(|e| D::Error::custom(format!("bad rational `{s}`: {e}")))
    }
}

/// Serde adapter writing an expression in the infix text grammar.
pub mod expr_text {
    use super::Expr;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(e: &Expr, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(e)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Expr, D::Error> {
        let s = String::deserialize(d)?;
        super::super::parse(&s).map_err(D::Error::custom)
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Num(Rational::zero())
    }

    pub fn one() -> Expr {
        Expr::Num(Rational::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Num(int(n))
    }

    pub fn rat(p: i64, q: i64) -> Expr {
        Expr::Num(rat(p, q))
    }

    pub fn num(r: Rational) -> Expr {
        Expr::Num(r)
    }

    pub fn coord(c: Coord) -> Expr {
        Expr::Coord(c)
    }

    pub fn constant(name: &str) -> Expr {
        Expr::Coord(Coord::constant(name))
    }

    pub fn powi(&self, n: i32) -> Expr {
        Expr::Pow(Box::new(self.clone()), n)
    }

    pub fn apply(f: Func, arg: Expr) -> Expr {
        Expr::Apply(f, Box::new(arg))
    }

    pub fn tanh(arg: Expr) -> Expr {
        Expr::apply(Func::Tanh, arg)
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::apply(Func::Exp, arg)
    }

    pub fn sqrt(arg: Expr) -> Expr {
        Expr::apply(Func::Sqrt, arg)
    }

    pub fn sech(arg: Expr) -> Expr {
        Expr::apply(Func::Sech, arg)
    }

    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        Expr::Add(terms.into_iter().collect())
    }

    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        Expr::Mul(factors.into_iter().collect())
    }

    pub fn to_poly(&self) -> Poly {
        match self {
            Expr::Num(r) => Poly::constant(r.clone()),
            Expr::Coord(c) => Poly::coord(c.clone()),
            Expr::Add(terms) => terms.iter().fold(Poly::zero(), |acc, t| acc.add(&t.to_poly())),
            Expr::Mul(factors) => factors.iter().fold(Poly::one(), |acc, f| acc.mul(&f.to_poly())),
            Expr::Pow(base, n) => base.to_poly().pow(*n),
            Expr::Apply(f, arg) => Poly::apply(f.clone(), arg.to_poly()),
        }
    }

    pub fn from_poly(p: &Poly) -> Expr {
        let mut terms: Vec<Expr> = p
            .terms()
            .rev()
            .map(|(m, c)| monomial_expr(m, c))
            .collect();
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.pop().unwrap(),
            _ => Expr::Add(terms),
        }
    }

    /// Canonical form. Idempotent.
    pub fn normalize(&self) -> Expr {
        Expr::from_poly(&self.to_poly())
    }

    /// Structural zero after normalisation.
    pub fn is_literal_zero(&self) -> bool {
        self.to_poly().is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.to_poly().as_constant()
    }

    pub fn coords(&self) -> std::collections::BTreeSet<Coord> {
        self.to_poly().coords()
    }

    pub fn contains(&self, c: &Coord) -> bool {
        self.coords().contains(c)
    }

    pub fn is_polynomial_class(&self) -> bool {
        self.to_poly().is_polynomial_class()
    }
}

fn atom_expr(a: &Atom) -> Expr {
    match a {
        Atom::Coord(c) => Expr::Coord(c.clone()),
        Atom::Apply(f, p) => Expr::Apply(f.clone(), Box::new(Expr::from_poly(p))),
        Atom::Recip(p) => Expr::Pow(Box::new(Expr::from_poly(p)), -1),
    }
}

fn monomial_expr(m: &Monomial, c: &Rational) -> Expr {
    let mut factors = Vec::new();
    if !c.is_one() || m.is_one() {
        factors.push(Expr::Num(c.clone()));
    }
    for (a, e) in m.factors() {
        match (a, *e) {
            (Atom::Recip(p), e) => factors.push(Expr::Pow(Box::new(Expr::from_poly(p)), -e)),
            (a, 1) => factors.push(atom_expr(a)),
            (a, e) => factors.push(Expr::Pow(Box::new(atom_expr(a)), e)),
        }
    }
    if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        Expr::Mul(factors)
    }
}

impl From<Coord> for Expr {
    fn from(c: Coord) -> Self {
        Expr::Coord(c)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Self {
        Expr::Num(r)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Add(mut terms) => {
                terms.push(rhs);
                Expr::Add(terms)
            }
            lhs => Expr::Add(vec![lhs, rhs]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Num(r) => Expr::Num(-r),
            other => Expr::Mul(vec![Expr::int(-1), other]),
        }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Mul(mut factors) => {
                factors.push(rhs);
                Expr::Mul(factors)
            }
            lhs => Expr::Mul(vec![lhs, rhs]),
        }
    }
}

macro_rules! ref_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr { $tr::$m(self.clone(), rhs.clone()) }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr { $tr::$m(self.clone(), rhs) }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr { $tr::$m(self, rhs.clone()) }
        }
    )*};
}
ref_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

// Printing. The output is accepted by the parser in `parse.rs`.

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(terms) if terms.len() > 1 => 1,
        Expr::Add(_) => 4,
        Expr::Mul(_) => 2,
        Expr::Num(r) if r.is_negative() || !r.is_integer() => 2,
        Expr::Pow(..) => 3,
        _ => 4,
    }
}

fn starts_negative(e: &Expr) -> bool {
    match e {
        Expr::Num(r) => r.is_negative(),
        Expr::Mul(f) => f.first().map(starts_negative).unwrap_or(false),
        _ => false,
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => write!(f, "{r}"),
            Expr::Coord(c) => write!(f, "{c}"),
            Expr::Add(terms) => {
                if terms.is_empty() {
                    return write!(f, "0");
                }
                for (i, t) in terms.iter().enumerate() {
                    if i == 0 {
                        write_wrapped(f, t, 1)?;
                    } else if starts_negative(t) {
                        write!(f, " - ")?;
                        write_wrapped(f, &negate_leading(t), 2)?;
                    } else {
                        write!(f, " + ")?;
                        write_wrapped(f, t, 2)?;
                    }
                }
                Ok(())
            }
            Expr::Mul(factors) => {
                if factors.is_empty() {
                    return write!(f, "1");
                }
                let mut rest = &factors[..];
                if let (Some(Expr::Num(r)), true) = (factors.first(), factors.len() > 1) {
                    if *r == -Rational::one() {
                        write!(f, "-")?;
                    } else {
                        write!(f, "{r}*")?;
                    }
                    rest = &factors[1..];
                }
                for (i, x) in rest.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write_wrapped(f, x, 3)?;
                }
                Ok(())
            }
            Expr::Pow(base, n) => {
                write_wrapped(f, base, 4)?;
                write!(f, "^{n}")
            }
            Expr::Apply(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

fn negate_leading(e: &Expr) -> Expr {
    match e {
        Expr::Num(r) => Expr::Num(-r),
        Expr::Mul(factors) => {
            let mut fs = factors.clone();
            if let Some(Expr::Num(r)) = fs.first() {
                let r = -r;
                if r.is_one() && fs.len() > 1 {
                    fs.remove(0);
                } else {
                    fs[0] = Expr::Num(r);
                }
            } else if let Some(first) = fs.first_mut() {
                *first = negate_leading(first);
            }
            if fs.len() == 1 {
                fs.pop().unwrap()
            } else {
                Expr::Mul(fs)
            }
        }
        other => -other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Expr {
        Expr::coord(Coord::u())
    }

    #[test]
    fn normalize_is_idempotent_on_example() {
        let e = (u() + Expr::int(1)).powi(3) - u() * u() * u();
        let n = e.normalize();
        assert_eq!(n.normalize(), n);
        assert_eq!(n.to_string(), "3*u^2 + 3*u + 1");
    }

    #[test]
    fn display_of_negative_terms() {
        let l = Expr::coord(Coord::Lambda);
        let e = (l.clone() * u() - l * u().powi(3)).normalize();
        assert_eq!(e.to_string(), "-λ*u^3 + λ*u");
        let half = (Expr::rat(-3, 8) * u()).normalize();
        assert_eq!(half.to_string(), "-3/8*u");
    }

    #[test]
    fn json_tree_roundtrip() {
        let e = Expr::tanh(Expr::rat(1, 2) * Expr::coord(Coord::X)) + Expr::coord(Coord::u_jet("tx"));
        let s = serde_json::to_string(&e).unwrap();
        let back: Expr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
