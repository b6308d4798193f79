//! Canonical form: a sum of monomials over atoms with exact rational
//! coefficients. Atoms are coordinates, opaque function applications with a
//! canonical argument, and reciprocals of multi-term polynomials. Monomials
//! are kept in graded lexicographic order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::coord::Coord;
use super::expr::Func;
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Coord(Coord),
    Apply(Func, Box<Poly>),
    /// `P^{-1}` for a polynomial `P` with at least two terms, normalised so its
    /// leading coefficient is 1.
    Recip(Box<Poly>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(Atom, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn atom(a: Atom, e: i32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        Monomial { factors: vec![(a, e)] }
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(_, e)| *e as i64).sum()
    }

    pub fn exponent(&self, a: &Atom) -> i32 {
        self.factors
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = ea + eb;
                    if e != 0 {
                        out.push((a.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    pub fn inverse(&self) -> Monomial {
        Monomial {
            factors: self.factors.iter().map(|(a, e)| (a.clone(), -e)).collect(),
        }
    }

    /// Removes one atom entirely, returning the rest.
    pub fn without(&self, a: &Atom) -> Monomial {
        Monomial {
            factors: self.factors.iter().filter(|(b, _)| b != a).cloned().collect(),
        }
    }
}

fn lex(a: &[(Atom, i32)], b: &[(Atom, i32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some((_, ea)), None) => return 0.cmp(ea).reverse(),
            (None, Some((_, eb))) => return 0.cmp(eb),
            (Some((xa, ea)), Some((xb, eb))) => match xa.cmp(xb) {
                Ordering::Less => return ea.cmp(&0),
                Ordering::Greater => return 0.cmp(eb),
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex(&self.factors, &other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn coord(c: Coord) -> Self {
        Poly::atom(Atom::Coord(c), 1)
    }

    pub fn atom(a: Atom, e: i32) -> Self {
        Poly::monomial(Monomial::atom(a, e), Rational::one()).reduce_radicals()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Coefficient of the largest monomial.
    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn insert_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.insert_term(m, c);
        }
        p.reduce_radicals()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out.reduce_radicals()
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            out.insert_term(ma.mul(m), ca * c);
        }
        out.reduce_radicals()
    }

    pub fn pow(&self, n: i32) -> Poly {
        if n == 0 {
            return Poly::one();
        }
        if n < 0 {
            return self.invert().pow(-n);
        }
        if let Some((m, c)) = self.single_term() {
            let factors: Vec<(Atom, i32)> =
                m.factors.iter().map(|(a, e)| (a.clone(), e * n)).collect();
            let coeff = num_traits::pow(c.clone(), n as usize);
            return Poly::monomial(Monomial { factors }, coeff).reduce_radicals();
        }
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Multiplicative inverse. Monomials invert exactly; a multi-term
    /// polynomial becomes a reciprocal atom. Zero inverts to the atom `(0)^-1`,
    /// which fails at numeric evaluation.
    pub fn invert(&self) -> Poly {
        if let Some((m, c)) = self.single_term() {
            return Poly::monomial(m.inverse(), c.recip()).reduce_radicals();
        }
        if self.is_zero() {
            return Poly::monomial(Monomial::atom(Atom::Recip(Box::new(Poly::zero())), 1), Rational::one());
        }
        let lead = self.leading_coefficient().unwrap().clone();
        let monic = self.scale(&lead.recip());
        Poly::monomial(Monomial::atom(Atom::Recip(Box::new(monic)), 1), lead.recip())
    }

    /// Applies an opaque function, folding exactly known values and odd/even
    /// symmetries of the argument.
    pub fn apply(f: Func, arg: Poly) -> Poly {
        let negative_lead = arg.leading_coefficient().map(|c| c.is_negative()).unwrap_or(false);
        match f {
            Func::Tanh if arg.is_zero() => Poly::zero(),
            Func::Tanh if negative_lead => Poly::apply(Func::Tanh, arg.neg()).neg(),
            Func::Sech if arg.is_zero() => Poly::one(),
            Func::Sech if negative_lead => Poly::apply(Func::Sech, arg.neg()),
            Func::Exp if arg.is_zero() => Poly::one(),
            Func::Sqrt => match arg.as_constant().and_then(|c| exact_sqrt(&c)) {
                Some(root) => Poly::constant(root),
                None => Poly::atom(Atom::Apply(f, Box::new(arg)), 1),
            },
            _ => Poly::atom(Atom::Apply(f, Box::new(arg)), 1),
        }
    }

    /// Keeps every `sqrt(P)` exponent in {0, 1} by moving whole powers of `P`
    /// out of the radical.
    fn reduce_radicals(self) -> Poly {
        let needs = self.terms.keys().any(|m| {
            m.factors
                .iter()
                .any(|(a, e)| matches!(a, Atom::Apply(Func::Sqrt, _)) && !(0..=1).contains(e))
        });
        if !needs {
            return self;
        }
        let mut out = Poly::zero();
        for (m, c) in self.terms {
            let mut rest = Monomial::one();
            let mut extra = Poly::one();
            for (a, e) in m.factors {
                match &a {
                    Atom::Apply(Func::Sqrt, inner) if !(0..=1).contains(&e) => {
                        let q = e.div_euclid(2);
                        let r = e.rem_euclid(2);
                        extra = extra.mul(&inner.pow(q));
                        if r == 1 {
                            rest = rest.mul(&Monomial::atom(a.clone(), 1));
                        }
                    }
                    _ => rest = rest.mul(&Monomial::atom(a, e)),
                }
            }
            out = out.add(&extra.mul_monomial(&rest, &c));
        }
        out
    }

    /// All coordinates appearing anywhere, including inside function
    /// arguments and reciprocals.
    pub fn coords(&self) -> BTreeSet<Coord> {
        let mut out = BTreeSet::new();
        self.collect_coords(&mut out);
        out
    }

    fn collect_coords(&self, out: &mut BTreeSet<Coord>) {
        for m in self.terms.keys() {
            for (a, _) in &m.factors {
                match a {
                    Atom::Coord(c) => {
                        out.insert(c.clone());
                    }
                    Atom::Apply(_, p) | Atom::Recip(p) => p.collect_coords(out),
                }
            }
        }
    }

    /// True when every atom is a coordinate: the canonical form then decides
    /// equality (Laurent polynomial ring over independent symbols).
    pub fn is_polynomial_class(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.factors.iter().all(|(a, _)| matches!(a, Atom::Coord(_))))
    }

    pub fn contains_coord(&self, c: &Coord) -> bool {
        self.coords().contains(c)
    }

    /// Evaluates term by term, returning the value and the sum of absolute
    /// term values (used as a cancellation scale).
    pub fn eval_scaled<F>(&self, env: &F) -> crate::Result<(f64, f64)>
    where
        F: Fn(&Coord) -> crate::Result<f64>,
    {
        let mut sum = 0.0;
        let mut scale = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for (a, e) in &m.factors {
                let base = match a {
                    Atom::Coord(coord) => env(coord)?,
                    Atom::Apply(f, p) => f.eval(p.eval_scaled(env)?.0)?,
                    Atom::Recip(p) => 1.0 / p.eval_scaled(env)?.0,
                };
                v *= base.powi(*e);
            }
            sum += v;
            scale += v.abs();
        }
        Ok((sum, scale))
    }

    pub fn eval<F>(&self, env: &F) -> crate::Result<f64>
    where
        F: Fn(&Coord) -> crate::Result<f64>,
    {
        Ok(self.eval_scaled(env)?.0)
    }

    /// Splits into (monomial in the selected atoms) → coefficient polynomial.
    pub fn split_by<P>(&self, select: P) -> BTreeMap<Monomial, Poly>
    where
        P: Fn(&Atom) -> bool,
    {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (mut key, mut rest) = (Vec::new(), Vec::new());
            for (a, e) in &m.factors {
                if select(a) {
                    key.push((a.clone(), *e));
                } else {
                    rest.push((a.clone(), *e));
                }
            }
            let entry = out.entry(Monomial { factors: key }).or_default();
            entry.insert_term(Monomial { factors: rest }, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

pub fn exact_sqrt(c: &Rational) -> Option<Rational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    (&n * &n == *c.numer() && &d * &d == *c.denom()).then(|| Rational::new(n, d))
}
