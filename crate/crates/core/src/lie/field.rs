use std::fmt;

use serde::{Deserialize, Serialize};

use crate::symcore::{expr_text, partial_derivative, poly_partial, Coord, Expr, Field, Poly};
use crate::{Error, Result};

/// Point vector field `ω ∂x + ψ ∂t + χ ∂u` with coefficients in (x, t, u).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorField {
    #[serde(with = "expr_text")]
    pub omega: Expr,
    #[serde(with = "expr_text")]
    pub psi: Expr,
    #[serde(with = "expr_text")]
    pub chi: Expr,
}

impl VectorField {
    /// Builds a field with normalised coefficients. Jet coordinates and the
    /// adjoint variable are rejected.
    pub fn new(omega: Expr, psi: Expr, chi: Expr) -> Result<Self> {
        for e in [&omega, &psi, &chi] {
            if let Some(bad) = e.coords().into_iter().find(|c| match c {
                Coord::Dep(Field::V, _) => true,
                Coord::Dep(Field::U, j) => j.order() > 0,
                Coord::Eta | Coord::Reduced(_) => true,
                _ => false,
            }) {
                return Err(Error::InvalidField(format!("coefficient depends on `{bad}`")));
            }
        }
        Ok(VectorField { omega: omega.normalize(), psi: psi.normalize(), chi: chi.normalize() })
    }

    pub fn zero() -> Self {
        VectorField { omega: Expr::zero(), psi: Expr::zero(), chi: Expr::zero() }
    }

    /// `∂x`.
    pub fn translation_x() -> Self {
        VectorField { omega: Expr::one(), psi: Expr::zero(), chi: Expr::zero() }
    }

    /// `∂t`.
    pub fn translation_t() -> Self {
        VectorField { omega: Expr::zero(), psi: Expr::one(), chi: Expr::zero() }
    }

    /// `x ∂x + 2t ∂t`.
    pub fn scaling() -> Self {
        VectorField {
            omega: Expr::coord(Coord::X),
            psi: Expr::int(2) * Expr::coord(Coord::T),
            chi: Expr::zero(),
        }
        .normalized()
    }

    /// `q(t, x) ∂u` for an arbitrary function `q`.
    pub fn lift(q: Expr) -> Result<Self> {
        VectorField::new(Expr::zero(), Expr::zero(), q)
    }

    pub fn components(&self) -> [&Expr; 3] {
        [&self.omega, &self.psi, &self.chi]
    }

    fn map(&self, f: impl Fn(&Expr) -> Expr) -> VectorField {
        VectorField { omega: f(&self.omega), psi: f(&self.psi), chi: f(&self.chi) }
    }

    fn normalized(self) -> Self {
        self.map(Expr::normalize)
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            omega: (&self.omega + &other.omega).normalize(),
            psi: (&self.psi + &other.psi).normalize(),
            chi: (&self.chi + &other.chi).normalize(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add(&other.scale(&Expr::int(-1)))
    }

    pub fn scale(&self, k: &Expr) -> VectorField {
        self.map(|e| (k * e).normalize())
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|e| e.is_literal_zero())
    }

    /// First-order action `ω f_x + ψ f_t + χ f_u`.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        let terms = [
            (&self.omega, Coord::X),
            (&self.psi, Coord::T),
            (&self.chi, Coord::u()),
        ];
        let mut out = Expr::zero();
        for (coef, c) in terms {
            if coef.is_literal_zero() {
                continue;
            }
            out = out + coef * partial_derivative(f, &c)?;
        }
        Ok(out.normalize())
    }
}

type PolyField = [Poly; 3];

fn to_polys(a: &VectorField) -> PolyField {
    [a.omega.to_poly(), a.psi.to_poly(), a.chi.to_poly()]
}

fn from_polys(p: &PolyField) -> VectorField {
    VectorField { omega: Expr::from_poly(&p[0]), psi: Expr::from_poly(&p[1]), chi: Expr::from_poly(&p[2]) }
}

fn poly_apply(a: &PolyField, f: &Poly) -> Result<Poly> {
    let mut out = Poly::zero();
    for (coef, c) in a.iter().zip([Coord::X, Coord::T, Coord::u()]) {
        if !coef.is_zero() {
            out = out.add(&coef.mul(&poly_partial(f, &c)?));
        }
    }
    Ok(out)
}

fn poly_commutator(a: &PolyField, b: &PolyField) -> Result<PolyField> {
    let comp = |i: usize| -> Result<Poly> { Ok(poly_apply(a, &b[i])?.sub(&poly_apply(b, &a[i])?)) };
    Ok([comp(0)?, comp(1)?, comp(2)?])
}

/// Lie bracket `[A, B] = A(B) − B(A)` taken componentwise.
pub fn commutator(a: &VectorField, b: &VectorField) -> Result<VectorField> {
    Ok(from_polys(&poly_commutator(&to_polys(a), &to_polys(b))?))
}

/// `[A,[B,C]] + [B,[C,A]] + [C,[A,B]]`.
pub fn jacobi_sum(a: &VectorField, b: &VectorField, c: &VectorField) -> Result<VectorField> {
    let (a, b, c) = (to_polys(a), to_polys(b), to_polys(c));
    let t1 = poly_commutator(&a, &poly_commutator(&b, &c)?)?;
    let t2 = poly_commutator(&b, &poly_commutator(&c, &a)?)?;
    let t3 = poly_commutator(&c, &poly_commutator(&a, &b)?)?;
    Ok(from_polys(&[0, 1, 2].map(|i| t1[i].add(&t2[i]).add(&t3[i]))))
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coef, d) in [(&self.omega, "∂x"), (&self.psi, "∂t"), (&self.chi, "∂u")] {
            if coef.is_literal_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match coef {
                c if *c == Expr::one() => write!(f, "{d}")?,
                Expr::Add(_) => write!(f, "({coef}){d}")?,
                _ => write!(f, "{coef}*{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::symcore::parse;
    use crate::symcore::strategies::point_expr;

    fn field(w: &str, p: &str, c: &str) -> VectorField {
        VectorField::new(parse(w).unwrap(), parse(p).unwrap(), parse(c).unwrap()).unwrap()
    }

    #[test]
    fn jets_are_rejected() {
        let err = VectorField::new(parse("u_x").unwrap(), Expr::zero(), Expr::zero()).unwrap_err();
        assert!(matches!(err, Error::InvalidField(_)));
        assert!(VectorField::new(Expr::zero(), Expr::zero(), parse("v").unwrap()).is_err());
        assert!(VectorField::new(Expr::zero(), Expr::zero(), parse("q{t,x}").unwrap()).is_ok());
    }

    #[test]
    fn commutator_examples() {
        let (g1, g2, g3) =
            (VectorField::translation_x(), VectorField::translation_t(), VectorField::scaling());
        assert!(commutator(&g1, &g2).unwrap().is_zero());
        assert_eq!(commutator(&g1, &g3).unwrap(), g1);
        assert_eq!(commutator(&g3, &g2).unwrap(), g2.scale(&Expr::int(-2)));
    }

    #[test]
    fn display() {
        assert_eq!(VectorField::scaling().to_string(), "x*∂x + 2*t*∂t");
        assert_eq!(field("0", "0", "x + u").to_string(), "(x + u)∂u");
    }

    fn point_field() -> impl Strategy<Value = VectorField> {
        (point_expr(), point_expr(), point_expr())
            .prop_map(|(w, p, c)| VectorField::new(w, p, c).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bracket_is_antisymmetric(a in point_field(), b in point_field()) {
            let ab = commutator(&a, &b).unwrap();
            let ba = commutator(&b, &a).unwrap();
            prop_assert!(ab.add(&ba).is_zero());
        }

        #[test]
        fn jacobi_identity(a in point_field(), b in point_field(), c in point_field()) {
            prop_assert!(jacobi_sum(&a, &b, &c).unwrap().is_zero());
        }
    }
}
