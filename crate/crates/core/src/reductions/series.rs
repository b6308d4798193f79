use std::fmt;
use std::ops::Neg;

use num_traits::{Num, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::reduce::AutonomousOde;
use crate::symcore::Rational;
use crate::{Error, Result};

/// Scalar for the recurrences: exact rationals or floats.
pub trait Coefficient: Num + Clone + fmt::Display + Neg<Output = Self> + ToPrimitive {
    fn from_rational(r: &Rational) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }
}

impl Coefficient for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Coefficient for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

/// Truncated power series `Σ c_n ηⁿ`, `n = 0..=N`, of a reduced ODE.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesSolution<T: Coefficient> {
    pub ode: AutonomousOde,
    #[serde(serialize_with = "as_text")]
    pub lambda: T,
    #[serde(serialize_with = "all_as_text")]
    pub coeffs: Vec<T>,
    /// Root-test estimate `|c_n|^{-1/n}` at the last nonzero coefficient.
    pub radius_estimate: Option<f64>,
}

fn as_text<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn all_as_text<T: fmt::Display, S: Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

/// `Σ_{k=0}^{n} Σ_{j=0}^{k} c_j c_{k−j} c_{n−k}`, the ηⁿ coefficient of `f³`,
/// from the running squares.
fn cube_coefficient<T: Coefficient>(c: &[T], squares: &[T], n: usize) -> T {
    (0..=n).fold(T::zero(), |acc, k| acc + squares[k].clone() * c[n - k].clone())
}

fn square_coefficient<T: Coefficient>(c: &[T], n: usize) -> T {
    (0..=n).fold(T::zero(), |acc, j| acc + c[j].clone() * c[n - j].clone())
}

/// Coefficients of `a₂ f″ + a₁ f′ + λ(f³ − f) = 0` from the initial data.
///
/// Matching ηⁿ gives
/// `a₂ (n+1)(n+2) c_{n+2} + a₁ (n+1) c_{n+1} + λ(cube_n − c_n) = 0`,
/// solved for the highest coefficient present.
pub fn series<T: Coefficient>(ode: &AutonomousOde, lambda: T, init: &[T], n_max: usize) -> Result<SeriesSolution<T>> {
    let order = ode.order();
    if order == 0 {
        return Err(Error::InvalidArgument("the ODE has no derivative term".into()));
    }
    if init.len() != order {
        return Err(Error::InvalidArgument(format!("order {order} needs {order} initial values")));
    }
    if n_max < order {
        return Err(Error::InvalidArgument(format!("truncation N = {n_max} is below the order {order}")));
    }
    let a2 = T::from_rational(&ode.a2);
    let a1 = T::from_rational(&ode.a1);
    let mut c: Vec<T> = init.to_vec();
    let mut squares: Vec<T> = Vec::new();
    for n in 0..=(n_max - order) {
        while squares.len() <= n {
            squares.push(square_coefficient(&c, squares.len()));
        }
        let reaction = lambda.clone() * (cube_coefficient(&c, &squares, n) - c[n].clone());
        let next = if order == 2 {
            let drift = a1.clone() * T::from_usize(n + 1) * c[n + 1].clone();
            -(drift + reaction) / (a2.clone() * T::from_usize((n + 1) * (n + 2)))
        } else {
            -reaction / (a1.clone() * T::from_usize(n + 1))
        };
        c.push(next);
    }
    let radius_estimate = c.iter().enumerate().rev().find_map(|(n, cn)| {
        let v = cn.to_f64()?.abs();
        (n > 0 && v > 0.0).then(|| v.powf(-1.0 / n as f64))
    });
    Ok(SeriesSolution { ode: ode.clone(), lambda, coeffs: c, radius_estimate })
}

/// `f′ + λ(f³ − f) = 0`: `c₁ = λ(c₀ − c₀³)` and
/// `c_{n+1} = λ(c_n − cube_n)/(n+1)`.
pub fn series_first_order<T: Coefficient>(lambda: T, c0: T, n_max: usize) -> Result<SeriesSolution<T>> {
    series(&AutonomousOde::first_order(), lambda, &[c0], n_max)
}

/// `f″ = λ(f³ − f)`: `c_{n+2} = λ(cube_n − c_n)/((n+1)(n+2))`.
pub fn series_second_order<T: Coefficient>(lambda: T, c0: T, c1: T, n_max: usize) -> Result<SeriesSolution<T>> {
    series(&AutonomousOde::second_order(), lambda, &[c0, c1], n_max)
}

/// `f′ − k² f″ + λ(f³ − f) = 0`:
/// `c_{n+2} = ((n+1)c_{n+1} + λ(cube_n − c_n))/(k²(n+1)(n+2))`.
pub fn series_traveling<T: Coefficient>(
    lambda: T,
    k: &Rational,
    c0: T,
    c1: T,
    n_max: usize,
) -> Result<SeriesSolution<T>> {
    if k.is_zero() {
        return Err(Error::InvalidArgument(
            "k = 0 leaves the first-order equation; use series_first_order".into(),
        ));
    }
    series(&AutonomousOde::traveling(k), lambda, &[c0, c1], n_max)
}

impl<T: Coefficient> SeriesSolution<T> {
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation in the coefficient type.
    pub fn eval_exact(&self, eta: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * eta.clone() + c.clone())
    }

    /// Coefficients of the ODE residual of the truncated polynomial, by
    /// direct polynomial arithmetic rather than the recurrence.
    pub fn truncation_residual(&self) -> Vec<T> {
        let c = &self.coeffs;
        let n = c.len();
        let mut out = vec![T::zero(); 3 * n];
        let mut sq = vec![T::zero(); 2 * n];
        for i in 0..n {
            for j in 0..n {
                sq[i + j] = sq[i + j].clone() + c[i].clone() * c[j].clone();
            }
        }
        for i in 0..2 * n {
            for j in 0..n {
                out[i + j] = out[i + j].clone() + self.lambda.clone() * sq[i].clone() * c[j].clone();
            }
        }
        let a2 = T::from_rational(&self.ode.a2);
        let a1 = T::from_rational(&self.ode.a1);
        for i in 0..n {
            out[i] = out[i].clone() - self.lambda.clone() * c[i].clone();
            if i >= 1 {
                out[i - 1] = out[i - 1].clone() + a1.clone() * T::from_usize(i) * c[i].clone();
            }
            if i >= 2 {
                out[i - 2] = out[i - 2].clone() + a2.clone() * T::from_usize(i * (i - 1)) * c[i].clone();
            }
        }
        out
    }

    /// Lowest η-power with a nonzero residual coefficient.
    pub fn residual_order(&self) -> Option<usize> {
        self.truncation_residual().iter().position(|r| !r.is_zero())
    }
}

/// Horner evaluation in floating point.
pub fn series_eval<T: Coefficient>(s: &SeriesSolution<T>, eta: f64) -> f64 {
    s.coeffs.iter().rev().fold(0.0, |acc, c| acc * eta + c.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::reductions::reduce::reduce;
    use crate::symcore::{int, rat, substitute_one, Coord, Expr, Poly};

    #[test]
    fn first_order_values() {
        let s = series_first_order(int(1), rat(1, 2), 20).unwrap();
        assert_eq!(s.coeffs[0], rat(1, 2));
        assert_eq!(s.coeffs[1], rat(3, 8));
        // c₂ = λ(c₁ − 3c₀²c₁)/2 = (3/8 − 9/32)/2.
        assert_eq!(s.coeffs[2], rat(3, 64));
        assert_eq!(s.coeffs.len(), 21);
    }

    #[test]
    fn second_order_values() {
        let s = series_second_order(int(1), rat(1, 2), int(0), 20).unwrap();
        assert_eq!(s.coeffs[2], rat(-3, 16));
        assert_eq!(s.coeffs[3], int(0));
        let s = series_second_order(int(1), rat(1, 2), int(1), 6).unwrap();
        // c₃ = (λ/6)(3c₀²c₁ − c₁).
        assert_eq!(s.coeffs[3], rat(1, 6) * (int(3) * rat(1, 4) - int(1)));
    }

    #[test]
    fn equilibria_are_constant() {
        for c0 in [int(0), int(1), int(-1)] {
            let s = series_first_order(rat(7, 3), c0.clone(), 12).unwrap();
            assert!(s.coeffs[1..].iter().all(Zero::is_zero));
            let s = series_second_order(rat(7, 3), c0.clone(), int(0), 12).unwrap();
            assert!(s.coeffs[1..].iter().all(Zero::is_zero));
            let s = series_traveling(int(2), &int(1), c0, int(0), 12).unwrap();
            assert!(s.coeffs[1..].iter().all(Zero::is_zero));
        }
        let s = series_second_order(int(1), int(1), int(0), 8).unwrap();
        assert_eq!(series_eval(&s, 0.7), 1.0);
    }

    #[test]
    fn traveling_recurrence_by_hand() {
        // λ = 2, k = 1: c₂ = (c₁ + 2(c₀³ − c₀))/2.
        let s = series_traveling(int(2), &int(1), rat(1, 2), rat(1, 4), 8).unwrap();
        assert_eq!(s.coeffs[2], (rat(1, 4) + int(2) * (rat(1, 8) - rat(1, 2))) / int(2));
        assert!(series_traveling(int(2), &int(0), rat(1, 2), rat(1, 4), 8).is_err());
    }

    #[test]
    fn argument_checks() {
        assert!(series_first_order(int(1), int(1), 0).is_err());
        assert!(series_second_order(int(1), int(1), int(0), 1).is_err());
        assert!(series(&AutonomousOde::first_order(), int(1), &[int(0), int(1)], 4).is_err());
    }

    #[test]
    fn float_mode_tracks_exact_mode() {
        let exact = series_traveling(rat(1, 2), &rat(3, 2), rat(1, 3), rat(-1, 5), 20).unwrap();
        let float = series_traveling(0.5, &rat(3, 2), 1.0 / 3.0, -0.2, 20).unwrap();
        for (e, f) in exact.coeffs.iter().zip(&float.coeffs) {
            let e = e.to_f64().unwrap();
            assert!((e - f).abs() <= 1e-13 * e.abs().max(1e-3));
        }
    }

    #[test]
    fn horner_at_zero() {
        let s = series_first_order(0.5, 0.2, 10).unwrap();
        assert_eq!(series_eval(&s, 0.0), 0.2);
    }

    /// The truncated series written as an expression in η and pushed through
    /// the symbolic reduced equation.
    fn symbolic_residual_order(s: &SeriesSolution<Rational>, equation: &Expr, lambda: &Rational) -> usize {
        let eta = Expr::coord(Coord::Eta);
        let poly: Expr = Expr::sum(s.coeffs.iter().enumerate().map(|(n, c)| Expr::num(c.clone()) * eta.powi(n as i32)));
        let d1 = crate::symcore::partial_derivative(&poly, &Coord::Eta).unwrap();
        let d2 = crate::symcore::partial_derivative(&d1, &Coord::Eta).unwrap();
        let mut e = substitute_one(equation, Coord::Reduced(2), d2);
        e = substitute_one(&e, Coord::Reduced(1), d1);
        e = substitute_one(&e, Coord::Reduced(0), poly);
        e = substitute_one(&e, Coord::Lambda, Expr::num(lambda.clone()));
        let p: Poly = e.normalize().to_poly();
        p.terms().map(|(m, _)| m.degree() as usize).min().unwrap_or(usize::MAX)
    }

    #[test]
    fn residual_orders_agree_with_symbolic_substitution() {
        let first = reduce("Xi1", None).unwrap();
        let second = reduce("Xi2", None).unwrap();
        let trav = reduce("Xi4", Some(&rat(2, 1))).unwrap();
        let n = 10;
        let a = series_first_order(int(1), rat(1, 2), n).unwrap();
        let b = series_second_order(int(1), rat(1, 2), rat(1, 3), n).unwrap();
        let c = series_traveling(int(1), &rat(2, 1), rat(1, 2), rat(1, 3), n).unwrap();
        assert_eq!(symbolic_residual_order(&a, &first.equation, &int(1)), n);
        assert_eq!(symbolic_residual_order(&b, &second.equation, &int(1)), n - 1);
        assert_eq!(symbolic_residual_order(&c, &trav.equation, &int(1)), n - 1);
        assert_eq!(a.residual_order(), Some(n));
        assert_eq!(b.residual_order(), Some(n - 1));
        assert_eq!(c.residual_order(), Some(n - 1));
    }

    #[test]
    fn reconstructed_field_solves_the_pde_to_series_order() {
        let n = 9;
        let s = series_first_order(rat(1, 2), rat(1, 3), n).unwrap();
        let t = Expr::coord(Coord::T);
        let u = Expr::sum(s.coeffs.iter().enumerate().map(|(i, c)| Expr::num(c.clone()) * t.powi(i as i32)));
        let sol = crate::groups::SolutionFn {
            name: "series".into(),
            expr: u,
            params: Default::default(),
            exact: false,
        };
        let r = substitute_one(&sol.residual_expr().unwrap(), Coord::Lambda, Expr::num(rat(1, 2)));
        let p = r.normalize().to_poly();
        let lowest = p.terms().map(|(m, _)| m.degree()).min().unwrap();
        assert_eq!(lowest as usize, n);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn truncation_residual_starts_late(
            lam in (1i64..=8, 1i64..=4),
            c0 in (-6i64..=6, 1i64..=4),
            c1 in (-6i64..=6, 1i64..=4),
            k in (1i64..=4, 1i64..=3),
            n in 3usize..=12,
        ) {
            let (lam, c0, c1, k) = (rat(lam.0, lam.1), rat(c0.0, c0.1), rat(c1.0, c1.1), rat(k.0, k.1));
            let a = series_first_order(lam.clone(), c0.clone(), n).unwrap();
            prop_assert!(a.residual_order().map_or(true, |o| o >= n));
            let b = series_second_order(lam.clone(), c0.clone(), c1.clone(), n).unwrap();
            prop_assert!(b.residual_order().map_or(true, |o| o + 2 >= n));
            let c = series_traveling(lam, &k, c0, c1, n).unwrap();
            prop_assert!(c.residual_order().map_or(true, |o| o + 2 >= n));
        }
    }
}
