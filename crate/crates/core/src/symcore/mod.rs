//! Symbolic core: expressions over the jet universe with exact rational
//! coefficients, differentiation, substitution and zero testing.

mod coord;
mod diff;
mod eval;
mod expr;
mod parse;
mod poly;
mod subst;

pub use coord::{Base, Coord, Dir, Field, FuncSym, Jet, JET_ORDER_MAX};
pub use diff::{
    partial_derivative, poly_partial, poly_total, total_along, total_derivative,
    total_derivatives,
};
pub use eval::{
    eval_numeric, is_zero, is_zero_in, sampling_seed, Certificate, SampleBox, Witness, ZeroTest,
    SAMPLE_POINTS, SAMPLE_TOL,
};
pub use expr::{expr_text, int, rat, rational_str, Expr, Func};
pub use parse::parse;
pub use poly::{exact_sqrt, Atom, Monomial, Poly};
pub use subst::{substitute, substitute_one, Bindings};
pub(crate) use subst::poly_subst;

pub type Rational = num_rational::BigRational;

#[cfg(test)]
pub(crate) mod strategies {
    use proptest::prelude::*;

    use super::{Coord, Expr};

    /// Leaves of random polynomial-class expressions. Jets stay at order ≤ 2
    /// so two further total derivatives remain inside the jet universe.
    pub fn leaf() -> impl Strategy<Value = Expr> {
        prop_oneof![
            (-5i64..=5, 1i64..=4).prop_map(|(p, q)| Expr::rat(p, q)),
            prop::sample::select(vec![
                Coord::Lambda,
                Coord::X,
                Coord::T,
                Coord::u(),
                Coord::v(),
                Coord::u_jet("t"),
                Coord::u_jet("x"),
                Coord::u_jet("xx"),
                Coord::v_jet("x"),
            ])
            .prop_map(Expr::Coord),
        ]
    }

    pub fn poly_expr() -> impl Strategy<Value = Expr> {
        leaf().prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Add),
                prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::Mul),
                inner.prop_map(|e| e.powi(2)),
            ]
        })
    }

    /// Polynomial in x, t, u only (coefficients of point vector fields).
    pub fn point_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-3i64..=3).prop_map(Expr::int),
            prop::sample::select(vec![Coord::X, Coord::T, Coord::u()]).prop_map(Expr::Coord),
        ];
        leaf.prop_recursive(2, 8, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Add),
                prop::collection::vec(inner, 2..3).prop_map(Expr::Mul),
            ]
        })
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::strategies::poly_expr;
    use super::*;

    proptest! {
        #[test]
        fn normalize_is_idempotent(e in poly_expr()) {
            let n = e.normalize();
            prop_assert_eq!(n.normalize(), n);
        }

        #[test]
        fn normalization_preserves_value(e in poly_expr()) {
            let pt: std::collections::BTreeMap<Coord, f64> = [
                Coord::Lambda, Coord::X, Coord::T, Coord::u(), Coord::v(),
                Coord::u_jet("t"), Coord::u_jet("x"), Coord::u_jet("xx"), Coord::v_jet("x"),
            ]
                .into_iter()
                .enumerate()
                .map(|(i, c)| (c, 0.3 + 0.17 * i as f64))
                .collect();
            // Evaluate the unnormalised tree directly so the check is not
            // circular.
            let direct = tree_eval(&e, &pt);
            let canon = eval_numeric(&e.normalize(), &pt).unwrap();
            prop_assert!((direct - canon).abs() <= 1e-12 * direct.abs().max(1.0));
        }

        #[test]
        fn total_derivatives_commute(e in poly_expr()) {
            let xt = total_derivatives(&e, &[Dir::T, Dir::X]).unwrap();
            let tx = total_derivatives(&e, &[Dir::X, Dir::T]).unwrap();
            prop_assert!((xt - tx).is_literal_zero());
        }

        #[test]
        fn leibniz_rule(a in poly_expr(), b in poly_expr(), dir in prop::sample::select(vec![Dir::X, Dir::T])) {
            let lhs = total_derivative(&(a.clone() * b.clone()), dir).unwrap();
            let rhs = total_derivative(&a, dir).unwrap() * b.clone() + a * total_derivative(&b, dir).unwrap();
            prop_assert!((lhs - rhs).is_literal_zero());
        }

        #[test]
        fn derivatives_are_linear(a in poly_expr(), b in poly_expr(), p in -4i64..4, q in 1i64..4) {
            let k = Expr::rat(p, q);
            let combo = k.clone() * a.clone() + b.clone();
            let d = total_derivative(&combo, Dir::X).unwrap()
                - (k.clone() * total_derivative(&a, Dir::X).unwrap() + total_derivative(&b, Dir::X).unwrap());
            prop_assert!(d.is_literal_zero());
            let d = partial_derivative(&combo, &Coord::u()).unwrap()
                - (k * partial_derivative(&a, &Coord::u()).unwrap() + partial_derivative(&b, &Coord::u()).unwrap());
            prop_assert!(d.is_literal_zero());
        }

        #[test]
        fn canonical_form_is_unique(a in poly_expr(), b in poly_expr()) {
            // (a + b)^2 and a^2 + 2ab + b^2 are different trees with one value.
            let left = (a.clone() + b.clone()).powi(2);
            let right = a.clone() * a.clone() + Expr::int(2) * a.clone() * b.clone() + b.clone() * b;
            prop_assert_eq!(left.normalize(), right.normalize());
        }

        #[test]
        fn text_roundtrip(e in poly_expr()) {
            let n = e.normalize();
            prop_assert_eq!(parse(&n.to_string()).unwrap().normalize(), n);
        }

        #[test]
        fn json_roundtrip(e in poly_expr()) {
            let s = serde_json::to_string(&e).unwrap();
            let back: Expr = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, e);
        }
    }

    fn tree_eval(e: &Expr, pt: &std::collections::BTreeMap<Coord, f64>) -> f64 {
        use num_traits::ToPrimitive;
        match e {
            Expr::Num(r) => r.to_f64().unwrap(),
            Expr::Coord(c) => pt[c],
            Expr::Add(ts) => ts.iter().map(|t| tree_eval(t, pt)).sum(),
            Expr::Mul(fs) => fs.iter().map(|f| tree_eval(f, pt)).product(),
            Expr::Pow(b, n) => tree_eval(b, pt).powi(*n),
            Expr::Apply(f, a) => f.eval(tree_eval(a, pt)).unwrap(),
        }
    }

    #[test]
    fn parameter_is_never_differentiated_by_total_derivative() {
        let e = parse("λ^2*u").unwrap();
        assert_eq!(total_derivative(&e, Dir::X).unwrap(), parse("λ^2*u_x").unwrap().normalize());
    }
}
