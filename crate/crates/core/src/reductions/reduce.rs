use serde::Serialize;

use crate::groups::GroupAction;
use crate::lie::VectorField;
use crate::symcore::{
    expr_text, is_zero_in, parse, partial_derivative, substitute_one, Atom, Coord, Expr, Monomial,
    Rational, SampleBox,
};
use crate::{Error, Result};

/// Sampling region for invariants with `√t`, `1/x` and similar factors.
pub fn invariant_box() -> SampleBox {
    SampleBox::default().with(Coord::X, 0.25, 2.0).with(Coord::T, 0.25, 2.0)
}

/// A similarity variable `η(x, t)` of one of the listed groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariant {
    pub group: String,
    #[serde(with = "expr_text")]
    pub eta: Expr,
}

impl Invariant {
    /// `G(η) = 0` for the generating field.
    pub fn is_invariant_under(&self, g: &VectorField) -> Result<bool> {
        Ok(is_zero_in(&g.apply(&self.eta)?, &invariant_box())?.zero)
    }
}

/// Similarity variable of `Xi1`…`Xi7`. Group 4 needs `k`.
pub fn invariant_for(group: &str, k: Option<&Rational>) -> Result<Invariant> {
    let action = GroupAction::from_name(group, k.cloned())?;
    let text = match action.id.to_string().as_str() {
        "Xi1" => "t".to_string(),
        "Xi2" => "x".to_string(),
        "Xi3" => "t/x^2".to_string(),
        "Xi4" => format!("t - ({})*x", k.expect("Xi4 resolved with k")),
        "Xi5" => "(1 + x)/sqrt(t)".to_string(),
        "Xi6" => "(1 + x)/sqrt(1 + 2*t)".to_string(),
        "Xi7" => "x/sqrt(1 + 2*t)".to_string(),
        other => return Err(Error::UnknownGroup(other.to_string())),
    };
    Ok(Invariant { group: action.id.to_string(), eta: parse(&text)?.normalize() })
}

/// The equation after `u = f(η)`: `a₂ f″ + a₁ f′ + λ(f³ − f) = 0`.
///
/// The λ-term passes through the substitution unchanged, so the reduction
/// closes exactly when `a₁` and `a₂` are functions of η alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedOde {
    pub invariant: Invariant,
    /// Highest derivative of `f` that survives.
    pub order: u8,
    /// Written in η when the reduction closes, in (x, t) otherwise.
    #[serde(with = "expr_text")]
    pub a2: Expr,
    #[serde(with = "expr_text")]
    pub a1: Expr,
    #[serde(with = "expr_text")]
    pub equation: Expr,
    pub feasible: bool,
    /// Terms whose coefficients still depend on x and t separately.
    #[serde(with = "expr_text")]
    pub leftover: Expr,
}

/// `a₂ f″ + a₁ f′ + λ(f³ − f) = 0` with rational `a₁`, `a₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutonomousOde {
    #[serde(with = "crate::symcore::rational_str")]
    pub a2: Rational,
    #[serde(with = "crate::symcore::rational_str")]
    pub a1: Rational,
}

impl AutonomousOde {
    /// `f′ + λ(f³ − f) = 0`.
    pub fn first_order() -> Self {
        AutonomousOde { a2: Rational::from_integer(0.into()), a1: Rational::from_integer(1.into()) }
    }

    /// `f″ = λ(f³ − f)`.
    pub fn second_order() -> Self {
        AutonomousOde { a2: Rational::from_integer((-1).into()), a1: Rational::from_integer(0.into()) }
    }

    /// `f′ − k² f″ + λ(f³ − f) = 0`.
    pub fn traveling(k: &Rational) -> Self {
        AutonomousOde { a2: -(k * k), a1: Rational::from_integer(1.into()) }
    }

    pub fn order(&self) -> usize {
        if self.a2 != Rational::from_integer(0.into()) {
            2
        } else if self.a1 != Rational::from_integer(0.into()) {
            1
        } else {
            0
        }
    }
}

fn f(n: u8) -> Expr {
    Expr::coord(Coord::Reduced(n))
}

/// `{g, η} = g_x η_t − g_t η_x`, which vanishes exactly when `g` is constant
/// on the level sets of η.
fn depends_only_on(g: &Expr, eta: &Expr) -> Result<bool> {
    let (x, t) = (Coord::X, Coord::T);
    let bracket = partial_derivative(g, &x)? * partial_derivative(eta, &t)?
        - partial_derivative(g, &t)? * partial_derivative(eta, &x)?;
    Ok(is_zero_in(&bracket, &invariant_box())?.zero)
}

/// Rewrites `g` in η by solving η for a coordinate it contains linearly.
fn rewrite_in_eta(g: &Expr, eta: &Expr) -> Option<Expr> {
    if let Some(r) = g.as_rational() {
        return Some(Expr::num(r));
    }
    let p = eta.to_poly();
    for c in [Coord::T, Coord::X] {
        let atom = Atom::Coord(c.clone());
        let parts = p.split_by(|a| *a == atom);
        let slope = parts.get(&Monomial::atom(atom.clone(), 1)).and_then(|q| q.as_constant());
        let linear = parts.keys().all(|m| m.is_one() || *m == Monomial::atom(atom.clone(), 1));
        let (Some(slope), true) = (slope, linear) else { continue };
        let rest = parts.get(&Monomial::one()).map(Expr::from_poly).unwrap_or_else(Expr::zero);
        let solved = (Expr::coord(Coord::Eta) - rest) * Expr::num(slope.recip());
        let out = substitute_one(g, c, solved).normalize();
        if !out.contains(&Coord::X) && !out.contains(&Coord::T) {
            return Some(out);
        }
    }
    None
}

/// Substitutes `u = f(η)` into the equation and decides whether it closes.
pub fn reduce_with(invariant: Invariant) -> Result<ReducedOde> {
    let eta = &invariant.eta;
    let eta_t = partial_derivative(eta, &Coord::T)?;
    let eta_x = partial_derivative(eta, &Coord::X)?;
    let eta_xx = partial_derivative(&eta_x, &Coord::X)?;
    let a2 = (-(eta_x.clone() * eta_x)).normalize();
    let a1 = (eta_t - eta_xx).normalize();
    let nonlinear = (Expr::coord(Coord::Lambda) * (f(0).powi(3) - f(0))).normalize();

    let mut feasible = true;
    let mut leftover = Expr::zero();
    let mut shown = Vec::new();
    for (coef, n) in [(&a2, 2), (&a1, 1)] {
        if depends_only_on(coef, eta)? {
            shown.push(rewrite_in_eta(coef, eta).unwrap_or_else(|| coef.clone()));
        } else {
            feasible = false;
            leftover = leftover + coef.clone() * f(n);
            shown.push(coef.clone());
        }
    }
    let [a2_shown, a1_shown] = [shown[0].clone(), shown[1].clone()];
    let order = if !a2.is_literal_zero() { 2 } else if !a1.is_literal_zero() { 1 } else { 0 };
    let equation = (a2_shown.clone() * f(2) + a1_shown.clone() * f(1) + nonlinear).normalize();
    Ok(ReducedOde {
        invariant,
        order,
        a2: a2_shown,
        a1: a1_shown,
        equation,
        feasible,
        leftover: leftover.normalize(),
    })
}

/// Reduction along the similarity variable of a listed group.
pub fn reduce(group: &str, k: Option<&Rational>) -> Result<ReducedOde> {
    reduce_with(invariant_for(group, k)?)
}

impl ReducedOde {
    /// The reduced equation with rational coefficients, when it has them.
    pub fn autonomous(&self) -> Result<AutonomousOde> {
        if !self.feasible {
            return Err(Error::Infeasible(format!("{} leaves {}", self.invariant.group, self.leftover)));
        }
        match (self.a2.as_rational(), self.a1.as_rational()) {
            (Some(a2), Some(a1)) => Ok(AutonomousOde { a2, a1 }),
            _ => Err(Error::InvalidArgument(format!("coefficients of `{}` depend on η", self.equation))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{is_zero, rat};

    fn p(s: &str) -> Expr {
        parse(s).unwrap().normalize()
    }

    #[test]
    fn invariants_are_invariant() {
        let k = rat(3, 2);
        for i in 1..=7 {
            let name = format!("Xi{i}");
            let inv = invariant_for(&name, Some(&k)).unwrap();
            let g = GroupAction::from_name(&name, Some(k.clone())).unwrap().generator().unwrap();
            assert!(inv.is_invariant_under(&g).unwrap(), "{name}");
        }
    }

    #[test]
    fn non_invariant_is_detected() {
        let inv = invariant_for("Xi3", None).unwrap();
        assert!(!inv.is_invariant_under(&VectorField::translation_x()).unwrap());
    }

    #[test]
    fn translation_reductions() {
        let r = reduce("Xi1", None).unwrap();
        assert!(r.feasible);
        assert_eq!(r.equation, p("f' + λ*(f^3 - f)"));
        assert_eq!(r.autonomous().unwrap(), AutonomousOde::first_order());

        let r = reduce("Xi2", None).unwrap();
        assert_eq!(r.order, 2);
        assert_eq!(r.equation, p("-f'' + λ*(f^3 - f)"));
        assert_eq!(r.autonomous().unwrap(), AutonomousOde::second_order());
    }

    #[test]
    fn traveling_wave_has_k_squared() {
        let r = reduce("Xi4", Some(&rat(1, 1))).unwrap();
        assert_eq!(r.equation, p("f' - f'' + λ*(f^3 - f)"));
        let r = reduce("Xi4", Some(&rat(2, 3))).unwrap();
        assert!(r.feasible);
        assert_eq!(r.equation, p("f' - 4/9*f'' + λ*(f^3 - f)"));
        assert_eq!(r.autonomous().unwrap(), AutonomousOde::traveling(&rat(2, 3)));
        assert!(reduce("Xi4", None).is_err());
    }

    #[test]
    fn scaling_families_do_not_close() {
        for g in ["Xi3", "Xi5", "Xi6", "Xi7"] {
            let r = reduce(g, None).unwrap();
            assert!(!r.feasible, "{g}");
            assert!(!r.leftover.is_literal_zero());
            assert!(matches!(r.autonomous(), Err(Error::Infeasible(_))));
        }
        // η = t/x²: a₂ = −4t²/x⁶, a₁ = 1/x² − 6t/x⁴.
        let r = reduce("Xi3", None).unwrap();
        assert_eq!(r.a2, p("-4*t^2*x^-6"));
        assert!(is_zero(&(r.a1.clone() - p("x^-2 - 6*t*x^-4"))).unwrap().zero);
        assert_eq!(r.leftover, p("-4*t^2*x^-6*f'' + (x^-2 - 6*t*x^-4)*f'"));
    }

    #[test]
    fn printed_mixed_forms_for_groups_five_to_seven() {
        // The reduced forms with explicit x and t agree with the chain rule
        // for groups 5–7, even though they do not close over η.
        let cases = [
            ("Xi5", "-(1 + x)/(2*sqrt(t)^3)", "-1/t"),
            ("Xi6", "-(1 + x)/sqrt(1 + 2*t)^3", "-1/(1 + 2*t)"),
            ("Xi7", "-x/sqrt(1 + 2*t)^3", "-1/(1 + 2*t)"),
        ];
        for (g, a1, a2) in cases {
            let r = reduce(g, None).unwrap();
            let bx = invariant_box();
            assert!(is_zero_in(&(r.a1.clone() - p(a1)), &bx).unwrap().zero, "{g} a1 = {}", r.a1);
            assert!(is_zero_in(&(r.a2.clone() - p(a2)), &bx).unwrap().zero, "{g} a2 = {}", r.a2);
        }
    }

    #[test]
    fn eta_dependent_coefficients_are_rewritten() {
        // η = t + x² is not a listed invariant; u = f(η) gives
        // a₂ = −4x², a₁ = 1 − 2, which does not close.
        let r = reduce_with(Invariant { group: "custom".into(), eta: p("t + x^2") }).unwrap();
        assert!(!r.feasible);
        // η = x + t: a₂ = −1, a₁ = 1.
        let r = reduce_with(Invariant { group: "custom".into(), eta: p("x + t") }).unwrap();
        assert_eq!(r.equation, p("-f'' + f' + λ*(f^3 - f)"));
        assert_eq!(rewrite_in_eta(&p("2*t - 4*x"), &p("t - 2*x")), Some(p("2*η")));
        assert_eq!(rewrite_in_eta(&p("x*t"), &p("t - 2*x")), None);
    }

    #[test]
    fn unknown_groups() {
        assert!(matches!(reduce("Xi9", None), Err(Error::UnknownGroup(_))));
        assert!(reduce("G1", None).is_err());
    }
}
