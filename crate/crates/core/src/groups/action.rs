use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::lie::{invariance_residual, AlgebraElement, InvarianceReport, PDESpec, VectorField};
use crate::symcore::{
    eval_numeric, expr_text, parse, partial_derivative, substitute, substitute_one, Bindings, Coord,
    Expr, Field, Rational,
};
use crate::{Error, Result};

/// The group parameter as a symbol.
pub fn epsilon_coord() -> Coord {
    Coord::constant("ε")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionId {
    /// One of the seven listed groups, 1-based.
    Catalogued { index: u8 },
    /// `u ↦ u + q(t, x)`.
    Shift,
    /// Closed-form flow of an algebra element.
    Flow { element: String },
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionId::Catalogued { index } => write!(f, "Xi{index}"),
            ActionId::Shift => write!(f, "Xiq"),
            ActionId::Flow { element } => write!(f, "flow({element})"),
        }
    }
}

/// One-parameter group `(x, t, u) ↦ (x̄, t̄, ū)` with the images written in
/// `(x, t, u, ε)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupAction {
    pub id: ActionId,
    #[serde(with = "expr_text")]
    pub x_bar: Expr,
    #[serde(with = "expr_text")]
    pub t_bar: Expr,
    #[serde(with = "expr_text")]
    pub u_bar: Expr,
    /// Algebra element whose flow this is, when it has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<AlgebraElement>,
}

fn expr(s: &str) -> Expr {
    parse(s).expect("static expression").normalize()
}

impl GroupAction {
    fn from_text(id: ActionId, x: &str, t: &str, element: AlgebraElement) -> Self {
        GroupAction { id, x_bar: expr(x), t_bar: expr(t), u_bar: expr("u"), element: Some(element) }
    }

    /// Listed groups 1, 2, 3, 5, 6 and 7. Group 4 carries a parameter, see
    /// [`GroupAction::xi4`].
    pub fn xi(index: u8) -> Result<Self> {
        let id = ActionId::Catalogued { index };
        let e = AlgebraElement::from_ints;
        Ok(match index {
            1 => Self::from_text(id, "x + ε", "t", e(1, 0, 0)),
            2 => Self::from_text(id, "x", "t + ε", e(0, 1, 0)),
            3 => Self::from_text(id, "exp(ε)*x", "exp(2*ε)*t", e(0, 0, 1)),
            4 => return Err(Error::InvalidArgument("Xi4 needs the parameter k".into())),
            5 => Self::from_text(id, "exp(ε)*(1 + x) - 1", "exp(2*ε)*t", e(1, 0, 1)),
            6 => Self::from_text(id, "exp(ε)*(1 + x) - 1", "(exp(2*ε)*(1 + 2*t) - 1)/2", e(1, 1, 1)),
            7 => Self::from_text(id, "exp(ε)*x", "(exp(2*ε)*(1 + 2*t) - 1)/2", e(0, 1, 1)),
            _ => return Err(Error::UnknownGroup(format!("Xi{index}"))),
        })
    }

    /// `(x + ε, t + kε, u)`.
    pub fn xi4(k: Rational) -> Self {
        let t_bar = (expr("t") + Expr::num(k.clone()) * Expr::coord(epsilon_coord())).normalize();
        GroupAction {
            id: ActionId::Catalogued { index: 4 },
            x_bar: expr("x + ε"),
            t_bar,
            u_bar: expr("u"),
            element: Some(AlgebraElement::new(Rational::one(), k, Rational::zero())),
        }
    }

    /// `(x, t, u + q(t, x))` for `q` in `(t, x)` and constants.
    pub fn xi_q(q: Expr) -> Result<Self> {
        if let Some(bad) = q.coords().into_iter().find(|c| {
            !matches!(c, Coord::X | Coord::T | Coord::Lambda | Coord::Const(_) | Coord::Func(_))
                || *c == epsilon_coord()
        }) {
            return Err(Error::InvalidArgument(format!("q may depend on t and x only, found `{bad}`")));
        }
        Ok(GroupAction {
            id: ActionId::Shift,
            x_bar: expr("x"),
            t_bar: expr("t"),
            u_bar: (expr("u") + Expr::coord(epsilon_coord()) * q).normalize(),
            element: None,
        })
    }

    /// Looks up `Xi1`…`Xi7`; `k` is required for `Xi4` and ignored otherwise.
    pub fn from_name(name: &str, k: Option<Rational>) -> Result<Self> {
        let index = name
            .strip_prefix("Xi")
            .or_else(|| name.strip_prefix("Ξ"))
            .and_then(|s| s.parse::<u8>().ok())
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))?;
        match (index, k) {
            (4, Some(k)) => Ok(Self::xi4(k)),
            (i, _) => Self::xi(i),
        }
    }

    /// Exponentiates `l¹G₁ + l²G₂ + l³G₃` by solving
    /// `x' = l¹ + l³x`, `t' = l² + 2l³t`, `u' = 0` in closed form.
    pub fn flow(v: &AlgebraElement) -> Self {
        let [l1, l2, l3] = v.l.clone();
        let eps = Expr::coord(epsilon_coord());
        let (x, t) = (Expr::coord(Coord::X), Expr::coord(Coord::T));
        let (x_bar, t_bar) = if l3.is_zero() {
            (x + Expr::num(l1) * eps.clone(), t + Expr::num(l2) * eps)
        } else {
            let sx = Expr::num(&l1 / &l3);
            let st = Expr::num(&l2 / (Rational::from_integer(2.into()) * &l3));
            let rate = Expr::num(l3);
            (
                Expr::exp(rate.clone() * eps.clone()) * (x + sx.clone()) - sx,
                Expr::exp(Expr::int(2) * rate * eps) * (t + st.clone()) - st,
            )
        };
        GroupAction {
            id: ActionId::Flow { element: v.to_string() },
            x_bar: x_bar.normalize(),
            t_bar: t_bar.normalize(),
            u_bar: Expr::coord(Coord::u()),
            element: Some(v.clone()),
        }
    }

    pub fn map(&self) -> [&Expr; 3] {
        [&self.x_bar, &self.t_bar, &self.u_bar]
    }

    /// The group at `−ε`, which undoes the action at `ε`.
    pub fn inverse(&self) -> GroupAction {
        let neg = |e: &Expr| substitute_one(e, epsilon_coord(), -Expr::coord(epsilon_coord())).normalize();
        GroupAction {
            id: self.id.clone(),
            x_bar: neg(&self.x_bar),
            t_bar: neg(&self.t_bar),
            u_bar: neg(&self.u_bar),
            element: self.element.clone(),
        }
    }

    /// `self ∘ inner`: the images of `inner` fed into `self`.
    pub fn compose(&self, inner: &GroupAction) -> Result<[Expr; 3]> {
        let mut b = Bindings::new();
        b.insert(Coord::X, inner.x_bar.clone());
        b.insert(Coord::T, inner.t_bar.clone());
        b.insert(Coord::u(), inner.u_bar.clone());
        let [x, t, u] = self.map();
        Ok([substitute(x, &b)?, substitute(t, &b)?, substitute(u, &b)?])
    }

    /// `d/dε` of the map at `ε = 0`.
    pub fn generator(&self) -> Result<VectorField> {
        let at_zero = |e: &Expr| -> Result<Expr> {
            let d = partial_derivative(e, &epsilon_coord())?;
            Ok(substitute_one(&d, epsilon_coord(), Expr::zero()).normalize())
        };
        VectorField::new(at_zero(&self.x_bar)?, at_zero(&self.t_bar)?, at_zero(&self.u_bar)?)
    }

    /// Invariance of the equation under the generator of this group.
    pub fn symmetry_check(&self, pde: &PDESpec) -> Result<InvarianceReport> {
        invariance_residual(&self.generator()?, pde)
    }

    /// Whether the spatial and temporal images are free of `u`.
    pub fn is_fibre_preserving(&self) -> bool {
        let u = Coord::u();
        !self.x_bar.contains(&u) && !self.t_bar.contains(&u)
    }

    /// Numeric image of a point.
    pub fn at(&self, eps: f64, p: [f64; 3]) -> Result<[f64; 3]> {
        let point = BTreeMap::from([
            (Coord::X, p[0]),
            (Coord::T, p[1]),
            (Coord::Dep(Field::U, crate::symcore::Jet::ZERO), p[2]),
            (epsilon_coord(), eps),
        ]);
        Ok([
            eval_numeric(&self.x_bar, &point)?,
            eval_numeric(&self.t_bar, &point)?,
            eval_numeric(&self.u_bar, &point)?,
        ])
    }
}

/// Image of `p` under `a` at parameter `eps`.
pub fn apply_action(a: &GroupAction, eps: f64, p: [f64; 3]) -> Result<[f64; 3]> {
    a.at(eps, p)
}

/// Groups 1–7 with `k` for group 4.
pub fn catalogue(k: Rational) -> Vec<GroupAction> {
    (1..=7)
        .map(|i| if i == 4 { GroupAction::xi4(k.clone()) } else { GroupAction::xi(i).expect("listed group") })
        .collect()
}
