use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::action::{epsilon_coord, GroupAction};
use crate::lie::PDESpec;
use crate::symcore::{
    eval_numeric, expr_text, parse, partial_derivative, substitute, substitute_one, Bindings, Coord,
    Expr,
};
use crate::{Error, Result};

/// A closed-form candidate solution `u(x, t)` with numeric parameter values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionFn {
    pub name: String,
    #[serde(with = "expr_text")]
    pub expr: Expr,
    /// Values for λ, group parameters and any other constants in `expr`.
    #[serde(serialize_with = "serialize_params")]
    pub params: BTreeMap<Coord, f64>,
    /// Set when the residual is known to vanish identically.
    pub exact: bool,
}

fn serialize_params<S: serde::Serializer>(
    p: &BTreeMap<Coord, f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let named: BTreeMap<String, f64> = p.iter().map(|(c, v)| (c.to_string(), *v)).collect();
    serde::Serialize::serialize(&named, s)
}

/// `u = −½(1 + tanh(δx/2 + 3λt/4))`, `δ = √(λ/2)`, with λ left symbolic.
pub fn soliton_expr() -> Expr {
    parse("-(1 + tanh(sqrt(λ/2)*x/2 + 3*λ*t/4))/2").expect("static expression").normalize()
}

/// The tanh front at a given λ > 0.
pub fn soliton(lambda: f64) -> Result<SolutionFn> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("soliton needs λ > 0, got {lambda}")));
    }
    Ok(SolutionFn {
        name: "soliton".into(),
        expr: soliton_expr(),
        params: BTreeMap::from([(Coord::Lambda, lambda)]),
        exact: true,
    })
}

impl SolutionFn {
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let mut point = self.params.clone();
        point.insert(Coord::X, x);
        point.insert(Coord::T, t);
        eval_numeric(&self.expr, &point)
    }

    /// `u_t − u_xx + λ(u³ − u)` with `u` replaced by this function.
    pub fn residual_expr(&self) -> Result<Expr> {
        let u = &self.expr;
        let ut = partial_derivative(u, &Coord::T)?;
        let uxx = partial_derivative(&partial_derivative(u, &Coord::X)?, &Coord::X)?;
        let pde = PDESpec::chaffee_infante();
        let mut b = Bindings::new();
        b.insert(Coord::u(), u.clone());
        b.insert(Coord::u_jet("t"), ut);
        b.insert(Coord::u_jet("xx"), uxx);
        substitute(&pde.residual, &b)
    }
}

/// Pulls a solution back through a group: the new solution at `(x, t)` is the
/// image of `F` at the preimage of `(x, t)`. The inverse comes from the map
/// itself, never from a separately written formula.
pub fn transform_solution(a: &GroupAction, eps: f64, f: &SolutionFn) -> Result<SolutionFn> {
    if !a.is_fibre_preserving() {
        return Err(Error::InvalidArgument(format!("{} mixes u into x or t", a.id)));
    }
    // Each transform gets its own parameter symbol so that chains stay apart.
    let taken = f.params.keys().filter(|c| c.to_string().starts_with('ε')).count();
    let sym = if taken == 0 { epsilon_coord() } else { Coord::constant(&format!("ε{}", taken + 1)) };
    let rename = |e: &Expr| substitute_one(e, epsilon_coord(), Expr::coord(sym.clone()));
    let inv = a.inverse();
    let (px, pt) = (rename(&inv.x_bar), rename(&inv.t_bar));
    let mut pre = Bindings::new();
    pre.insert(Coord::X, px.clone());
    pre.insert(Coord::T, pt.clone());
    let pulled = substitute(&f.expr, &pre)?;
    // `u` is bound on its own: the substitution resolves chains, which would
    // move the already pulled-back `x` and `t` a second time.
    let image = substitute(&rename(&a.u_bar), &pre)?;
    let expr = substitute_one(&image, Coord::u(), pulled).normalize();
    let mut params = f.params.clone();
    params.insert(sym, eps);
    Ok(SolutionFn { name: format!("{}[{}]", a.id, f.name), expr, params, exact: false })
}

/// Square grid over `[lo, hi]²` with `n` points per side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn nodes(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + h * i as f64).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `lo:hi:n`, e.g. `-2:2:41`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("grid `{s}` is not lo:hi:n"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else { return Err(bad()) };
        let g = Grid {
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
            n: n.trim().parse().map_err(|_| bad())?,
        };
        if g.n == 0 || !(g.lo <= g.hi) {
            return Err(bad());
        }
        Ok(g)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualSweep {
    pub solution: String,
    pub grid: Grid,
    pub max_residual: f64,
    pub mean_residual: f64,
    /// Where the largest residual occurs.
    pub worst: GridPoint,
    /// Corners and centre of the grid.
    pub sample_values: Vec<GridPoint>,
}

/// Every grid node in row-major order (t outer, x inner).
pub fn grid_values(f: &SolutionFn, grid: &Grid) -> Result<Vec<GridPoint>> {
    let r = f.residual_expr()?.to_poly();
    let field = f.expr.to_poly();
    let mut params = f.params.clone();
    let nodes = grid.nodes();
    let mut out = Vec::with_capacity(nodes.len() * nodes.len());
    for &t in &nodes {
        for &x in &nodes {
            params.insert(Coord::X, x);
            params.insert(Coord::T, t);
            let env = |c: &Coord| params.get(c).copied().ok_or_else(|| Error::Unbound(c.clone()));
            let u = field.eval(&env)?;
            let residual = r.eval(&env)?.abs();
            out.push(GridPoint { x, t, u, residual });
        }
    }
    Ok(out)
}

pub fn residual_sweep(f: &SolutionFn, grid: &Grid) -> Result<ResidualSweep> {
    let values = grid_values(f, grid)?;
    let worst = values
        .iter()
        .fold(&values[0], |w, p| if p.residual > w.residual { p } else { w })
        .clone();
    let mean = values.iter().map(|p| p.residual).sum::<f64>() / values.len() as f64;
    let n = grid.n;
    let picks = [0, n - 1, (n / 2) * n + n / 2, n * (n - 1), n * n - 1];
    let mut sample_values: Vec<GridPoint> = Vec::new();
    for i in picks {
        if !sample_values.contains(&values[i]) {
            sample_values.push(values[i].clone());
        }
    }
    Ok(ResidualSweep {
        solution: f.name.clone(),
        grid: *grid,
        max_residual: worst.residual,
        mean_residual: mean,
        worst,
        sample_values,
    })
}
