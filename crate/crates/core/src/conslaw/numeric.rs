use std::collections::BTreeMap;

use serde::Serialize;

use super::vector::ConservedVector;
use crate::groups::SolutionFn;
use crate::symcore::{partial_derivative, substitute, Bindings, Coord, Expr, Field, Jet, Poly};
use crate::{Error, Result};

/// A space-time rectangle `[x_lo, x_hi] × [t_lo, t_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rectangle {
    pub x: (f64, f64),
    pub t: (f64, f64),
}

impl Default for Rectangle {
    fn default() -> Self {
        Rectangle { x: (-2.0, 2.0), t: (0.0, 1.0) }
    }
}

/// Nodes of `[lo, hi]` at spacing close to `h`.
fn nodes(lo: f64, hi: f64, h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0 && hi > lo && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("spacing {h} on [{lo}, {hi}]")));
    }
    let n = ((hi - lo) / h).round().max(4.0) as usize;
    Ok((0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect())
}

fn lambda_of(u: &SolutionFn) -> Result<f64> {
    u.params
        .get(&Coord::Lambda)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("solution `{}` does not fix λ", u.name)))
}

/// Numeric solution of `λ(3u² − 1)v − v_t − v_xx = 0` along a given `u`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdjointSolution {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    /// `v[j][i]` at `(x[i], t[j])`.
    pub v: Vec<Vec<f64>>,
}

/// Thomas algorithm for a tridiagonal system; `lower[0]` and `upper[n−1]`
/// are ignored.
fn tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

/// Width added on each side of the x-range for the adjoint solve. Zero-flux
/// ends are incompatible with `v = 1` wherever `u_x ≠ 0`, and the resulting
/// corner layer must stay far from where the divergence is measured.
pub const SOLVE_PADDING: f64 = 6.0;

/// Crank–Nicolson in `s = t_hi − t` for `v_s = v_xx − λ(3u² − 1)v` with
/// `v = 1` at `t_hi` and zero-flux ends, time step equal to the space step.
/// The x-range is widened by [`SOLVE_PADDING`] on both sides.
pub fn solve_adjoint(u: &SolutionFn, rect: Rectangle, h: f64) -> Result<AdjointSolution> {
    let lambda = lambda_of(u)?;
    let x = nodes(rect.x.0 - SOLVE_PADDING, rect.x.1 + SOLVE_PADDING, h)?;
    let t = nodes(rect.t.0, rect.t.1, h)?;
    let (nx, hx) = (x.len(), x[1] - x[0]);
    let k = t[1] - t[0];
    let r = k / (hx * hx);
    let field = u.expr.to_poly();
    let potential = |j: usize| -> Result<Vec<f64>> {
        x.iter()
            .map(|&xi| {
                let env = |c: &Coord| match c {
                    Coord::X => Ok(xi),
                    Coord::T => Ok(t[j]),
                    _ => u.params.get(c).copied().ok_or_else(|| Error::Unbound(c.clone())),
                };
                Ok(lambda * (3.0 * field.eval(&env)?.powi(2) - 1.0))
            })
            .collect()
    };
    // The ghost node at each end mirrors its neighbour.
    let apply = |v: &[f64], c: &[f64], sign: f64| -> Vec<f64> {
        (0..nx)
            .map(|i| {
                let left = if i == 0 { v[1] } else { v[i - 1] };
                let right = if i == nx - 1 { v[nx - 2] } else { v[i + 1] };
                let lap = (left - 2.0 * v[i] + right) * r;
                v[i] + sign * 0.5 * (lap - k * c[i] * v[i])
            })
            .collect()
    };
    let mut out = vec![Vec::new(); t.len()];
    let last = t.len() - 1;
    out[last] = vec![1.0; nx];
    let mut c_now = potential(last)?;
    for j in (0..last).rev() {
        let c_next = potential(j)?;
        let rhs = apply(&out[j + 1], &c_now, 1.0);
        let diag: Vec<f64> = c_next.iter().map(|c| 1.0 + r + 0.5 * k * c).collect();
        let mut lower = vec![-0.5 * r; nx];
        let mut upper = vec![-0.5 * r; nx];
        upper[0] = -r;
        lower[nx - 1] = -r;
        let v = tridiagonal(&lower, &diag, &upper, &rhs);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::BlowUp { last_good: t[j + 1] });
        }
        out[j] = v;
        c_now = c_next;
    }
    Ok(AdjointSolution { lambda, x, t, v: out })
}

/// Jets of `v` the finite-difference stencil provides.
const V_JETS: [(u8, u8); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

impl AdjointSolution {
    /// Centered differences at an interior node.
    fn jet(&self, i: usize, j: usize, jet: Jet) -> f64 {
        let v = &self.v;
        let hx = self.x[1] - self.x[0];
        let k = self.t[1] - self.t[0];
        match (jet.t, jet.x) {
            (0, 0) => v[j][i],
            (0, 1) => (v[j][i + 1] - v[j][i - 1]) / (2.0 * hx),
            (0, 2) => (v[j][i + 1] - 2.0 * v[j][i] + v[j][i - 1]) / (hx * hx),
            (1, 0) => (v[j + 1][i] - v[j - 1][i]) / (2.0 * k),
            (2, 0) => (v[j + 1][i] - 2.0 * v[j][i] + v[j - 1][i]) / (k * k),
            _ => (v[j + 1][i + 1] - v[j + 1][i - 1] - v[j - 1][i + 1] + v[j - 1][i - 1]) / (4.0 * hx * k),
        }
    }
}

/// Replaces every `u`-jet by the matching partial derivative of `u`.
fn along_solution(e: &Expr, u: &SolutionFn) -> Result<Expr> {
    let mut b = Bindings::new();
    for c in e.coords() {
        let Some((Field::U, jet)) = c.jet() else { continue };
        let mut d = u.expr.clone();
        for _ in 0..jet.t {
            d = partial_derivative(&d, &Coord::T)?;
        }
        for _ in 0..jet.x {
            d = partial_derivative(&d, &Coord::X)?;
        }
        b.insert(c, d);
    }
    substitute(e, &b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericDivergence {
    pub h: f64,
    pub k: f64,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub nodes: usize,
}

/// Centered-difference divergence of `T` with `u` exact and `v` from
/// [`solve_adjoint`], over nodes of the rectangle at least two steps from
/// its initial and final times.
pub fn numeric_divergence(tv: &ConservedVector, u: &SolutionFn, rect: Rectangle, h: f64) -> Result<NumericDivergence> {
    let adj = solve_adjoint(u, rect, h)?;
    let comps: Vec<Poly> = [&tv.tt, &tv.tx]
        .into_iter()
        .map(|e| along_solution(e, u).map(|e| e.to_poly()))
        .collect::<Result<_>>()?;
    let v_coords: Vec<(Coord, Jet)> = V_JETS
        .iter()
        .map(|&(t, x)| (Coord::Dep(Field::V, Jet::new(t, x)), Jet::new(t, x)))
        .collect();
    let (nx, nt) = (adj.x.len(), adj.t.len());
    let slack = 1e-9 * (rect.x.1 - rect.x.0);
    let inside: Vec<usize> =
        (0..nx).filter(|&i| adj.x[i] >= rect.x.0 - slack && adj.x[i] <= rect.x.1 + slack).collect();
    let (first, last) = (inside[0], inside[inside.len() - 1]);
    // T^t and T^x on the rectangle plus one node on each side.
    let mut tt = vec![vec![0.0; nx]; nt];
    let mut tx = vec![vec![0.0; nx]; nt];
    for j in 1..nt - 1 {
        for i in first - 1..=last + 1 {
            let mut point: BTreeMap<Coord, f64> = u.params.clone();
            point.insert(Coord::X, adj.x[i]);
            point.insert(Coord::T, adj.t[j]);
            for (c, jet) in &v_coords {
                point.insert(c.clone(), adj.jet(i, j, *jet));
            }
            let env = |c: &Coord| point.get(c).copied().ok_or_else(|| Error::Unbound(c.clone()));
            tt[j][i] = comps[0].eval(&env)?;
            tx[j][i] = comps[1].eval(&env)?;
        }
    }
    let (hx, k) = (adj.x[1] - adj.x[0], adj.t[1] - adj.t[0]);
    let (mut max_abs, mut sum, mut count) = (0.0f64, 0.0, 0usize);
    for j in 2..nt - 2 {
        for i in first..=last {
            let d = (tt[j + 1][i] - tt[j - 1][i]) / (2.0 * k) + (tx[j][i + 1] - tx[j][i - 1]) / (2.0 * hx);
            max_abs = max_abs.max(d.abs());
            sum += d.abs();
            count += 1;
        }
    }
    Ok(NumericDivergence { h: hx, k, max_abs, mean_abs: sum / count as f64, nodes: count })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub generator: String,
    pub lambda: f64,
    pub levels: Vec<NumericDivergence>,
    /// `max_abs` at one spacing over the next finer one.
    pub ratios: Vec<f64>,
}

pub fn convergence_study(
    tv: &ConservedVector,
    u: &SolutionFn,
    rect: Rectangle,
    spacings: &[f64],
) -> Result<ConvergenceStudy> {
    let levels = spacings.iter().map(|&h| numeric_divergence(tv, u, rect, h)).collect::<Result<Vec<_>>>()?;
    let ratios = levels.windows(2).map(|w| w[0].max_abs / w[1].max_abs).collect();
    Ok(ConvergenceStudy { generator: tv.generator.clone(), lambda: lambda_of(u)?, levels, ratios })
}
