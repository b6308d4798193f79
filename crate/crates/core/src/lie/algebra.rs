use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::field::{commutator, VectorField};
use crate::symcore::{int, parse, partial_derivative, rational_str, substitute_one, Coord, Expr, Monomial, Poly, Rational};
use crate::{Error, Result};

/// `l¹G₁ + l²G₂ + l³G₃` over the basis G₁ = ∂x, G₂ = ∂t, G₃ = x∂x + 2t∂t.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraElement {
    #[serde(with = "rational_triple")]
    pub l: [Rational; 3],
}

mod rational_triple {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct R(#[serde(with = "super::rational_str")] Rational);

    pub fn serialize<S: Serializer>(l: &[Rational; 3], s: S) -> Result<S::Ok, S::Error> {
        [R(l[0].clone()), R(l[1].clone()), R(l[2].clone())].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Rational; 3], D::Error> {
        let [a, b, c] = <[R; 3]>::deserialize(d)?;
        Ok([a.0, b.0, c.0])
    }
}

impl AlgebraElement {
    pub fn new(l1: Rational, l2: Rational, l3: Rational) -> Self {
        AlgebraElement { l: [l1, l2, l3] }
    }

    pub fn from_ints(l1: i64, l2: i64, l3: i64) -> Self {
        AlgebraElement::new(int(l1), int(l2), int(l3))
    }

    /// The `i`-th basis element, 1-based.
    pub fn basis(i: usize) -> Self {
        let mut l = [int(0), int(0), int(0)];
        l[i - 1] = int(1);
        AlgebraElement { l }
    }

    pub fn is_zero(&self) -> bool {
        self.l.iter().all(Zero::is_zero)
    }

    pub fn to_field(&self) -> VectorField {
        standard_basis()
            .iter()
            .zip(&self.l)
            .fold(VectorField::zero(), |acc, (g, c)| acc.add(&g.scale(&Expr::num(c.clone()))))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        self.l.clone().map(|c| c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.l.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = format!("G{}", i + 1);
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for AlgebraElement {
    type Err = Error;

    /// Rational combination of `G1`, `G2`, `G3`, e.g. `2*G1 - G3/3`.
    fn from_str(s: &str) -> Result<Self> {
        let e = parse(s)?.normalize();
        let names = super::BASIS_NAMES.map(Coord::constant);
        if let Some(bad) = e.coords().into_iter().find(|c| !names.contains(c)) {
            return Err(Error::InvalidArgument(format!("`{s}` mentions `{bad}`; expected a combination of G1, G2, G3")));
        }
        let nonlinear = || Error::InvalidArgument(format!("`{s}` is not a rational linear combination of G1, G2, G3"));
        let mut l = [int(0), int(0), int(0)];
        for (slot, name) in l.iter_mut().zip(&names) {
            *slot = partial_derivative(&e, name)?.as_rational().ok_or_else(nonlinear)?;
        }
        let v = AlgebraElement { l };
        let rebuilt = names.iter().zip(&v.l).fold(Expr::zero(), |acc, (n, c)| acc + Expr::num(c.clone()) * Expr::coord(n.clone()));
        if !(e - rebuilt).normalize().is_literal_zero() {
            return Err(nonlinear());
        }
        Ok(v)
    }
}

/// `c₁G₁ + c₂G₂ + c₃G₃` written with the symbols `G1`, `G2`, `G3`, for a
/// field in their span.
pub fn basis_combination(f: &VectorField) -> Result<Expr> {
    let c3 = partial_derivative(&f.omega, &Coord::X)?;
    let c1 = substitute_one(&f.omega, Coord::X, Expr::zero());
    let c2 = substitute_one(&f.psi, Coord::T, Expr::zero());
    Ok((c1 * Expr::constant("G1") + c2 * Expr::constant("G2") + c3 * Expr::constant("G3")).normalize())
}

/// The field with the coefficients of `G1`, `G2`, `G3` in `e`.
pub fn combination_field(e: &Expr) -> Result<VectorField> {
    let basis = standard_basis();
    let mut out = VectorField::zero();
    for (g, name) in basis.iter().zip(super::BASIS_NAMES) {
        out = out.add(&g.scale(&partial_derivative(e, &Coord::constant(name))?));
    }
    Ok(out)
}

/// G₁ = ∂x, G₂ = ∂t, G₃ = x∂x + 2t∂t.
pub fn standard_basis() -> [VectorField; 3] {
    [VectorField::translation_x(), VectorField::translation_t(), VectorField::scaling()]
}

/// Writes `target` as a constant-coefficient combination of `basis`, if
/// possible. Coefficients are matched monomial by monomial.
pub fn decompose(target: &VectorField, basis: &[VectorField]) -> Option<Vec<Rational>> {
    let comps = |f: &VectorField| f.components().map(Expr::to_poly);
    let basis_polys: Vec<[Poly; 3]> = basis.iter().map(comps).collect();
    let target_polys = comps(target);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for k in 0..3 {
        let mut monomials: BTreeSet<Monomial> = BTreeSet::new();
        for p in basis_polys.iter().map(|b| &b[k]).chain([&target_polys[k]]) {
            monomials.extend(p.terms().map(|(m, _)| m.clone()));
        }
        for m in monomials {
            let mut row: Vec<Rational> = basis_polys.iter().map(|b| b[k].coefficient(&m)).collect();
            row.push(target_polys[k].coefficient(&m));
            rows.push(row);
        }
    }
    solve(rows, basis.len())
}

/// Solves an augmented system exactly. Free unknowns are set to zero;
/// `None` when inconsistent.
fn solve(mut rows: Vec<Vec<Rational>>, n: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = Rational::one() / &rows[r][col];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..=n {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][n].clone();
    }
    Some(x)
}

/// Structure constants of a closed basis: `[G_i, G_j] = Σ_k C^k_ij G_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorTable {
    pub names: Vec<String>,
    /// `entries[i][j]` holds the coefficients of `[G_i, G_j]`.
    #[serde(serialize_with = "serialize_entries")]
    pub entries: Vec<Vec<Vec<Rational>>>,
}

fn serialize_entries<S: serde::Serializer>(
    e: &[Vec<Vec<Rational>>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<Vec<String>>> = e
        .iter()
        .map(|row| row.iter().map(|c| c.iter().map(|r| r.to_string()).collect()).collect())
        .collect();
    serde::Serialize::serialize(&text, s)
}

pub fn commutator_table(basis: &[VectorField], names: &[&str]) -> Result<CommutatorTable> {
    let n = basis.len();
    let mut entries = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let bracket = commutator(&basis[i], &basis[j])?;
            entries[i][j] = decompose(&bracket, basis)
                .ok_or_else(|| Error::NonClosure(format!("[{}, {}] = {bracket}", names[i], names[j])))?;
        }
    }
    Ok(CommutatorTable { names: names.iter().map(|s| s.to_string()).collect(), entries })
}

impl CommutatorTable {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// `C^k_ij`, 1-based indices.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> &Rational {
        &self.entries[i - 1][j - 1][k - 1]
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.entries[i][j].iter().zip(&self.entries[j][i]).all(|(a, b)| (a + b).is_zero())
            })
        })
    }

    /// Jacobi identity on the structure constants for every basis triple.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim();
        let bracket = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); n];
            for i in 0..n {
                for j in 0..n {
                    let w = &a[i] * &b[j];
                    if w.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        out[k] += &w * &self.entries[i][j][k];
                    }
                }
            }
            out
        };
        let e = |i: usize| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t1 = bracket(&e(i), &bracket(&e(j), &e(k)));
                    let t2 = bracket(&e(j), &bracket(&e(k), &e(i)));
                    let t3 = bracket(&e(k), &bracket(&e(i), &e(j)));
                    if (0..n).any(|c| !(&t1[c] + &t2[c] + &t3[c]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Matrix of `ad(G_i)` acting on coefficient vectors, 1-based `i`.
    pub fn ad_matrix(&self, i: usize) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for (j, col) in self.entries[i - 1].iter().enumerate() {
            for (k, c) in col.iter().enumerate() {
                m[k][j] = c.to_f64().unwrap_or(f64::NAN);
            }
        }
        m
    }

    /// `Ad(exp(ε G_i))` on coefficient vectors, as `exp(−ε ad G_i)` summed
    /// until the terms are negligible.
    pub fn ad_exp(&self, i: usize, eps: f64) -> Vec<Vec<f64>> {
        let n = self.dim();
        let a = self.ad_matrix(i);
        let mut result: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|c| f64::from(u8::from(r == c))).collect()).collect();
        let mut term = result.clone();
        for k in 1..200 {
            let mut next = vec![vec![0.0; n]; n];
            for r in 0..n {
                for c in 0..n {
                    next[r][c] = (0..n).map(|m| a[r][m] * term[m][c]).sum::<f64>() * (-eps) / k as f64;
                }
            }
            term = next;
            let mut size: f64 = 0.0;
            for r in 0..n {
                for c in 0..n {
                    result[r][c] += term[r][c];
                    size = size.max(term[r][c].abs());
                }
            }
            if size < 1e-18 {
                break;
            }
        }
        result
    }
}

/// Terms of the Lie series before the closed form is recognised.
pub const LIE_SERIES_CAP: usize = 16;

/// How the Lie series of an adjoint action was summed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeriesForm {
    /// `ad(A)^n B = 0` from `terms` on.
    Terminating { terms: usize },
    /// `ad(A)^{m+1} B = c·ad(A)^m B` with `m = from`.
    Geometric {
        from: usize,
        #[serde(with = "rational_str")]
        rate: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointAction {
    pub result: VectorField,
    pub form: SeriesForm,
}

/// The symbol ε used in closed-form adjoint actions.
pub fn epsilon() -> Expr {
    Expr::constant("ε")
}

/// `c` with `b = c·a`, if such a rational exists.
fn proportional(b: &VectorField, a: &VectorField) -> Option<Rational> {
    let (pa, pb): (Vec<Poly>, Vec<Poly>) =
        (a.components().map(Expr::to_poly).to_vec(), b.components().map(Expr::to_poly).to_vec());
    let (k, lead) = pa.iter().enumerate().find_map(|(k, p)| p.terms().next_back().map(|t| (k, t)))?;
    let c = pb[k].coefficient(lead.0) / lead.1;
    pa.iter().zip(&pb).all(|(x, y)| y.sub(&x.scale(&c)).is_zero()).then_some(c)
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).map(int).fold(Rational::one(), |a, b| a * b)
}

/// `Ad(exp(εA))B = B − ε[A,B] + ε²/2 [A,[A,B]] − …` in closed form.
pub fn adjoint_action(a: &VectorField, b: &VectorField, eps: &Expr) -> Result<AdjointAction> {
    let mut terms = vec![b.clone()];
    let weight = |n: usize| (-eps).powi(n as i32) * Expr::num(Rational::one() / factorial(n));
    for n in 0..LIE_SERIES_CAP {
        let next = commutator(a, &terms[n])?;
        if next.is_zero() {
            let result = terms
                .iter()
                .enumerate()
                .fold(VectorField::zero(), |acc, (k, t)| acc.add(&t.scale(&weight(k))));
            return Ok(AdjointAction { result, form: SeriesForm::Terminating { terms: n + 1 } });
        }
        if let Some(c) = proportional(&next, &terms[n]) {
            // Σ_{k≥n} (−ε)^k c^{k−n}/k! = c^{−n} (e^{−cε} − Σ_{k<n} (−cε)^k/k!).
            let m = n;
            let ce = Expr::num(c.clone()) * eps;
            let head: Expr = Expr::sum((0..m).map(|k| (-&ce).powi(k as i32) * Expr::num(Rational::one() / factorial(k))));
            let tail = Expr::num(c.clone()).powi(-(m as i32)) * (Expr::exp(-ce) - head);
            let mut result = terms[m].scale(&tail);
            for (k, t) in terms.iter().enumerate().take(m) {
                result = result.add(&t.scale(&weight(k)));
            }
            return Ok(AdjointAction { result, form: SeriesForm::Geometric { from: m, rate: c } });
        }
        terms.push(next);
    }
    Err(Error::SeriesCap(LIE_SERIES_CAP))
}

/// `Ad(exp(ε G_i))` on an algebra element, by linearity over the basis.
/// Every basis element has a terminating or geometric Lie series, while a
/// mixture of eigen-directions such as G₁ − G₂ under G₃ has neither.
pub fn adjoint_element(generator: usize, v: &AlgebraElement, eps: &Expr) -> Result<VectorField> {
    let basis = standard_basis();
    let a = &basis[generator - 1];
    let mut out = VectorField::zero();
    for (g, c) in basis.iter().zip(&v.l) {
        if c.is_zero() {
            continue;
        }
        let r = adjoint_action(a, g, eps)?;
        out = out.add(&r.result.scale(&Expr::num(c.clone())));
    }
    Ok(out)
}

/// Evaluates the coefficients of a field whose components are constants in
/// (x, t, u) once ε is bound, decomposed over the standard basis.
pub fn field_coefficients_at(field: &VectorField, eps: f64) -> Option<[f64; 3]> {
    // Coefficients of ∂x and ∂t are affine in x and t for this algebra.
    let env = |x: f64, t: f64| {
        move |c: &Coord| -> Result<f64> {
            match c {
                Coord::X => Ok(x),
                Coord::T => Ok(t),
                Coord::Const(name) if name == "ε" => Ok(eps),
                other => Err(Error::Unbound(other.clone())),
            }
        }
    };
    let w0 = field.omega.to_poly().eval(&env(0.0, 0.0)).ok()?;
    let w1 = field.omega.to_poly().eval(&env(1.0, 0.0)).ok()?;
    let p0 = field.psi.to_poly().eval(&env(0.0, 0.0)).ok()?;
    let l3 = w1 - w0;
    Some([w0, p0, l3])
}
