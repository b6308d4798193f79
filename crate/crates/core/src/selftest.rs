//! Deterministic invariant suite behind `symlab selftest`.
//!
//! Random inputs come from a ChaCha stream seeded by `SYMLAB_SEED`, so two
//! runs with the same seed print the same report.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conslaw::{
    conserved_vector, convergence_study, divergence_onshell, self_adjointness, variational_derivative,
    ConservedVector, FormalLagrangian, ProbeClass, Rectangle,
};
use crate::errata::errata_report;
use crate::groups::{catalogue, residual_sweep, soliton, transform_solution, GroupAction, Grid};
use crate::lie::{
    adjoint_action, canonical_set, commutator_table, epsilon, invariance_residual, jacobi_sum,
    optimal_representative, replay, standard_basis, AlgebraElement, PDESpec, VectorField, BASIS_NAMES,
};
use crate::reductions::{ode_integrate, series, series_eval, AutonomousOde};
use crate::symcore::{
    int, is_zero, parse, rat, sampling_seed, total_derivative, Certificate, Coord, Dir, Expr, Field, Rational,
};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn p(s: &str) -> Expr {
    parse(s).expect("static expression").normalize()
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// Polynomial of degree ≤ 2 in `vars` with small integer coefficients.
fn random_poly(rng: &mut ChaCha8Rng, vars: &[Expr]) -> Expr {
    let mut out = Expr::int(rng.gen_range(-3..=3));
    for (i, a) in vars.iter().enumerate() {
        out = out + Expr::int(rng.gen_range(-3..=3)) * a.clone();
        for b in &vars[i..] {
            out = out + Expr::int(rng.gen_range(-2..=2)) * a.clone() * b.clone();
        }
    }
    out.normalize()
}

fn random_field(rng: &mut ChaCha8Rng) -> Result<VectorField> {
    let vars = [Expr::coord(Coord::X), Expr::coord(Coord::T), Expr::coord(Coord::u())];
    VectorField::new(random_poly(rng, &vars), random_poly(rng, &vars), random_poly(rng, &vars))
}

fn symmetry_checks(out: &mut Vec<Check>) -> Result<()> {
    let pde = PDESpec::chaffee_infante();
    for (name, g) in [("G1", VectorField::translation_x()), ("G2", VectorField::translation_t())] {
        let r = invariance_residual(&g, &pde)?;
        out.push(check(
            &format!("{name} leaves the equation invariant"),
            r.is_symmetry && r.certificate == Certificate::Canonical,
            format!("on-shell residual {}", r.residual_onshell),
        ));
    }
    let r = invariance_residual(&VectorField::scaling(), &pde)?;
    let want = p("2*λ*(u^3 - u)");
    out.push(check(
        "G3 residual is 2λ(u³ − u) on-shell",
        !r.is_symmetry && is_zero(&(r.residual_onshell.clone() - want))?.zero,
        format!("on-shell residual {}", r.residual_onshell),
    ));
    Ok(())
}

fn algebra_checks(out: &mut Vec<Check>, rng: &mut ChaCha8Rng) -> Result<()> {
    let basis = standard_basis();
    let table = commutator_table(&basis, &BASIS_NAMES)?;
    let mut expected = vec![vec![vec![Rational::zero(); 3]; 3]; 3];
    expected[0][2][0] = int(1);
    expected[2][0][0] = int(-1);
    expected[1][2][1] = int(2);
    expected[2][1][1] = int(-2);
    out.push(check(
        "commutator table",
        table.entries == expected && table.is_antisymmetric() && table.satisfies_jacobi(),
        "[G1, G3] = G1, [G2, G3] = 2G2, others zero",
    ));

    let mut worst = "all sums vanish".to_string();
    let mut ok = true;
    for _ in 0..100 {
        let (a, b, c) = (random_field(rng)?, random_field(rng)?, random_field(rng)?);
        if !jacobi_sum(&a, &b, &c)?.is_zero() {
            ok = false;
            worst = format!("nonzero sum at {a}, {b}, {c}");
            break;
        }
    }
    out.push(check("Jacobi identity on 100 random polynomial fields", ok, worst));

    let eps = epsilon();
    let listed = [
        (2, 0, "exp(ε)", 0usize),
        (2, 1, "exp(2*ε)", 1),
        (0, 2, "-ε", 0),
        (1, 2, "-2*ε", 1),
    ];
    let mut ok = true;
    for (i, j, coef, k) in listed {
        let act = adjoint_action(&basis[i], &basis[j], &eps)?.result;
        let want = if i == 2 {
            basis[j].scale(&p(coef))
        } else {
            basis[j].add(&basis[k].scale(&p(coef)))
        };
        let diff = act.sub(&want);
        for c in diff.components() {
            ok &= is_zero(c)?.zero;
        }
    }
    out.push(check(
        "adjoint actions in closed form",
        ok,
        "e^ε G1, e^{2ε} G2, G3 − εG1, G3 − 2εG2",
    ));

    let mut gap: f64 = 0.0;
    for _ in 0..50 {
        let i = rng.gen_range(1..=3);
        let (e1, e2): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (a, b, ab) = (table.ad_exp(i, e1), table.ad_exp(i, e2), table.ad_exp(i, e1 + e2));
        let zero = table.ad_exp(i, 0.0);
        for r in 0..3 {
            for c in 0..3 {
                let prod: f64 = (0..3).map(|m| a[r][m] * b[m][c]).sum();
                gap = gap.max((prod - ab[r][c]).abs()).max((zero[r][c] - f64::from(u8::from(r == c))).abs());
            }
        }
    }
    out.push(check("adjoint maps compose additively", gap < 1e-12, format!("max deviation {gap:.3e}")));

    let canon = canonical_set();
    let (mut ok, mut scaling_ok, mut replay_gap) = (true, true, 0.0f64);
    for _ in 0..1000 {
        let v = loop {
            let v = AlgebraElement::new(small_rational(rng), small_rational(rng), small_rational(rng));
            if !v.is_zero() {
                break v;
            }
        };
        let r = optimal_representative(&v)?;
        ok &= canon.contains(&r.representative);
        if !v.l[2].is_zero() {
            scaling_ok &= r.representative == canon[0];
        }
        let got = replay(&table, &v, &r.word);
        for (g, w) in got.iter().zip(r.representative.to_f64()) {
            replay_gap = replay_gap.max((g - w).abs());
        }
    }
    out.push(check(
        "optimal representatives of 1000 random elements",
        ok && scaling_ok && replay_gap < 1e-10,
        format!("all in canonical set: {ok}; l3 ≠ 0 gives G3: {scaling_ok}; replay gap {replay_gap:.3e}"),
    ));
    Ok(())
}

fn group_checks(out: &mut Vec<Check>, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut gap: f64 = 0.0;
    for a in catalogue(int(2)) {
        for _ in 0..10 {
            let pt = [rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0)];
            let (e1, e2) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let id = a.at(0.0, pt)?;
            let two = a.at(e1, a.at(e2, pt)?)?;
            let one = a.at(e1 + e2, pt)?;
            for k in 0..3 {
                gap = gap.max((id[k] - pt[k]).abs()).max((two[k] - one[k]).abs());
            }
        }
    }
    out.push(check("group actions: identity and additivity", gap < 1e-10, format!("max deviation {gap:.3e}")));

    let grid: Grid = "-2:2:41".parse()?;
    let mut worst: f64 = 0.0;
    for lambda in [0.5, 2.0] {
        let f = soliton(lambda)?;
        worst = worst.max(residual_sweep(&f, &grid)?.max_residual);
        for id in [1u8, 2] {
            for eps in [0.3, 1.0] {
                let g = transform_solution(&GroupAction::xi(id)?, eps, &f)?;
                worst = worst.max(residual_sweep(&g, &grid)?.max_residual);
            }
        }
    }
    out.push(check(
        "soliton and its translates solve the equation",
        worst < 1e-10,
        format!("max residual {worst:.3e}"),
    ));
    let scaled = transform_solution(&GroupAction::xi(3)?, 1.0, &soliton(2.0)?)?;
    let r = residual_sweep(&scaled, &grid)?.max_residual;
    out.push(check("scaled soliton is not a solution", r > 1e-3, format!("max residual {r:.3e}")));
    Ok(())
}

fn series_checks(out: &mut Vec<Check>) -> Result<()> {
    let cases: [(&str, AutonomousOde, Vec<Rational>); 2] = [
        ("f' + λ(f³ − f) = 0", AutonomousOde::first_order(), vec![rat(1, 2)]),
        ("f'' = λ(f³ − f)", AutonomousOde::second_order(), vec![rat(1, 2), int(0)]),
    ];
    for (name, ode, init) in cases {
        let s = series(&ode, int(1), &init, 20)?;
        let start: Vec<f64> = init.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        let mut gap: f64 = 0.0;
        for end in [0.2, -0.2] {
            let tr = ode_integrate(&ode, 1.0, &start, end, 1e-4)?;
            for i in 1..=20 {
                let eta = end * i as f64 / 20.0;
                gap = gap.max((series_eval(&s, eta) - tr.sample(eta)?).abs());
            }
        }
        out.push(check(
            &format!("series of {name} matches RK4 for |η| ≤ 0.2"),
            gap < 1e-8,
            format!("max gap {gap:.3e}"),
        ));
        let order = s.residual_order();
        out.push(check(
            &format!("truncated series of {name} has residual order ≥ N − 2"),
            order.is_some_and(|o| o >= 18),
            format!("lowest residual order {order:?}"),
        ));
    }
    let mut constant = true;
    for c0 in [int(0), int(1), int(-1)] {
        for (ode, init) in [
            (AutonomousOde::first_order(), vec![c0.clone()]),
            (AutonomousOde::second_order(), vec![c0.clone(), int(0)]),
        ] {
            let s = series(&ode, int(1), &init, 12)?;
            constant &= s.coeffs[1..].iter().all(Zero::is_zero);
        }
    }
    out.push(check("equilibria give constant series", constant, "c0 ∈ {0, 1, −1}"));
    Ok(())
}

fn conslaw_checks(out: &mut Vec<Check>, rng: &mut ChaCha8Rng) -> Result<()> {
    let l = FormalLagrangian::chaffee_infante();
    let jets: Vec<Expr> = ["u", "v", "u_t", "u_x", "v_t", "v_x"].iter().map(|s| p(s)).collect();
    let mut ok = true;
    for _ in 0..20 {
        let (a, b) = (random_poly(rng, &jets), random_poly(rng, &jets));
        let div = total_derivative(&a, Dir::T)? + total_derivative(&b, Dir::X)?;
        ok &= variational_derivative(&div, Field::U)?.is_literal_zero();
    }
    out.push(check("Euler operator annihilates total divergences", ok, "20 random pairs"));

    let mut ok = true;
    let mut fields = vec![VectorField::translation_x(), VectorField::translation_t()];
    for _ in 0..10 {
        let e = AlgebraElement::new(small_rational(rng), small_rational(rng), int(0));
        fields.push(e.to_field());
    }
    for g in &fields {
        let r = divergence_onshell(&conserved_vector(g, &l)?)?;
        ok &= r.conserved && r.certificate == Certificate::Canonical && r.order_independent;
    }
    out.push(check(
        "translation vectors are conserved on-shell",
        ok,
        "G1, G2 and 10 random combinations",
    ));
    let junk = divergence_onshell(&ConservedVector::custom("junk", p("u"), Expr::zero()))?;
    out.push(check(
        "non-conserved control keeps a remainder",
        !junk.conserved,
        format!("remainder {}", junk.remainder),
    ));

    let probes = ProbeClass::ALL.map(self_adjointness);
    let mut verdicts = Vec::new();
    let mut ok = true;
    for r in probes {
        let r = r?;
        ok &= !r.holds;
        verdicts.push(format!("{}: forced {:?}", r.class, r.forced_zero));
    }
    out.push(check("no self-adjointness class holds", ok, verdicts.join("; ")));

    let u = soliton(1.0)?;
    let s = convergence_study(
        &conserved_vector(&VectorField::translation_t(), &l)?,
        &u,
        Rectangle::default(),
        &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0],
    )?;
    let norms: Vec<String> = s.levels.iter().map(|l| format!("{:.3e}", l.max_abs)).collect();
    out.push(check(
        "numeric divergence shrinks under refinement",
        s.ratios.iter().all(|r| *r >= 3.0),
        format!("max norms {}", norms.join(", ")),
    ));
    Ok(())
}

pub fn selftest() -> Result<SelftestReport> {
    let seed = sampling_seed();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    symmetry_checks(&mut checks)?;
    algebra_checks(&mut checks, &mut rng)?;
    group_checks(&mut checks, &mut rng)?;
    series_checks(&mut checks)?;
    conslaw_checks(&mut checks, &mut rng)?;
    let errata = errata_report()?;
    checks.push(check(
        "errata report builds",
        !errata.entries.is_empty(),
        format!("{} entries, {} differ", errata.entries.len(), errata.differing),
    ));
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(SelftestReport { seed, failed: checks.len() - passed, passed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let r = selftest().unwrap();
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(r.checks.len() > 20);
    }
}
