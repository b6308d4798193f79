use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::number::parse_rational;
use super::{
    to_json, AdjointArgs, CheckKind, ConslawArgs, Emit, OdeKind, OptimalArgs, Outcome, ProbeArg, ReduceArgs,
    SeriesArgs, SolutionKind, SymmetriesArgs, TransformArgs,
};
use crate::conslaw::{
    conserved_vector, convergence_study, divergence_onshell, self_adjointness, ConservedVector,
    FormalLagrangian, ProbeClass, Rectangle,
};
use crate::errata::errata_report;
use crate::groups::{grid_values, residual_sweep, soliton, transform_solution, GroupAction, Grid};
use crate::lie::{
    adjoint_action, basis_combination, canonical_set, commutator_table, epsilon, field_coefficients_at,
    invariance_residual, optimal_representative, replay, standard_basis, AlgebraElement, PDESpec,
    VectorField, BASIS_NAMES,
};
use crate::reductions::{
    ode_integrate, reduce as reduce_group, series as series_of, AutonomousOde, Coefficient,
    SeriesSolution,
};
use crate::selftest::selftest as run_selftest;
use crate::symcore::{parse, sampling_seed, Rational};
use crate::{Error, Result};

/// RK4 step used as the reference for series comparisons.
const RK4_STEP: f64 = 1e-4;
/// Points per side of zero in a series comparison.
const COMPARE_POINTS: usize = 10;
/// Largest replay gap accepted for optimal-system words.
const REPLAY_TOL: f64 = 1e-10;
/// Smallest acceptable max-norm ratio per halving in the numeric check.
const MIN_RATIO: f64 = 3.0;

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn csv_text(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
}

fn field_from_text(text: &str) -> Result<VectorField> {
    let parts: Vec<&str> = text.split(';').collect();
    let [omega, psi, chi] = parts.as_slice() else {
        return Err(Error::InvalidArgument(format!("field `{text}` is not `ω;ψ;χ`")));
    };
    VectorField::new(parse(omega)?, parse(psi)?, parse(chi)?)
}

pub(crate) fn symmetries(a: &SymmetriesArgs) -> Result<Outcome> {
    let field = match (&a.candidate, &a.field) {
        (Some(c), _) => c.parse::<AlgebraElement>()?.to_field(),
        (None, Some(f)) => field_from_text(f)?,
        (None, None) => return Err(Error::InvalidArgument("give --candidate or --field".into())),
    };
    let r = invariance_residual(&field, &PDESpec::chaffee_infante())?;
    let mut result = to_json(&r);
    result["residual_onshell_tree"] = to_json(&r.residual_onshell);
    Ok(Outcome::ok(result))
}

pub(crate) fn table() -> Result<Outcome> {
    let t = commutator_table(&standard_basis(), &BASIS_NAMES)?;
    let mut brackets = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let [c1, c2, c3] = [0, 1, 2].map(|k| t.entries[i][j][k].clone());
            let value = AlgebraElement::new(c1, c2, c3);
            brackets.push(format!("[{}, {}] = {value}", BASIS_NAMES[i], BASIS_NAMES[j]));
        }
    }
    let mut result = to_json(&t);
    result["brackets"] = to_json(&brackets);
    result["antisymmetric"] = json!(t.is_antisymmetric());
    result["jacobi"] = json!(t.satisfies_jacobi());
    Ok(Outcome::ok(result))
}

#[derive(Serialize)]
struct AdjointRow {
    generator: &'static str,
    target: &'static str,
    /// `Ad(exp(ε generator)) target` over the basis.
    result: String,
    form: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    at_eps: Option<[f64; 3]>,
}

pub(crate) fn adjoint(a: &AdjointArgs) -> Result<Outcome> {
    let basis = standard_basis();
    let eps = epsilon();
    let mut rows = Vec::new();
    for (i, gi) in basis.iter().enumerate() {
        for (j, gj) in basis.iter().enumerate() {
            let act = adjoint_action(gi, gj, &eps)?;
            let at_eps = match a.eps {
                Some(e) => Some(field_coefficients_at(&act.result, e).ok_or_else(|| {
                    Error::Domain(format!("Ad(exp({e} {})) {} has no numeric coefficients", BASIS_NAMES[i], BASIS_NAMES[j]))
                })?),
                None => None,
            };
            rows.push(AdjointRow {
                generator: BASIS_NAMES[i],
                target: BASIS_NAMES[j],
                result: basis_combination(&act.result)?.to_string(),
                form: to_json(&act.form),
                at_eps,
            });
        }
    }
    Ok(Outcome::ok(json!({ "rows": rows })))
}

fn random_element(rng: &mut ChaCha8Rng) -> AlgebraElement {
    let mut r = || Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into());
    loop {
        let v = AlgebraElement::new(r(), r(), r());
        if !v.is_zero() {
            return v;
        }
    }
}

fn replay_gap(v: &AlgebraElement, word: &[crate::lie::Move], representative: &AlgebraElement) -> Result<f64> {
    let table = commutator_table(&standard_basis(), &BASIS_NAMES)?;
    let got = replay(&table, v, word);
    Ok(got.iter().zip(representative.to_f64()).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max))
}

pub(crate) fn optimal(a: &OptimalArgs) -> Result<Outcome> {
    let canon = canonical_set();
    let mut result = json!({ "canonical_set": canon.iter().map(ToString::to_string).collect::<Vec<_>>() });
    let mut passed = true;
    if let Some(text) = &a.element {
        let v: AlgebraElement = text.parse()?;
        let r = optimal_representative(&v)?;
        let gap = replay_gap(&v, &r.word, &r.representative)?;
        passed &= gap < REPLAY_TOL;
        let mut entry = to_json(&r);
        entry["representative_text"] = json!(r.representative.to_string());
        entry["replay_gap"] = json!(gap);
        result["element"] = entry;
    }
    if a.samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling_seed());
        let (mut in_set, mut scaling_to_g3, mut worst) = (true, true, 0.0f64);
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for _ in 0..a.samples {
            let v = random_element(&mut rng);
            let r = optimal_representative(&v)?;
            in_set &= canon.contains(&r.representative);
            if !v.l[2].is_zero() {
                scaling_to_g3 &= r.representative == canon[0];
            }
            worst = worst.max(replay_gap(&v, &r.word, &r.representative)?);
            *counts.entry(r.representative.to_string()).or_default() += 1;
        }
        passed &= in_set && scaling_to_g3 && worst < REPLAY_TOL;
        result["samples"] = json!({
            "seed": sampling_seed(),
            "count": a.samples,
            "all_in_canonical_set": in_set,
            "scaling_lands_on_g3": scaling_to_g3,
            "max_replay_gap": worst,
            "representatives": counts,
        });
    }
    Ok(Outcome::checked(result, passed))
}

fn group_action(name: &str, k: Option<&String>, q: Option<&String>) -> Result<GroupAction> {
    if name == "Xiq" || name == "Ξq" {
        let q = q.ok_or_else(|| Error::InvalidArgument("Xiq needs --q".into()))?;
        return GroupAction::xi_q(parse(q)?);
    }
    let k = k.map(|k| parse_rational(k)).transpose()?;
    GroupAction::from_name(name, k)
}

pub(crate) fn transform(a: &TransformArgs) -> Result<Outcome> {
    let lambda = to_f64(&parse_rational(&a.lambda)?);
    let grid: Grid = a.grid.parse()?;
    let action = group_action(&a.action, a.k.as_ref(), a.q.as_ref())?;
    let base = match a.solution {
        SolutionKind::Soliton => soliton(lambda)?,
    };
    let moved = transform_solution(&action, a.eps, &base)?;
    let sweep = residual_sweep(&moved, &grid)?;
    let passed = a.tol.map_or(true, |tol| sweep.max_residual <= tol);
    if a.emit == Emit::Csv {
        let header = ["x", "t", "u", "residual"].map(String::from).to_vec();
        let rows = grid_values(&moved, &grid)?
            .into_iter()
            .map(|p| [p.x, p.t, p.u, p.residual].iter().map(f64::to_string).collect());
        let mut out = Outcome::checked(Value::Null, passed);
        out.csv = Some(csv_text(std::iter::once(header).chain(rows))?);
        return Ok(out);
    }
    let mut result = to_json(&sweep);
    result["action"] = to_json(&action);
    result["transformed"] = to_json(&moved);
    if let Some(tol) = a.tol {
        result["tol"] = json!(tol);
    }
    Ok(Outcome::checked(result, passed))
}

pub(crate) fn reduce(a: &ReduceArgs) -> Result<Outcome> {
    let k = a.k.as_deref().map(parse_rational).transpose()?;
    let r = reduce_group(&a.group, k.as_ref())?;
    let mut result = to_json(&r);
    if let Ok(ode) = r.autonomous() {
        result["autonomous"] = to_json(&ode);
    }
    Ok(Outcome::ok(result))
}

#[derive(Serialize)]
struct Comparison {
    eta: f64,
    series: f64,
    rk4: f64,
    abs_err: f64,
}

struct SeriesRun {
    coeffs: Vec<(String, f64)>,
    report: Value,
    residual_order: Option<usize>,
}

fn run_series<T: Coefficient>(ode: &AutonomousOde, lambda: T, init: &[T], n: usize) -> Result<(SeriesRun, Vec<f64>)>
where
    SeriesSolution<T>: Serialize,
{
    let s = series_of(ode, lambda, init, n)?;
    let coeffs = s.coeffs.iter().map(|c| (c.to_string(), c.to_f64().unwrap_or(f64::NAN))).collect();
    let evals = s.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    Ok((SeriesRun { coeffs, report: to_json(&s), residual_order: s.residual_order() }, evals))
}

pub(crate) fn series(a: &SeriesArgs) -> Result<Outcome> {
    let lambda = parse_rational(&a.lambda)?;
    let c0 = parse_rational(&a.c0)?;
    let c1 = a.c1.as_deref().map(parse_rational).transpose()?;
    let ode = match a.ode {
        OdeKind::First => AutonomousOde::first_order(),
        OdeKind::Second => AutonomousOde::second_order(),
        OdeKind::Traveling => {
            let k = a.k.as_deref().ok_or_else(|| Error::InvalidArgument("--ode traveling needs --k".into()))?;
            let k = parse_rational(k)?;
            if k.is_zero() {
                return Err(Error::InvalidArgument("--k 0 leaves the first-order equation".into()));
            }
            AutonomousOde::traveling(&k)
        }
    };
    let mut init = vec![c0];
    if ode.order() == 2 {
        init.push(c1.unwrap_or_else(Rational::zero));
    } else if c1.is_some() {
        return Err(Error::InvalidArgument("--c1 applies to second-order equations only".into()));
    }
    if !(a.radius > 0.0 && a.radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("--radius {} must be positive", a.radius)));
    }
    let (run, coeffs) = if a.float {
        let init: Vec<f64> = init.iter().map(to_f64).collect();
        run_series(&ode, to_f64(&lambda), &init, a.n)?
    } else {
        run_series(&ode, lambda.clone(), &init, a.n)?
    };
    let eval = |eta: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * eta + c);
    let init_f: Vec<f64> = init.iter().map(to_f64).collect();
    let lam = to_f64(&lambda);
    let forward = ode_integrate(&ode, lam, &init_f, a.radius, RK4_STEP)?;
    let backward = ode_integrate(&ode, lam, &init_f, -a.radius, RK4_STEP)?;
    let mut table = Vec::new();
    for i in 0..=2 * COMPARE_POINTS {
        let eta = a.radius * (i as f64 - COMPARE_POINTS as f64) / COMPARE_POINTS as f64;
        let rk4 = if eta < 0.0 { backward.sample(eta)? } else { forward.sample(eta)? };
        let value = eval(eta);
        table.push(Comparison { eta, series: value, rk4, abs_err: (value - rk4).abs() });
    }
    let max_err = table.iter().map(|c| c.abs_err).fold(0.0, f64::max);
    let passed = a.tol.map_or(true, |tol| max_err <= tol);
    if a.emit == Emit::Csv {
        let mut text = csv_text(
            std::iter::once(["n", "c_n", "value"].map(String::from).to_vec()).chain(
                run.coeffs.iter().enumerate().map(|(n, (exact, value))| vec![n.to_string(), exact.clone(), value.to_string()]),
            ),
        )?;
        text.push('\n');
        text.push_str(&csv_text(
            std::iter::once(["eta", "series", "rk4", "abs_err"].map(String::from).to_vec()).chain(
                table.iter().map(|c| [c.eta, c.series, c.rk4, c.abs_err].iter().map(f64::to_string).collect()),
            ),
        )?);
        let mut out = Outcome::checked(Value::Null, passed);
        out.csv = Some(text);
        return Ok(out);
    }
    let mut result = run.report;
    result["residual_order"] = json!(run.residual_order);
    result["rk4_step"] = json!(RK4_STEP);
    result["comparison"] = to_json(&table);
    result["max_abs_err"] = json!(max_err);
    if let Some(tol) = a.tol {
        result["tol"] = json!(tol);
    }
    Ok(Outcome::checked(result, passed))
}

fn probe_class(p: ProbeArg) -> ProbeClass {
    match p {
        ProbeArg::Strict => ProbeClass::Strict,
        ProbeArg::Quasi => ProbeClass::Quasi,
        ProbeArg::Nonlinear => ProbeClass::Nonlinear,
    }
}

fn vector_from_text(text: &str) -> Result<ConservedVector> {
    let parts: Vec<&str> = text.split(';').collect();
    let [tt, tx] = parts.as_slice() else {
        return Err(Error::InvalidArgument(format!("vector `{text}` is not `T^t;T^x`")));
    };
    Ok(ConservedVector::custom("custom", parse(tt)?, parse(tx)?))
}

pub(crate) fn conslaw(a: &ConslawArgs) -> Result<Outcome> {
    if let Some(p) = a.probe {
        return Ok(Outcome::ok(to_json(&self_adjointness(probe_class(p))?)));
    }
    let tv = match (&a.generator, &a.vector) {
        (Some(g), _) => conserved_vector(&g.parse::<AlgebraElement>()?.to_field(), &FormalLagrangian::chaffee_infante())?,
        (None, Some(v)) => vector_from_text(v)?,
        (None, None) => return Err(Error::InvalidArgument("give --generator, --vector or --probe".into())),
    };
    match a.check {
        CheckKind::Divergence => {
            let r = divergence_onshell(&tv)?;
            let result = json!({
                "generator": r.generator,
                "w": tv.w.to_string(),
                "Tt": tv.tt.to_string(),
                "Tx": tv.tx.to_string(),
                "divergence": r.divergence.to_string(),
                "remainder": r.remainder.to_string(),
                "multipliers": to_json(&r.multipliers),
                "order_independent": r.order_independent,
                "certificate": to_json(&r.certificate),
                "verdict": if r.conserved { "conserved" } else { "not conserved" },
            });
            Ok(Outcome::checked(result, r.conserved))
        }
        CheckKind::Numeric => {
            let lambda = a
                .lambda
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("--check numeric needs --lambda".into()))?;
            let lambda = to_f64(&parse_rational(lambda)?);
            let h = to_f64(&parse_rational(&a.h)?);
            if a.levels < 2 {
                return Err(Error::InvalidArgument("--levels must be at least 2".into()));
            }
            let spacings: Vec<f64> = (0..a.levels).map(|i| h / f64::from(1u32 << i)).collect();
            let study = convergence_study(&tv, &soliton(lambda)?, Rectangle::default(), &spacings)?;
            let converging = study.ratios.iter().all(|r| *r >= MIN_RATIO);
            let mut result = to_json(&study);
            result["Tt"] = json!(tv.tt.to_string());
            result["Tx"] = json!(tv.tx.to_string());
            result["rectangle"] = to_json(&Rectangle::default());
            result["min_ratio"] = json!(MIN_RATIO);
            result["verdict"] = json!(if converging { "converging" } else { "not converging" });
            Ok(Outcome::checked(result, converging))
        }
    }
}

pub(crate) fn errata() -> Result<Outcome> {
    Ok(Outcome::ok(to_json(&errata_report()?)))
}

pub(crate) fn selftest() -> Result<Outcome> {
    let r = run_selftest()?;
    Ok(Outcome::checked(to_json(&r), r.all_passed()))
}
