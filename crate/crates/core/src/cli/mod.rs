//! The `symlab` command line: one subcommand per capability, JSON reports on
//! stdout, CSV for tabular payloads.

mod commands;
mod number;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::Error;

pub use number::parse_rational;

#[derive(Parser, Debug)]
#[command(
    name = "symlab",
    version,
    about = "Symmetries, reductions and conservation laws of u_t - u_xx + λ(u³ - u) = 0"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariance residual of a candidate generator.
    Symmetries(SymmetriesArgs),
    /// Commutator table of G1, G2, G3.
    Table(TableArgs),
    /// Adjoint actions Ad(exp(εG_i)) G_j in closed form.
    Adjoint(AdjointArgs),
    /// Optimal-system representatives.
    Optimal(OptimalArgs),
    /// Residual of a transformed solution on a grid.
    Transform(TransformArgs),
    /// Similarity reduction by one of the listed groups.
    Reduce(ReduceArgs),
    /// Power series of a reduced ODE against RK4.
    Series(SeriesArgs),
    /// Conserved vectors, divergence checks and self-adjointness probes.
    Conslaw(ConslawArgs),
    /// Printed claims compared with recomputed values.
    Errata(NoArgs),
    /// Full invariant suite.
    Selftest(NoArgs),
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct NoArgs {}

#[derive(Args, Debug, Serialize)]
pub(crate) struct TableArgs {}

#[derive(Args, Debug, Serialize)]
pub(crate) struct SymmetriesArgs {
    /// Rational combination of G1, G2, G3, e.g. `G1 + 2*G3`.
    #[arg(long, required_unless_present = "field", conflicts_with = "field")]
    candidate: Option<String>,
    /// Coefficients `ω;ψ;χ` of ω∂x + ψ∂t + χ∂u.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct AdjointArgs {
    /// Also evaluate every action at this ε.
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct OptimalArgs {
    /// Rational combination of G1, G2, G3 to reduce.
    #[arg(long)]
    element: Option<String>,
    /// Number of seeded random elements to reduce and replay.
    #[arg(long, default_value_t = 0)]
    samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum Emit {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum SolutionKind {
    /// The tanh front -(1 + tanh(√(λ/2) x/2 + 3λt/4))/2.
    Soliton,
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct TransformArgs {
    /// `Xi1` … `Xi7`, or `Xiq` with `--q`.
    #[arg(long)]
    action: String,
    #[arg(long, allow_negative_numbers = true)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = SolutionKind::Soliton)]
    solution: SolutionKind,
    #[arg(long, allow_negative_numbers = true)]
    lambda: String,
    /// `lo:hi:n` on both axes.
    #[arg(long, default_value = "-2:2:41", allow_hyphen_values = true)]
    grid: String,
    /// Slope of `Xi4`.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<String>,
    /// Shift `q(t, x)` of `Xiq`.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Fail when the largest residual exceeds this.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct ReduceArgs {
    /// `Xi1` … `Xi7`.
    #[arg(long)]
    group: String,
    /// Slope of `Xi4`.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum OdeKind {
    /// f′ + λ(f³ − f) = 0.
    First,
    /// f″ = λ(f³ − f).
    Second,
    /// f′ − k²f″ + λ(f³ − f) = 0.
    Traveling,
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct SeriesArgs {
    #[arg(long, value_enum)]
    ode: OdeKind,
    #[arg(long, allow_negative_numbers = true)]
    lambda: String,
    #[arg(long, allow_negative_numbers = true)]
    c0: String,
    /// f′(0) for the second-order equations.
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<String>,
    /// Truncation order.
    #[arg(long = "N", default_value_t = 20)]
    n: usize,
    /// Compare with RK4 on [-radius, radius].
    #[arg(long, default_value_t = 0.2)]
    radius: f64,
    /// Floating-point coefficients instead of exact rationals.
    #[arg(long)]
    float: bool,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Fail when the largest |series − RK4| exceeds this.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum CheckKind {
    /// Exact divergence on solutions of the equation and its adjoint.
    Divergence,
    /// Finite-difference divergence along the tanh front under refinement.
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum ProbeArg {
    Strict,
    Quasi,
    Nonlinear,
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct ConslawArgs {
    /// Rational combination of G1, G2, G3.
    #[arg(long, conflicts_with_all = ["vector", "probe"])]
    generator: Option<String>,
    /// Hand-written pair `T^t;T^x`.
    #[arg(long, conflicts_with = "probe", allow_hyphen_values = true)]
    vector: Option<String>,
    #[arg(long, value_enum, default_value_t = CheckKind::Divergence)]
    check: CheckKind,
    /// Required by `--check numeric`.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<String>,
    /// Coarsest spacing of the numeric check.
    #[arg(long, default_value = "1/32")]
    h: String,
    /// Number of halvings of `--h`, counting the coarsest.
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Self-adjointness class to probe.
    #[arg(long, value_enum)]
    probe: Option<ProbeArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub(crate) enum Status {
    Ok,
    CheckFailed,
    Error,
}

/// What a subcommand produced.
pub(crate) struct Outcome {
    result: Value,
    status: Status,
    csv: Option<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, status: Status::Ok, csv: None }
    }

    fn checked(result: Value, passed: bool) -> Self {
        let status = if passed { Status::Ok } else { Status::CheckFailed };
        Outcome { result, status, csv: None }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    parameters: Value,
    result: Value,
    status: Status,
}

/// Errors that come from what the user typed rather than from a computation.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::UnknownGroup(_)
            | Error::InvalidField(_)
            | Error::ZeroElement
    )
}

pub(crate) fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports have string keys")
}

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let (name, parameters, outcome) = match &cli.command {
        Command::Symmetries(a) => ("symmetries", to_json(a), commands::symmetries(a)),
        Command::Table(a) => ("table", to_json(a), commands::table()),
        Command::Adjoint(a) => ("adjoint", to_json(a), commands::adjoint(a)),
        Command::Optimal(a) => ("optimal", to_json(a), commands::optimal(a)),
        Command::Transform(a) => ("transform", to_json(a), commands::transform(a)),
        Command::Reduce(a) => ("reduce", to_json(a), commands::reduce(a)),
        Command::Series(a) => ("series", to_json(a), commands::series(a)),
        Command::Conslaw(a) => ("conslaw", to_json(a), commands::conslaw(a)),
        Command::Errata(a) => ("errata", to_json(a), commands::errata()),
        Command::Selftest(a) => ("selftest", to_json(a), commands::selftest()),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) if is_usage_error(&e) => {
            let _ = writeln!(err, "error: {e}\n\nFor more information, try 'symlab {name} --help'.");
            return 2;
        }
        Err(e) => Outcome {
            result: serde_json::json!({ "error": e.to_string(), "kind": format!("{e:?}") }),
            status: Status::Error,
            csv: None,
        },
    };
    let code = match outcome.status {
        Status::Ok => 0,
        Status::CheckFailed | Status::Error => 1,
    };
    let written = match &outcome.csv {
        Some(csv) if outcome.status != Status::Error => write!(out, "{csv}"),
        _ => {
            let envelope = Envelope { command: name, parameters, result: outcome.result, status: outcome.status };
            let text = serde_json::to_string_pretty(&envelope).expect("envelope serializes");
            writeln!(out, "{text}")
        }
    };
    if written.is_err() {
        return 1;
    }
    code
}
