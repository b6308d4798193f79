use num_traits::ToPrimitive;
use serde::Serialize;

use super::reduce::AutonomousOde;
use crate::{Error, Result};

/// Uniform-step RK4 trajectory of a reduced ODE with dense output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub eta: Vec<f64>,
    pub f: Vec<f64>,
    pub df: Vec<f64>,
}

struct Rhs {
    order: usize,
    a2: f64,
    a1: f64,
    lambda: f64,
}

impl Rhs {
    fn reaction(&self, f: f64) -> f64 {
        self.lambda * (f * f * f - f)
    }

    /// Derivative of the state `(f, f′)`; for first order only `f` is used.
    fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        if self.order == 2 {
            [y[1], -(self.a1 * y[1] + self.reaction(y[0])) / self.a2]
        } else {
            [-self.reaction(y[0]) / self.a1, 0.0]
        }
    }

    fn slope(&self, y: [f64; 2]) -> f64 {
        if self.order == 2 { y[1] } else { self.eval(y)[0] }
    }
}

fn axpy(y: [f64; 2], h: f64, k: [f64; 2]) -> [f64; 2] {
    [y[0] + h * k[0], y[1] + h * k[1]]
}

/// Classical RK4 from η = 0 to `eta_end` (either sign) with about `step`.
/// `init` is `[f₀]` or `[f₀, f₀′]` according to the order.
pub fn ode_integrate(
    ode: &AutonomousOde,
    lambda: f64,
    init: &[f64],
    eta_end: f64,
    step: f64,
) -> Result<Trajectory> {
    let order = ode.order();
    if order == 0 || init.len() != order {
        return Err(Error::InvalidArgument(format!("order {order} needs {order} initial values")));
    }
    if !(step > 0.0 && step.is_finite() && eta_end.is_finite()) {
        return Err(Error::InvalidArgument(format!("step {step} and end {eta_end} must be finite, step > 0")));
    }
    let rhs = Rhs {
        order,
        a2: ode.a2.to_f64().unwrap_or(f64::NAN),
        a1: ode.a1.to_f64().unwrap_or(f64::NAN),
        lambda,
    };
    let steps = ((eta_end.abs() / step).ceil() as usize).max(1);
    let h = eta_end / steps as f64;
    let mut y = [init[0], init.get(1).copied().unwrap_or(0.0)];
    let mut out = Trajectory { eta: vec![0.0], f: vec![y[0]], df: vec![rhs.slope(y)] };
    for i in 1..=steps {
        let k1 = rhs.eval(y);
        let k2 = rhs.eval(axpy(y, h / 2.0, k1));
        let k3 = rhs.eval(axpy(y, h / 2.0, k2));
        let k4 = rhs.eval(axpy(y, h, k3));
        let next = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if !(next[0].is_finite() && next[1].is_finite()) {
            return Err(Error::BlowUp { last_good: out.eta[i - 1] });
        }
        y = next;
        out.eta.push(h * i as f64);
        out.f.push(y[0]);
        out.df.push(rhs.slope(y));
    }
    Ok(out)
}

impl Trajectory {
    /// Cubic Hermite interpolation of `f` between steps.
    pub fn sample(&self, eta: f64) -> Result<f64> {
        let last = *self.eta.last().expect("trajectory has a start");
        let (lo, hi) = if last < 0.0 { (last, 0.0) } else { (0.0, last) };
        if !(lo..=hi).contains(&eta) {
            return Err(Error::InvalidArgument(format!("η = {eta} is outside [{lo}, {hi}]")));
        }
        let n = self.eta.len() - 1;
        if n == 0 || last == 0.0 {
            return Ok(self.f[0]);
        }
        let h = last / n as f64;
        let i = ((eta / h).floor() as usize).min(n - 1);
        let s = (eta - self.eta[i]) / h;
        let (h00, h10) = (2.0 * s.powi(3) - 3.0 * s * s + 1.0, s.powi(3) - 2.0 * s * s + s);
        let (h01, h11) = (-2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
        Ok(h00 * self.f[i] + h10 * h * self.df[i] + h01 * self.f[i + 1] + h11 * h * self.df[i + 1])
    }
}
