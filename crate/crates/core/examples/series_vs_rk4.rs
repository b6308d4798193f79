//! Exact power series of the first-order reduced equation against RK4.

use symlab::reductions::{ode_integrate, series_eval, series_first_order};
use symlab::symcore::Rational;

fn main() -> symlab::Result<()> {
    let s = series_first_order(Rational::from_integer(1.into()), Rational::new(1.into(), 2.into()), 20)?;
    for (n, c) in s.coeffs.iter().enumerate().take(6) {
        println!("c{n} = {c}");
    }
    let forward = ode_integrate(&s.ode, 1.0, &[0.5], 0.2, 1e-4)?;
    let backward = ode_integrate(&s.ode, 1.0, &[0.5], -0.2, 1e-4)?;
    for i in -4..=4 {
        let eta = f64::from(i) * 0.05;
        let rk4 = if eta < 0.0 { backward.sample(eta)? } else { forward.sample(eta)? };
        let approx = series_eval(&s, eta);
        println!("η = {eta:+.2}  series {approx:.12}  rk4 {rk4:.12}  |diff| {:.1e}", (approx - rk4).abs());
    }
    Ok(())
}
