use num_bigint::BigInt;
use num_traits::Pow;

use crate::symcore::Rational;
use crate::{Error, Result};

/// Exact value of `3`, `-2/5`, `0.25` or `1.5e-3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("`{s}` is not a rational or decimal number"));
    let text = s.trim();
    if text.contains('/') {
        let r: Rational = text.parse().map_err(|_| bad())?;
        return Ok(r);
    }
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let (sign, whole) = match whole.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, whole.strip_prefix('+').unwrap_or(whole)),
    };
    let digits = format!("{whole}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let ten = |k: u32| Pow::pow(BigInt::from(10), k);
    let scale = exponent - frac.len() as i32;
    let value = if scale >= 0 {
        Rational::from_integer(n * ten(scale as u32))
    } else {
        Rational::new(n, ten(scale.unsigned_abs()))
    };
    Ok(if sign < 0 { -value } else { value })
}
