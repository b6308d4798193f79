use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::coord::Coord;
use super::expr::Expr;
use super::poly::Poly;
use crate::{Error, Result};

/// Number of quasi-random points a sampled zero test must pass.
pub const SAMPLE_POINTS: usize = 64;
/// Relative tolerance of the sampled zero test.
pub const SAMPLE_TOL: f64 = 1e-10;

const DEFAULT_SEED: u64 = 0x5eed_c0de;

/// Seed for sampled zero tests, read once from `SYMLAB_SEED`.
pub fn sampling_seed() -> u64 {
    static SEED: OnceLock<u64> = OnceLock::new();
    *SEED.get_or_init(|| {
        std::env::var("SYMLAB_SEED")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_SEED)
    })
}

/// Evaluates `e` in IEEE doubles. Every coordinate must be bound.
pub fn eval_numeric(e: &Expr, point: &BTreeMap<Coord, f64>) -> Result<f64> {
    e.to_poly().eval(&|c: &Coord| point.get(c).copied().ok_or_else(|| Error::Unbound(c.clone())))
}

/// Sampling box for the zero test: a per-coordinate interval with a fallback.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBox {
    ranges: BTreeMap<Coord, (f64, f64)>,
    fallback: (f64, f64),
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox {
            ranges: BTreeMap::from([
                (Coord::X, (-2.0, 2.0)),
                (Coord::T, (-2.0, 2.0)),
                (Coord::Lambda, (0.5, 4.0)),
            ]),
            fallback: (-2.0, 2.0),
        }
    }
}

impl SampleBox {
    pub fn with(mut self, c: Coord, lo: f64, hi: f64) -> Self {
        self.ranges.insert(c, (lo, hi));
        self
    }

    pub fn range(&self, c: &Coord) -> (f64, f64) {
        self.ranges.get(c).copied().unwrap_or(self.fallback)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    /// Decided by the canonical form.
    Canonical,
    /// Every sample point evaluated below tolerance.
    Sampled,
}

/// A point where an expression evaluated to a nonzero value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub point: BTreeMap<String, f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroTest {
    pub zero: bool,
    pub certificate: Certificate,
    pub witness: Option<Witness>,
}

pub fn is_zero(e: &Expr) -> Result<ZeroTest> {
    is_zero_in(e, &SampleBox::default())
}

pub fn is_zero_in(e: &Expr, bx: &SampleBox) -> Result<ZeroTest> {
    poly_is_zero_in(&e.to_poly(), bx)
}

pub(crate) fn poly_is_zero_in(p: &Poly, bx: &SampleBox) -> Result<ZeroTest> {
    if p.is_zero() {
        return Ok(ZeroTest { zero: true, certificate: Certificate::Canonical, witness: None });
    }
    if p.is_polynomial_class() {
        // A nonzero canonical form is a nonzero Laurent polynomial. The
        // witness search is best effort.
        let witness = sample(p, bx).ok().and_then(|s| s.witness);
        return Ok(ZeroTest { zero: false, certificate: Certificate::Canonical, witness });
    }
    sample(p, bx)
}

fn sample(p: &Poly, bx: &SampleBox) -> Result<ZeroTest> {
    let coords: Vec<Coord> = p.coords().into_iter().collect();
    let primes = first_primes(coords.len());
    let mut rng = ChaCha8Rng::seed_from_u64(sampling_seed());
    let shift: Vec<f64> = coords.iter().map(|_| rng.gen::<f64>()).collect();

    let mut passed = 0;
    let mut failed = 0;
    let mut index = 1u64;
    while passed < SAMPLE_POINTS {
        let point: BTreeMap<Coord, f64> = coords
            .iter()
            .enumerate()
            .map(|(d, c)| {
                let q = (halton(index, primes[d]) + shift[d]).fract();
                let (lo, hi) = bx.range(c);
                (c.clone(), lo + (hi - lo) * q)
            })
            .collect();
        index += 1;
        let env = |c: &Coord| point.get(c).copied().ok_or_else(|| Error::Unbound(c.clone()));
        match p.eval_scaled(&env) {
            Ok((v, scale)) if v.is_finite() && scale.is_finite() => {
                passed += 1;
                if v.abs() >= SAMPLE_TOL * scale.max(1.0) {
                    let witness = Witness {
                        point: point.iter().map(|(c, x)| (c.to_string(), *x)).collect(),
                        value: v,
                    };
                    return Ok(ZeroTest {
                        zero: false,
                        certificate: Certificate::Sampled,
                        witness: Some(witness),
                    });
                }
            }
            Ok(_) => failed += 1,
            Err(Error::Domain(_)) => failed += 1,
            Err(other) => return Err(other),
        }
        if failed > SAMPLE_POINTS {
            return Err(Error::Domain(format!(
                "{failed} of {} sample points could not be evaluated",
                failed + passed
            )));
        }
    }
    Ok(ZeroTest { zero: true, certificate: Certificate::Sampled, witness: None })
}

fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut k = 2u64;
    while out.len() < n {
        if out.iter().take_while(|&&p| p * p <= k).all(|&p| k % p != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn numeric_examples() {
        let pt = BTreeMap::from([(Coord::u(), 3.0), (Coord::Lambda, 2.0)]);
        assert_eq!(eval_numeric(&p("u^2"), &pt).unwrap(), 9.0);
        let eq = BTreeMap::from([(Coord::u(), 1.0), (Coord::Lambda, 2.0)]);
        assert_eq!(eval_numeric(&p("λ*(u^3 - u)"), &eq).unwrap(), 0.0);
        assert_eq!(eval_numeric(&p("tanh(0)"), &BTreeMap::new()).unwrap(), 0.0);
    }

    #[test]
    fn unbound_coordinate_is_named() {
        let err = eval_numeric(&p("u + x"), &BTreeMap::from([(Coord::u(), 1.0)])).unwrap_err();
        assert_eq!(err, Error::Unbound(Coord::X));
    }

    #[test]
    fn zero_test_examples() {
        let r = is_zero(&p("u_tx - u_xt")).unwrap();
        assert!(r.zero);
        assert_eq!(r.certificate, Certificate::Canonical);

        let r = is_zero(&p("(1 - tanh(x)^2) - sech(x)^2")).unwrap();
        assert!(r.zero);
        assert_eq!(r.certificate, Certificate::Sampled);

        let r = is_zero(&p("u_t - u_xx")).unwrap();
        assert!(!r.zero);
        assert!(r.witness.is_some());
    }

    #[test]
    fn sampled_nonzero_has_witness() {
        let r = is_zero(&p("tanh(x) - x")).unwrap();
        assert!(!r.zero);
        assert_eq!(r.certificate, Certificate::Sampled);
        assert!(r.witness.unwrap().value.abs() > 0.0);
    }

    #[test]
    fn poles_resample_then_fail() {
        // sqrt(t) is undefined for t < 0, a third of this box.
        let bx = SampleBox::default().with(Coord::T, -1.0, 2.0);
        let r = is_zero_in(&p("sqrt(t)*sqrt(t + 1) - sqrt(t^2 + t)"), &bx).unwrap();
        assert!(r.zero);
        let bx = SampleBox::default().with(Coord::T, -3.0, -1.0);
        let err = is_zero_in(&p("sqrt(t + sqrt(t))"), &bx).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn halton_points_are_in_unit_interval() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(3, 2), 0.75);
        assert_eq!(first_primes(5), [2, 3, 5, 7, 11]);
    }
}
