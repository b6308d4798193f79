use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::algebra::{AlgebraElement, CommutatorTable};
use crate::symcore::{int, rational_str, Rational};
use crate::{Error, Result};

/// One step of an orbit reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Adjoint action of `G_generator` written with the parameters of the
    /// coefficient maps
    /// E₁: l¹ ↦ l¹ + a₁l³, E₂: l² ↦ l² + 2a₂l³, E₃: (l¹, l²) ↦ (l¹/a₃, l²/a₃²).
    Adjoint {
        generator: usize,
        #[serde(with = "rational_str")]
        param: Rational,
    },
    /// Rescaling of the whole element, which spans the same subalgebra.
    Scale {
        #[serde(with = "rational_str")]
        factor: Rational,
    },
}

impl Move {
    /// Group parameter ε of an adjoint move.
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            Move::Adjoint { generator: 1 | 2, param } => Some(-param.to_f64()?),
            Move::Adjoint { generator: 3, param } => Some(-param.to_f64()?.ln()),
            _ => None,
        }
    }

    /// Exact action on coefficients.
    pub fn apply(&self, v: &AlgebraElement) -> AlgebraElement {
        let [l1, l2, l3] = v.l.clone();
        match self {
            Move::Adjoint { generator: 1, param } => AlgebraElement::new(l1 + param * &l3, l2, l3),
            Move::Adjoint { generator: 2, param } => {
                AlgebraElement::new(l1, l2 + int(2) * param * &l3, l3)
            }
            Move::Adjoint { generator: 3, param } => {
                AlgebraElement::new(l1 / param, l2 / (param * param), l3)
            }
            Move::Adjoint { .. } => v.clone(),
            Move::Scale { factor } => AlgebraElement::new(l1 * factor, l2 * factor, l3 * factor),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalResult {
    pub input: AlgebraElement,
    pub representative: AlgebraElement,
    pub word: Vec<Move>,
}

/// Representatives of the adjoint orbits of one-dimensional subalgebras:
/// G₃, G₁, G₂, G₁ + G₂, G₁ − G₂.
pub fn canonical_set() -> Vec<AlgebraElement> {
    vec![
        AlgebraElement::from_ints(0, 0, 1),
        AlgebraElement::from_ints(1, 0, 0),
        AlgebraElement::from_ints(0, 1, 0),
        AlgebraElement::from_ints(1, 1, 0),
        AlgebraElement::from_ints(1, -1, 0),
    ]
}

pub fn optimal_representative(v: &AlgebraElement) -> Result<OptimalResult> {
    if v.is_zero() {
        return Err(Error::ZeroElement);
    }
    let [l1, l2, l3] = &v.l;
    let mut word = Vec::new();
    if !l3.is_zero() {
        if !l1.is_zero() {
            word.push(Move::Adjoint { generator: 1, param: -l1 / l3 });
        }
        if !l2.is_zero() {
            word.push(Move::Adjoint { generator: 2, param: -l2 / (int(2) * l3) });
        }
        if !l3.is_one() {
            word.push(Move::Scale { factor: l3.recip() });
        }
    } else if l2.is_zero() {
        if !l1.is_one() {
            word.push(Move::Scale { factor: l1.recip() });
        }
    } else if l1.is_zero() {
        if !l2.is_one() {
            word.push(Move::Scale { factor: l2.recip() });
        }
    } else {
        // l²/(l¹)² is invariant under E₃ and scales by 1/c under rescaling,
        // so only its sign survives.
        let a3 = (l2 / l1).abs();
        if !a3.is_one() {
            word.push(Move::Adjoint { generator: 3, param: a3.clone() });
        }
        let factor = a3 / l1;
        if !factor.is_one() {
            word.push(Move::Scale { factor });
        }
    }
    let representative = word.iter().fold(v.clone(), |acc, m| m.apply(&acc));
    Ok(OptimalResult { input: v.clone(), representative, word })
}

/// Replays a word numerically through `exp(−ε ad G_i)` built from the
/// structure constants.
pub fn replay(table: &CommutatorTable, v: &AlgebraElement, word: &[Move]) -> [f64; 3] {
    let mut x = v.to_f64();
    for m in word {
        match m {
            Move::Adjoint { generator, .. } => {
                let eps = m.epsilon().unwrap_or(f64::NAN);
                let mat = table.ad_exp(*generator, eps);
                let mut y = [0.0; 3];
                for (r, row) in mat.iter().enumerate() {
                    y[r] = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                }
                x = y;
            }
            Move::Scale { factor } => {
                let f = factor.to_f64().unwrap_or(f64::NAN);
                x = x.map(|c| c * f);
            }
        }
    }
    x
}

/// Whether an element with `l³ = 0` sits in the span of G₁ and G₂ only.
pub fn in_translation_family(v: &AlgebraElement) -> bool {
    v.l[2].is_zero() && !v.is_zero()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::lie::algebra::{commutator_table, standard_basis};
    use crate::symcore::rat;

    fn table() -> CommutatorTable {
        commutator_table(&standard_basis(), &["G1", "G2", "G3"]).unwrap()
    }

    #[test]
    fn worked_example() {
        let r = optimal_representative(&AlgebraElement::from_ints(5, 7, 1)).unwrap();
        assert_eq!(r.representative, AlgebraElement::from_ints(0, 0, 1));
        assert_eq!(
            r.word,
            [
                Move::Adjoint { generator: 1, param: int(-5) },
                Move::Adjoint { generator: 2, param: rat(-7, 2) },
            ]
        );
    }

    #[test]
    fn canonical_inputs_are_fixed() {
        for c in canonical_set() {
            let r = optimal_representative(&c).unwrap();
            assert_eq!(r.representative, c);
            assert!(r.word.is_empty());
        }
    }

    #[test]
    fn translation_combinations() {
        let r = optimal_representative(&AlgebraElement::from_ints(3, 12, 0)).unwrap();
        assert_eq!(r.representative, AlgebraElement::from_ints(1, 1, 0));
        let r = optimal_representative(&AlgebraElement::from_ints(-2, 8, 0)).unwrap();
        assert_eq!(r.representative, AlgebraElement::from_ints(1, -1, 0));
        assert!(in_translation_family(&r.representative));
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(optimal_representative(&AlgebraElement::from_ints(0, 0, 0)), Err(Error::ZeroElement));
    }

    proptest! {
        #[test]
        fn lands_in_canonical_set_and_replays(
            l in prop::array::uniform3((-9i64..=9, 1i64..=5)),
        ) {
            let v = AlgebraElement::new(rat(l[0].0, l[0].1), rat(l[1].0, l[1].1), rat(l[2].0, l[2].1));
            prop_assume!(!v.is_zero());
            let r = optimal_representative(&v).unwrap();
            prop_assert!(canonical_set().contains(&r.representative));
            if !v.l[2].is_zero() {
                prop_assert_eq!(&r.representative, &AlgebraElement::from_ints(0, 0, 1));
            }
            let x = replay(&table(), &v, &r.word);
            let want = r.representative.to_f64();
            for k in 0..3 {
                prop_assert!((x[k] - want[k]).abs() < 1e-10 * want[k].abs().max(1.0));
            }
            let again = optimal_representative(&r.representative).unwrap();
            prop_assert!(again.word.is_empty());
        }
    }
}
