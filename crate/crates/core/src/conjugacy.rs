//! Exact check that a unilateral weighted forward shift on `ℓ^p(ℕ)` is
//! conjugate to a composition operator on a chain system.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::lp::{abs_pow, apply_tf, SimpleFunction};
use crate::scalar::{Exponent, Scalar};
use crate::sequence::Sequence;
use crate::system::{AtomicSystem, Space};
use crate::weight::ExtendedWeight;

/// `T(x_1, x_2, …) = (0, w_1 x_1, w_2 x_2, …)` with `w_j = weights(j − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardShift<S> {
    pub weights: Sequence<S>,
}

/// A vector of `ℓ^p(ℕ)` with finite support, indexed from 1.
pub type Coords<S> = BTreeMap<i64, S>;

impl<S: Scalar> ForwardShift<S> {
    pub fn weight(&self, j: i64) -> Result<S> {
        match self.weights.value((j - 1) as u64) {
            ExtendedWeight::Finite(w) if w.is_positive() => Ok(w),
            _ => Err(Error::InvalidSystem(format!("weight w_{j} is not positive and finite"))),
        }
    }

    /// `w_1 ⋯ w_k`.
    pub fn prefix_product(&self, k: i64) -> Result<S> {
        (1..=k).try_fold(S::one(), |acc, j| Ok(acc * self.weight(j)?))
    }

    pub fn apply(&self, x: &Coords<S>) -> Result<Coords<S>> {
        x.iter().map(|(&n, v)| Ok((n + 1, self.weight(n)? * v.clone()))).collect()
    }
}

/// `φ(x)_n = (w_1 ⋯ w_{n−1}) · x_{n+lead}`; `lead = 1` is the conjugacy of
/// the chain model. Coordinates pushed below index 1 are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoordinateMap {
    pub lead: i64,
}

impl CoordinateMap {
    pub const CHAIN: CoordinateMap = CoordinateMap { lead: 1 };

    pub fn apply<S: Scalar>(&self, shift: &ForwardShift<S>, x: &SimpleFunction<S>) -> Result<Coords<S>> {
        let mut out = Coords::new();
        for (a, v) in x.support() {
            let i = a.point().ok_or_else(|| Error::DimensionMismatch(format!("atom {a} is not a point of ℕ")))?;
            let n = i - self.lead;
            if n >= 1 {
                out.insert(n, shift.prefix_product(n - 1)? * v.clone());
            }
        }
        Ok(out)
    }
}

fn lp_norm<S: Scalar>(x: &Coords<S>, p: &Exponent) -> Result<S> {
    x.values().try_fold(S::zero(), |acc, v| Ok(acc + abs_pow(v, p)?))
}

/// Random vector supported on `{2, …, n}`; atom 1 carries infinite mass.
fn trial_vector<S: Scalar>(sys: &AtomicSystem<S>, rng: &mut StdRng, n: i64, p: Exponent) -> Result<SimpleFunction<S>> {
    let len = rng.gen_range(1..=n - 1);
    let values: Vec<(Atom, S)> = (0..len)
        .map(|_| {
            let i = rng.gen_range(2..=n);
            let num = rng.gen_range(-8i64..=8);
            let den = rng.gen_range(1i64..=4);
            (Atom::Point(i), S::from_ratio(num, den))
        })
        .collect();
    SimpleFunction::new(sys, values, p)
}

/// Exact isometry `‖φ(x)‖ = ‖x‖` and intertwining `T ∘ φ = φ ∘ T_f` on
/// `trials` random finitely supported vectors.
pub fn verify_conjugacy<S: Scalar>(
    shift: &ForwardShift<S>,
    sys: &AtomicSystem<S>,
    map: CoordinateMap,
    p: Exponent,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    if !matches!(sys.space, Space::Chain { zero_atom: None, .. }) {
        return Err(Error::DimensionMismatch(format!("{} is not a chain on ℕ", sys.name)));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let x = trial_vector(sys, &mut rng, 24, p)?;
        let image = map.apply(shift, &x)?;
        if ExtendedWeight::Finite(lp_norm(&image, &p)?) != x.norm_p(sys)? {
            return Ok(false);
        }
        let lhs = shift.apply(&image)?;
        let rhs = map.apply(shift, &apply_tf(sys, &x)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::scalar::Rational;
    use crate::sequence::SeqRule;

    fn se4_shift() -> ForwardShift<Rational> {
        ForwardShift {
            weights: Sequence::from_rule(gallery::se4_weights()),
        }
    }

    #[test]
    fn se4_is_conjugate() {
        let sys = gallery::se4::<Rational>();
        assert!(verify_conjugacy(&se4_shift(), &sys, CoordinateMap::CHAIN, Exponent::TWO, 25, 7).unwrap());
    }

    #[test]
    fn shifted_coordinates_fail() {
        let sys = gallery::se4::<Rational>();
        let map = CoordinateMap { lead: 2 };
        assert!(!verify_conjugacy(&se4_shift(), &sys, map, Exponent::TWO, 25, 7).unwrap());
    }

    #[test]
    fn unit_weights() {
        let ones = Sequence::from_rule(SeqRule::constant(Rational::from_int(1)));
        let sys = AtomicSystem::new(
            "unit-chain",
            Space::Chain {
                measure: Sequence::new(vec![ExtendedWeight::Infinite], SeqRule::constant(Rational::from_int(1))),
                zero_atom: None,
            },
        );
        let shift = ForwardShift { weights: ones };
        assert!(verify_conjugacy(&shift, &sys, CoordinateMap::CHAIN, Exponent::ONE, 10, 1).unwrap());
        assert!(verify_conjugacy(&shift, &sys, CoordinateMap::CHAIN, Exponent::TWO, 10, 1).unwrap());
    }
}
