//! Weighted backward shifts `B_w e_n = w_n e_{n−1}` on two-sided `ℓ^p` and
//! their composition-operator models.
//!
//! `B_w` is conjugate to `T_f` for `f(i) = i + 1` with
//! `w_i = μ({i})/μ({i+1})`, so `w_n ⋯ w_m = μ({n})/μ({m+1})`.

use crate::error::{Error, Result};
use crate::profile::ZProfile;
use crate::scalar::{Exponent, Scalar};
use crate::sequence::{SeqRule, Sequence};
use crate::system::{AtomicSystem, Space};
use crate::verdict::{CriterionId, Status, Verdict, Witness};
use crate::weight::ExtendedWeight;

/// Generator of the weights `w : ℤ → (0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftRule<S> {
    /// `window` on `[start, start + len)`, `right` repeated from
    /// `start + len` upwards and `left` repeated from `start − 1` downwards.
    Periodic {
        left: Vec<S>,
        window: Vec<S>,
        start: i64,
        right: Vec<S>,
    },
    /// `w_n = left` for `n < 0` and `right` for `n ≥ 0`.
    LogLinear { left: S, right: S },
    /// `w_i = μ({i})/μ({i+1})`; the profile may carry any positive anchor.
    FromProfile(ZProfile<S>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedShift<S> {
    pub rule: ShiftRule<S>,
    pub p: Exponent,
}

/// Radius on which profile-induced weights are validated. Neighbour ratios
/// of the block and quasi-periodic tails repeat well inside it.
const PROFILE_CHECK_RADIUS: i64 = 256;

impl<S: Scalar> WeightedShift<S> {
    pub fn new(rule: ShiftRule<S>, p: Exponent) -> Result<Self> {
        let s = WeightedShift { rule, p };
        s.validate()?;
        Ok(s)
    }

    pub fn constant(w: S) -> Result<Self> {
        Self::new(ShiftRule::LogLinear { left: w.clone(), right: w }, Exponent::ONE)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSystem(m.to_string()));
        match &self.rule {
            ShiftRule::Periodic { left, window, right, .. } => {
                if left.is_empty() || right.is_empty() {
                    return bad("periodic weights need nonempty periods");
                }
                if left.iter().chain(window).chain(right).any(|w| !w.is_positive()) {
                    return bad("weights must be positive");
                }
            }
            ShiftRule::LogLinear { left, right } => {
                if !left.is_positive() || !right.is_positive() {
                    return bad("weights must be positive");
                }
            }
            ShiftRule::FromProfile(p) => {
                for i in -PROFILE_CHECK_RADIUS..=PROFILE_CHECK_RADIUS {
                    match p.value(i) {
                        ExtendedWeight::Finite(v) if v.is_positive() => {}
                        _ => return bad("profile must be positive and finite"),
                    }
                }
                let mut top = S::zero();
                for i in -PROFILE_CHECK_RADIUS..PROFILE_CHECK_RADIUS {
                    top = S::max_of(top, self.weight(i));
                }
                // a bound that keeps growing through the window is unbounded
                let mut inner = S::zero();
                for i in -PROFILE_CHECK_RADIUS / 2..PROFILE_CHECK_RADIUS / 2 {
                    inner = S::max_of(inner, self.weight(i));
                }
                if top > inner {
                    return Err(Error::UnboundedWeights);
                }
            }
        }
        Ok(())
    }

    /// `w_n`.
    pub fn weight(&self, n: i64) -> S {
        match &self.rule {
            ShiftRule::Periodic {
                left,
                window,
                start,
                right,
            } => {
                let end = start + window.len() as i64;
                if n < *start {
                    left[((start - 1 - n) as usize) % left.len()].clone()
                } else if n < end {
                    window[(n - start) as usize].clone()
                } else {
                    right[((n - end) as usize) % right.len()].clone()
                }
            }
            ShiftRule::LogLinear { left, right } => {
                if n < 0 {
                    left.clone()
                } else {
                    right.clone()
                }
            }
            ShiftRule::FromProfile(p) => {
                let (a, b) = (p.value(n), p.value(n + 1));
                match (a, b) {
                    (ExtendedWeight::Finite(a), ExtendedWeight::Finite(b)) => a / b,
                    _ => unreachable!("validated profile"),
                }
            }
        }
    }

    /// Equivalent periodic presentation.
    fn periodic(&self) -> Option<(Vec<S>, Vec<S>, i64, Vec<S>)> {
        match &self.rule {
            ShiftRule::Periodic {
                left,
                window,
                start,
                right,
            } => Some((left.clone(), window.clone(), *start, right.clone())),
            ShiftRule::LogLinear { left, right } => Some((vec![left.clone()], Vec::new(), 0, vec![right.clone()])),
            ShiftRule::FromProfile(_) => None,
        }
    }
}

fn product<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::one(), |a, b| a * b.clone())
}

/// The `ℤ`-system with `f(i) = i + 1` and `μ({i})/μ({i+1}) = w_i`,
/// anchored at `μ({0}) = 1`. Profile-induced weights keep their own
/// profile, a constant multiple of the anchored one.
pub fn shift_as_composition<S: Scalar>(shift: &WeightedShift<S>) -> Result<AtomicSystem<S>> {
    shift.validate()?;
    let profile = match shift.periodic() {
        None => match &shift.rule {
            ShiftRule::FromProfile(p) => p.clone(),
            _ => unreachable!(),
        },
        Some((left, window, start, right)) => {
            let end = start + window.len() as i64;
            // right side: μ(t) for t ≥ 0, explicit up to r0, then periodic
            let r0 = end.max(0);
            let mut mu = S::one();
            let mut prefix = Vec::new();
            for t in 0..r0 {
                prefix.push(ExtendedWeight::Finite(mu.clone()));
                mu = mu / shift.weight(t);
            }
            let rp: Vec<S> = (0..right.len() as i64).map(|s| shift.weight(r0 + s)).collect();
            let mut pattern = Vec::with_capacity(rp.len());
            let mut acc = mu;
            for w in &rp {
                pattern.push(acc.clone());
                acc = acc / w.clone();
            }
            let right_seq = Sequence::new(
                prefix,
                SeqRule::Quasi {
                    pattern,
                    growth: S::one() / product(&rp),
                },
            );
            // left side: left(t) = μ(−1−t) = μ(−t) · w_{−1−t}
            let t0 = (-start).max(0);
            let mut mu = S::one();
            let mut prefix = Vec::new();
            for t in 0..t0 {
                mu = mu * shift.weight(-1 - t);
                prefix.push(ExtendedWeight::Finite(mu.clone()));
            }
            let lp: Vec<S> = (0..left.len() as i64).map(|s| shift.weight(-1 - t0 - s)).collect();
            let mut pattern = Vec::with_capacity(lp.len());
            let mut acc = mu;
            for w in &lp {
                acc = acc * w.clone();
                pattern.push(acc.clone());
            }
            let left_seq = Sequence::new(
                prefix,
                SeqRule::Quasi {
                    pattern,
                    growth: product(&lp),
                },
            );
            ZProfile::new(left_seq, right_seq)
        }
    };
    let mut sys = AtomicSystem::new("weighted-shift", Space::Line { profile, step: 1 });
    sys.flags.constants_exact_from = None;
    Ok(sys)
}

/// Maximum product `w_n ⋯ w_m` over `−radius ≤ n ≤ m ≤ radius`, in linear
/// time.
pub fn window_max_product<S: Scalar>(shift: &WeightedShift<S>, radius: i64) -> S {
    let mut best = None::<S>;
    let mut ending = None::<S>;
    for m in -radius..=radius {
        let w = shift.weight(m);
        let e = match ending {
            Some(e) if e > S::one() => e * w,
            _ => w,
        };
        best = Some(match best {
            Some(b) => S::max_of(b, e.clone()),
            None => e.clone(),
        });
        ending = Some(e);
    }
    best.unwrap_or_else(S::one)
}

/// The same maximum by enumerating every window, `O(N²)`.
pub fn window_max_product_oracle<S: Scalar>(shift: &WeightedShift<S>, radius: i64) -> S {
    let weights: Vec<S> = (-radius..=radius).map(|n| shift.weight(n)).collect();
    let mut best = weights[0].clone();
    for n in 0..weights.len() {
        let mut acc = S::one();
        for w in &weights[n..] {
            acc = acc * w.clone();
            best = S::max_of(best, acc.clone());
        }
    }
    best
}

/// `sup { w_n ⋯ w_m : n ≤ m }`; `Some(None)` when unbounded and `None` when
/// the generator gives no exact answer.
pub fn product_sup<S: Scalar>(shift: &WeightedShift<S>) -> Option<Option<S>> {
    let Some((left, window, start, right)) = shift.periodic() else {
        let sys = shift_as_composition(shift).ok()?;
        return crate::criteria::line_ratio_sup(&sys);
    };
    // a period with drift above 1 can be repeated without bound
    if product(&left) > S::one() || product(&right) > S::one() {
        return Some(None);
    }
    // otherwise removing whole periods never lowers a product, so every
    // product is matched by one inside two periods of each side
    let end = start + window.len() as i64;
    let lo = start - 2 * left.len() as i64;
    let hi = end + 2 * right.len() as i64;
    let mut best = shift.weight(lo);
    for n in lo..hi {
        let mut acc = S::one();
        for m in n..hi {
            acc = acc * shift.weight(m);
            best = S::max_of(best, acc.clone());
        }
    }
    Some(Some(best))
}

/// Li-Yorke chaos of `B_w`: Proved iff the products `w_n ⋯ w_m` are
/// unbounded. Replays against the induced composition system.
pub fn check_weighted_shift<S: Scalar>(shift: &WeightedShift<S>, h: u64) -> Result<Verdict<S>> {
    shift.validate()?;
    let rule = match &shift.rule {
        ShiftRule::Periodic { .. } => "per-period drift of the periodic weights",
        ShiftRule::LogLinear { .. } => "constant weights on each half-line",
        ShiftRule::FromProfile(_) => "ratio supremum of the inducing measure",
    };
    Ok(match product_sup(shift) {
        Some(sup) => {
            let status = if sup.is_none() { Status::Proved } else { Status::Refuted };
            Verdict::new(
                CriterionId::Wshift,
                status,
                h,
                Witness::Ratio {
                    set: None,
                    sup,
                    rule: rule.into(),
                },
            )
        }
        None => {
            let r = h as i64;
            let best = window_max_product(shift, r);
            Verdict::new(
                CriterionId::Wshift,
                Status::UnknownAtHorizon,
                h,
                Witness::Seen {
                    set: None,
                    best: Some(ExtendedWeight::Finite(best)),
                    at: None,
                    reason: "no generator certificate for the weight products".into(),
                },
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::Atom;
    use crate::gallery;
    use crate::scalar::Rational;
    use crate::verdict::replay;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn constant_weights() {
        let one = WeightedShift::constant(q(1, 1)).unwrap();
        let v = check_weighted_shift(&one, 64).unwrap();
        assert_eq!(v.status, Status::Refuted);
        let sys = shift_as_composition(&one).unwrap();
        for i in -5..5 {
            assert_eq!(sys.measure(&Atom::Point(i)).unwrap(), ExtendedWeight::one());
        }
        replay(&sys, &v).unwrap();

        let two = WeightedShift::constant(q(2, 1)).unwrap();
        let v = check_weighted_shift(&two, 64).unwrap();
        assert_eq!(v.status, Status::Proved);
        let sys = shift_as_composition(&two).unwrap();
        for i in -5..5 {
            assert_eq!(sys.measure(&Atom::Point(i)).unwrap(), ExtendedWeight::Finite(Rational::pow2(-i)));
        }
        replay(&sys, &v).unwrap();
    }

    #[test]
    fn inli_weights_rebuild_the_measure() {
        let inli = gallery::inli::<Rational>();
        let (profile, _) = inli.line_profile().unwrap();
        let shift = WeightedShift::new(ShiftRule::FromProfile(profile.clone()), Exponent::ONE).unwrap();
        let sys = shift_as_composition(&shift).unwrap();
        for i in -40..40 {
            assert_eq!(sys.measure(&Atom::Point(i)).unwrap(), inli.measure(&Atom::Point(i)).unwrap());
        }
    }

    #[test]
    fn periodic_model_matches_weights() {
        let shift = WeightedShift::new(
            ShiftRule::Periodic {
                left: vec![q(1, 2), q(3, 2)],
                window: vec![q(2, 1), q(1, 3), q(5, 4)],
                start: -1,
                right: vec![q(2, 3), q(1, 1), q(5, 4)],
            },
            Exponent::ONE,
        )
        .unwrap();
        let sys = shift_as_composition(&shift).unwrap();
        for i in -30..30 {
            let a = sys.measure(&Atom::Point(i)).unwrap().into_finite().unwrap();
            let b = sys.measure(&Atom::Point(i + 1)).unwrap().into_finite().unwrap();
            assert_eq!(a / b, shift.weight(i), "at {i}");
        }
        let v = check_weighted_shift(&shift, 64).unwrap();
        replay(&sys, &v).unwrap();
        assert_eq!(window_max_product(&shift, 40), window_max_product_oracle(&shift, 40));
    }
}
