//! Two-sided measure profiles `i ↦ μ({i})` on `ℤ` and the exact asymptotics
//! of measure sequences derived from them.

use crate::atom::Atom;
use crate::oracle::{Envelope, IndexRule, SeqFact};
use crate::scalar::Scalar;
use crate::sequence::{Lim, SeqRule, Sequence};
use crate::weight::ExtendedWeight;

/// `μ({i})` for `i ∈ ℤ`: `right(t) = μ({t})` and `left(t) = μ({−1−t})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZProfile<S> {
    pub left: Sequence<S>,
    pub right: Sequence<S>,
}

impl<S: Scalar> ZProfile<S> {
    pub fn new(left: Sequence<S>, right: Sequence<S>) -> Self {
        ZProfile { left, right }
    }

    pub fn value(&self, i: i64) -> ExtendedWeight<S> {
        if i >= 0 {
            self.right.value(i as u64)
        } else {
            self.left.value((-1 - i) as u64)
        }
    }

    /// Profile of `i ↦ μ({−i})`.
    pub fn reflect(&self) -> Self {
        ZProfile {
            left: self.right.drop_first(),
            right: self.left.prepend(self.right.value(0)),
        }
    }

    /// `n ↦ μ({b + n})`.
    pub fn walk_up(&self, b: i64) -> Sequence<S> {
        if b >= 0 {
            self.right.skip(b as u64)
        } else {
            let lead = (0..=(-1 - b)).rev().map(|t| self.left.value(t as u64)).collect();
            Sequence::after(lead, &self.right)
        }
    }

    /// `n ↦ μ({b − n})`.
    pub fn walk_down(&self, b: i64) -> Sequence<S> {
        if b < 0 {
            self.left.skip((-1 - b) as u64)
        } else {
            let lead = (0..=b).rev().map(|t| self.right.value(t as u64)).collect();
            Sequence::after(lead, &self.left)
        }
    }

    /// `n ↦ Σ_{b ∈ B} μ({b ± n})`, when it stays in closed form.
    pub fn walk_set(&self, points: &[i64], up: bool) -> Option<Sequence<S>> {
        let mut parts = points.iter().map(|&b| if up { self.walk_up(b) } else { self.walk_down(b) });
        let first = parts.next()?;
        parts.try_fold(first, |acc, s| acc.add(&s))
    }

    /// `liminf_{i → −∞} μ({i}) = 0`, when decidable.
    pub fn vanishes_left(&self) -> Option<bool> {
        self.left.tail.summary().map(|s| s.liminf.is_zero())
    }

    /// `sup { μ({i})/μ({j}) : i < j }`, `Some(None)` meaning unbounded and
    /// `None` meaning undecidable for this generator.
    pub fn ratio_sup(&self) -> Option<Option<S>> {
        ratio_sup(&self.left, &self.right)
    }
}

/// `sup { v(i)/v(j) : i < j }` for the two-sided sequence with
/// `v(i) = right(i)`, `v(−1−t) = left(t)`.
pub fn ratio_sup<S: Scalar>(left: &Sequence<S>, right: &Sequence<S>) -> Option<Option<S>> {
    let l = left.summary()?;
    let r = right.summary()?;
    // i, j both left: i further out is the later term of `left`
    let within_left = l.outward.clone();
    let within_right = r.inward.clone();
    let across = match (l.sup.clone(), r.inf.is_zero()) {
        (Some(sup), false) => Some(sup / r.inf.clone()),
        _ => None,
    };
    Some(match (within_left, within_right, across) {
        (Some(a), Some(b), Some(c)) => Some(S::max_of(S::max_of(a, b), c)),
        _ => None,
    })
}

/// Exact asymptotics of `n ↦ seq(n)` from its tail rule, with envelopes
/// attributed to `part`.
pub fn sequence_fact<S: Scalar>(seq: &Sequence<S>, part: &[Atom], rule: &str) -> Option<SeqFact<S>> {
    let p = seq.prefix_len();
    let part = part.to_vec();
    match &seq.tail {
        SeqRule::Quasi { pattern, growth } => {
            let summary = seq.tail.summary()?;
            let q = pattern.len() as u64;
            let fact = SeqFact::new(summary.liminf, summary.limsup, rule);
            let one = S::one();
            let env = if *growth == one {
                Envelope::PeriodicFrom {
                    from: p,
                    values: pattern.iter().cloned().map(ExtendedWeight::Finite).collect(),
                }
            } else if *growth < one {
                Envelope::DecayFrom {
                    from: p,
                    scale: pattern.iter().cloned().reduce(S::max_of)?,
                    ratio: growth.clone(),
                    period: q,
                }
            } else {
                Envelope::GrowthFrom {
                    from: p,
                    scale: pattern.iter().cloned().reduce(S::min_of)?,
                    ratio: growth.clone(),
                    period: q,
                }
            };
            Some(fact.with_envelope(part, env))
        }
        SeqRule::Blocks { base, factor, offset } => {
            let summary = seq.tail.summary()?;
            let one = S::one();
            if *factor == one {
                let fact = SeqFact::new(summary.liminf, summary.limsup, rule);
                return Some(fact.with_envelope(
                    part,
                    Envelope::PeriodicFrom {
                        from: p,
                        values: vec![ExtendedWeight::Finite(base.clone())],
                    },
                ));
            }
            let shift = p as i64 - *offset as i64;
            // block k: starts at u = k² − 1, centre at u = k² + k − 1
            let centres = IndexRule::quadratic(1, 1, shift - 1, first_k(*offset, |k| k * k + k - 1));
            let starts = IndexRule::quadratic(1, 0, shift - 1, first_k(*offset, |k| k * k - 1));
            let fact = SeqFact::new(summary.liminf, summary.limsup, rule);
            if *factor < one {
                Some(
                    fact.with_envelope(
                        part.clone(),
                        Envelope::DipsAlong {
                            times: centres,
                            scale: base.clone(),
                            ratio: factor.clone(),
                        },
                    )
                    .with_envelope(
                        part,
                        Envelope::PeaksAlong {
                            times: starts,
                            scale: base.clone(),
                            ratio: one,
                        },
                    ),
                )
            } else {
                Some(
                    fact.with_envelope(
                        part.clone(),
                        Envelope::PeaksAlong {
                            times: centres,
                            scale: base.clone(),
                            ratio: factor.clone(),
                        },
                    )
                    .with_envelope(
                        part,
                        Envelope::GrowthFrom {
                            from: p,
                            scale: base.clone(),
                            ratio: one,
                            period: 1,
                        },
                    ),
                )
            }
        }
        _ => None,
    }
}

/// Smallest `k ≥ 1` with `pos(k) ≥ offset`.
fn first_k(offset: u64, pos: impl Fn(u64) -> u64) -> u64 {
    let mut k = 1;
    while pos(k) < offset {
        k += 1;
    }
    k
}

/// Fact that a sequence is eventually constant.
pub fn constant_fact<S: Scalar>(from: u64, value: ExtendedWeight<S>, part: &[Atom], rule: &str) -> SeqFact<S> {
    let lim = match &value {
        ExtendedWeight::Finite(v) => Lim::Exact(v.clone()),
        ExtendedWeight::Infinite => Lim::Infinite,
    };
    SeqFact::new(lim.clone(), lim, rule).with_envelope(
        part.to_vec(),
        Envelope::PeriodicFrom {
            from,
            values: vec![value],
        },
    )
}
