//! One-sided weight sequences `t ↦ v(t)`, `t ≥ 0`, given by a finite prefix
//! followed by a closed-form tail rule.
//!
//! The tail rules are the shapes that occur in measure tables on `ℤ` and `ℕ`:
//! eventually periodic-geometric sequences, symmetric mountain or valley
//! blocks of growing width, and running products of another rule. For the
//! first two families the summary functions return exact limits and ratio
//! suprema; the others are evaluated pointwise only.

use crate::scalar::Scalar;
use crate::weight::ExtendedWeight;

/// Closed-form tail of a sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum SeqRule<S> {
    /// `v(t) = pattern[t mod q] · growth^⌊t/q⌋`.
    Quasi { pattern: Vec<S>, growth: S },
    /// Blocks `k = 1, 2, …` of length `2k + 1` whose entries are
    /// `base · factor^min(d, 2k − d)` at position `d`; the rule is read from
    /// position `offset` of the concatenation.
    Blocks { base: S, factor: S, offset: u64 },
    /// Runs `k = 1, 2, …` made of `2k − 1` copies of `up` then `2k` copies of
    /// `down`, read from `offset`.
    Zigzag { up: S, down: S, offset: u64 },
    /// `v(t) = scale · (∏_{s < t} w(s))^power`, or `∏_{s ≤ t}` if `inclusive`.
    Products {
        weights: Box<SeqRule<S>>,
        power: u32,
        scale: S,
        inclusive: bool,
    },
}

/// Limit value of a nonnegative sequence: an exact value, a strictly
/// positive lower bound, or `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub enum Lim<S> {
    Exact(S),
    AtLeast(S),
    Infinite,
}

impl<S: Scalar> Lim<S> {
    pub fn zero() -> Self {
        Lim::Exact(S::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Lim::Exact(v) if v.is_zero())
    }

    /// Strictly positive (possibly infinite).
    pub fn is_positive(&self) -> bool {
        match self {
            Lim::Exact(v) | Lim::AtLeast(v) => v.is_positive(),
            Lim::Infinite => true,
        }
    }

    /// Best known lower bound.
    pub fn lower(&self) -> ExtendedWeight<S> {
        match self {
            Lim::Exact(v) | Lim::AtLeast(v) => ExtendedWeight::Finite(v.clone()),
            Lim::Infinite => ExtendedWeight::Infinite,
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        match self {
            Lim::Exact(v) => Lim::Exact(v.clone() * k.clone()),
            Lim::AtLeast(v) => Lim::AtLeast(v.clone() * k.clone()),
            Lim::Infinite if k.is_zero() => Lim::zero(),
            Lim::Infinite => Lim::Infinite,
        }
    }
}

/// Exact description of a tail, available for `Quasi` and `Blocks` rules
/// with positive parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSummary<S> {
    pub liminf: Lim<S>,
    pub limsup: Lim<S>,
    /// Infimum over the whole sequence (0 allowed).
    pub inf: S,
    /// Supremum over the whole sequence, `None` when unbounded.
    pub sup: Option<S>,
    /// `sup { v(t)/v(s) : s < t }`, `None` when unbounded.
    pub outward: Option<S>,
    /// `sup { v(s)/v(t) : s < t }`, `None` when unbounded.
    pub inward: Option<S>,
    /// `Σ_t v(t)` when finite.
    pub total: Option<S>,
}

fn max_s<S: Scalar>(it: impl IntoIterator<Item = S>) -> Option<S> {
    it.into_iter().reduce(S::max_of)
}

fn min_s<S: Scalar>(it: impl IntoIterator<Item = S>) -> Option<S> {
    it.into_iter().reduce(S::min_of)
}

fn opt_max<S: Scalar>(a: Option<S>, b: Option<S>) -> Option<S> {
    match (a, b) {
        (Some(x), Some(y)) => Some(S::max_of(x, y)),
        _ => None,
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Block index `k ≥ 1` and position `d ∈ [0, 2k]` of absolute position `u`
/// in the concatenation of blocks of length `2k + 1` (block `k` starts at
/// `k² − 1`).
pub fn block_position(u: u64) -> (u64, u64) {
    let k = isqrt(u + 1);
    (k, u + 1 - k * k)
}

/// Run index `k ≥ 1` and position in the zigzag concatenation (run `k` has
/// length `4k − 1` and starts at `(k − 1)(2k − 1)`).
pub fn zigzag_position(u: u64) -> (u64, u64) {
    let mut k = ((u as f64 / 2.0).sqrt() as u64).max(1);
    while k > 1 && (k - 1) * (2 * k - 1) > u {
        k -= 1;
    }
    while k * (2 * k + 1) <= u {
        k += 1;
    }
    (k, u - (k - 1) * (2 * k - 1))
}

impl<S: Scalar> SeqRule<S> {
    pub fn constant(c: S) -> Self {
        SeqRule::Quasi {
            pattern: vec![c],
            growth: S::one(),
        }
    }

    pub fn geometric(start: S, ratio: S) -> Self {
        SeqRule::Quasi {
            pattern: vec![start],
            growth: ratio,
        }
    }

    pub fn value(&self, t: u64) -> S {
        match self {
            SeqRule::Quasi { pattern, growth } => {
                let q = pattern.len() as u64;
                pattern[(t % q) as usize].clone() * growth.powi((t / q) as i64)
            }
            SeqRule::Blocks {
                base,
                factor,
                offset,
            } => {
                let (k, d) = block_position(t + offset);
                base.clone() * factor.powi(d.min(2 * k - d) as i64)
            }
            SeqRule::Zigzag { up, down, offset } => {
                let (k, d) = zigzag_position(t + offset);
                if d < 2 * k - 1 {
                    up.clone()
                } else {
                    down.clone()
                }
            }
            SeqRule::Products {
                weights,
                power,
                scale,
                inclusive,
            } => {
                let upto = if *inclusive { t + 1 } else { t };
                let mut acc = S::one();
                for s in 0..upto {
                    acc = acc * weights.value(s);
                }
                scale.clone() * acc.powi(*power as i64)
            }
        }
    }

    /// The rule read from position `k` onwards.
    pub fn shifted(&self, k: u64) -> Self {
        if k == 0 {
            return self.clone();
        }
        match self {
            SeqRule::Quasi { pattern, growth } => {
                let q = pattern.len() as u64;
                let new_pattern = (0..q).map(|r| self.value(k + r)).collect::<Vec<_>>();
                // value(k + r + q·m) = value(k + r) · growth^m
                SeqRule::Quasi {
                    pattern: new_pattern,
                    growth: growth.clone(),
                }
            }
            SeqRule::Blocks {
                base,
                factor,
                offset,
            } => SeqRule::Blocks {
                base: base.clone(),
                factor: factor.clone(),
                offset: offset + k,
            },
            SeqRule::Zigzag { up, down, offset } => SeqRule::Zigzag {
                up: up.clone(),
                down: down.clone(),
                offset: offset + k,
            },
            SeqRule::Products {
                weights,
                power,
                scale,
                inclusive,
            } => {
                let mut lead = S::one();
                for s in 0..k {
                    lead = lead * weights.value(s);
                }
                SeqRule::Products {
                    weights: Box::new(weights.shifted(k)),
                    power: *power,
                    scale: scale.clone() * lead.powi(*power as i64),
                    inclusive: *inclusive,
                }
            }
        }
    }

    /// Pointwise reciprocal, when it stays inside the closed-form families.
    pub fn reciprocal(&self) -> Option<Self> {
        match self {
            SeqRule::Quasi { pattern, growth } => {
                if pattern.iter().any(|p| p.is_zero()) || growth.is_zero() {
                    return None;
                }
                Some(SeqRule::Quasi {
                    pattern: pattern.iter().map(|p| S::one() / p.clone()).collect(),
                    growth: S::one() / growth.clone(),
                })
            }
            SeqRule::Blocks {
                base,
                factor,
                offset,
            } if !base.is_zero() && !factor.is_zero() => Some(SeqRule::Blocks {
                base: S::one() / base.clone(),
                factor: S::one() / factor.clone(),
                offset: *offset,
            }),
            SeqRule::Zigzag { up, down, offset } if !up.is_zero() && !down.is_zero() => {
                Some(SeqRule::Zigzag {
                    up: S::one() / up.clone(),
                    down: S::one() / down.clone(),
                    offset: *offset,
                })
            }
            _ => None,
        }
    }

    /// Whether every value of the rule is strictly positive.
    pub fn is_positive(&self) -> bool {
        match self {
            SeqRule::Quasi { pattern, growth } => {
                growth.is_positive() && pattern.iter().all(|p| p.is_positive())
            }
            SeqRule::Blocks { base, factor, .. } => base.is_positive() && factor.is_positive(),
            SeqRule::Zigzag { up, down, .. } => up.is_positive() && down.is_positive(),
            SeqRule::Products { weights, scale, .. } => scale.is_positive() && weights.is_positive(),
        }
    }

    /// Pointwise sum of two `Quasi` rules, read over the least common period.
    pub fn add(&self, other: &SeqRule<S>) -> Option<Self> {
        let (SeqRule::Quasi { pattern: pa, growth: ga }, SeqRule::Quasi { pattern: pb, growth: gb }) = (self, other)
        else {
            return None;
        };
        let (qa, qb) = (pa.len() as u64, pb.len() as u64);
        let l = num_integer::lcm(qa, qb);
        let growth = ga.powi((l / qa) as i64);
        if growth != gb.powi((l / qb) as i64) {
            return None;
        }
        let pattern = (0..l).map(|t| self.value(t) + other.value(t)).collect();
        Some(SeqRule::Quasi { pattern, growth })
    }

    /// Exact summary for `Quasi` and `Blocks` rules with positive values.
    pub fn summary(&self) -> Option<TailSummary<S>> {
        if !self.is_positive() {
            return None;
        }
        match self {
            SeqRule::Quasi { pattern, growth } => Some(quasi_summary(pattern, growth)),
            SeqRule::Blocks { base, factor, .. } => {
                let one = S::one();
                if *factor == one {
                    return Some(quasi_summary(&[base.clone()], &one));
                }
                if *factor < one {
                    Some(TailSummary {
                        liminf: Lim::zero(),
                        limsup: Lim::Exact(base.clone()),
                        inf: S::zero(),
                        sup: Some(base.clone()),
                        outward: None,
                        inward: None,
                        total: None,
                    })
                } else {
                    Some(TailSummary {
                        liminf: Lim::Exact(base.clone()),
                        limsup: Lim::Infinite,
                        inf: base.clone(),
                        sup: None,
                        outward: None,
                        inward: None,
                        total: None,
                    })
                }
            }
            _ => None,
        }
    }
}

fn quasi_summary<S: Scalar>(pattern: &[S], growth: &S) -> TailSummary<S> {
    let one = S::one();
    let q = pattern.len();
    let maxp = max_s(pattern.iter().cloned()).expect("nonempty pattern");
    let minp = min_s(pattern.iter().cloned()).expect("nonempty pattern");
    // ratios p[a]/p[b] with a later than b inside one period
    let later_over_earlier = max_s(
        (0..q).flat_map(|b| ((b + 1)..q).map(move |a| (a, b))).map(|(a, b)| pattern[a].clone() / pattern[b].clone()),
    );
    let earlier_over_later = max_s(
        (0..q).flat_map(|b| ((b + 1)..q).map(move |a| (a, b))).map(|(a, b)| pattern[b].clone() / pattern[a].clone()),
    );
    let spread = maxp.clone() / minp.clone();
    if *growth == one {
        return TailSummary {
            liminf: Lim::Exact(minp.clone()),
            limsup: Lim::Exact(maxp.clone()),
            inf: minp,
            sup: Some(maxp),
            outward: Some(spread.clone()),
            inward: Some(spread),
            total: None,
        };
    }
    if *growth < one {
        // exponents 0 (same period) and 1 (next period) dominate
        let next = spread * growth.clone();
        let outward = match later_over_earlier {
            Some(x) => S::max_of(x, next),
            None => next,
        };
        let total = pattern.iter().cloned().fold(S::zero(), |a, b| a + b) / (one - growth.clone());
        TailSummary {
            liminf: Lim::zero(),
            limsup: Lim::zero(),
            inf: S::zero(),
            sup: Some(maxp),
            outward: Some(outward),
            inward: None,
            total: Some(total),
        }
    } else {
        let next = spread / growth.clone();
        let inward = match earlier_over_later {
            Some(x) => S::max_of(x, next),
            None => next,
        };
        TailSummary {
            liminf: Lim::Infinite,
            limsup: Lim::Infinite,
            inf: minp,
            sup: None,
            outward: None,
            inward: Some(inward),
            total: None,
        }
    }
}

/// A sequence `v(t)`: explicit prefix values then a tail rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence<S> {
    pub prefix: Vec<ExtendedWeight<S>>,
    pub tail: SeqRule<S>,
}

impl<S: Scalar> Sequence<S> {
    pub fn new(prefix: Vec<ExtendedWeight<S>>, tail: SeqRule<S>) -> Self {
        Sequence { prefix, tail }
    }

    pub fn from_rule(tail: SeqRule<S>) -> Self {
        Sequence {
            prefix: Vec::new(),
            tail,
        }
    }

    pub fn value(&self, t: u64) -> ExtendedWeight<S> {
        let len = self.prefix.len() as u64;
        if t < len {
            self.prefix[t as usize].clone()
        } else {
            ExtendedWeight::Finite(self.tail.value(t - len))
        }
    }

    pub fn prefix_len(&self) -> u64 {
        self.prefix.len() as u64
    }

    /// The sequence read from position 1.
    pub fn drop_first(&self) -> Self {
        if self.prefix.is_empty() {
            Sequence::from_rule(self.tail.shifted(1))
        } else {
            Sequence::new(self.prefix[1..].to_vec(), self.tail.clone())
        }
    }

    pub fn prepend(&self, v: ExtendedWeight<S>) -> Self {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(v);
        prefix.extend(self.prefix.iter().cloned());
        Sequence::new(prefix, self.tail.clone())
    }

    /// Moves every prefix entry into a longer prefix so that the tail starts
    /// at position `len` (no-op if already longer).
    pub fn with_prefix_len(&self, len: u64) -> Self {
        let cur = self.prefix_len();
        if len <= cur {
            return self.clone();
        }
        let mut prefix = self.prefix.clone();
        for t in cur..len {
            prefix.push(self.value(t));
        }
        Sequence::new(prefix, self.tail.shifted(len - cur))
    }

    /// The sequence read from position `k`.
    pub fn skip(&self, k: u64) -> Self {
        let len = self.prefix_len();
        if k <= len {
            Sequence::new(self.prefix[k as usize..].to_vec(), self.tail.clone())
        } else {
            Sequence::from_rule(self.tail.shifted(k - len))
        }
    }

    /// `values` followed by `self`.
    pub fn after(values: Vec<ExtendedWeight<S>>, rest: &Sequence<S>) -> Self {
        let mut prefix = values;
        prefix.extend(rest.prefix.iter().cloned());
        Sequence::new(prefix, rest.tail.clone())
    }

    /// Pointwise sum, when both tails are `Quasi` rules with matching
    /// growth over a common period.
    pub fn add(&self, other: &Sequence<S>) -> Option<Self> {
        let len = self.prefix_len().max(other.prefix_len());
        let a = self.with_prefix_len(len);
        let b = other.with_prefix_len(len);
        let tail = a.tail.add(&b.tail)?;
        let prefix = a
            .prefix
            .iter()
            .zip(b.prefix.iter())
            .map(|(x, y)| x.clone() + y.clone())
            .collect();
        Some(Sequence::new(prefix, tail))
    }

    /// Exact summary, available when the prefix is positive and finite and
    /// the tail has a summary.
    pub fn summary(&self) -> Option<TailSummary<S>> {
        let tail = self.tail.summary()?;
        let mut prefix = Vec::with_capacity(self.prefix.len());
        for w in &self.prefix {
            match w {
                ExtendedWeight::Finite(v) if v.is_positive() => prefix.push(v.clone()),
                _ => return None,
            }
        }
        if prefix.is_empty() {
            return Some(tail);
        }
        let pmax = max_s(prefix.iter().cloned()).unwrap();
        let pmin = min_s(prefix.iter().cloned()).unwrap();
        let mut outward = Some(S::zero());
        let mut inward = Some(S::zero());
        for (s, vs) in prefix.iter().enumerate() {
            for vt in &prefix[s + 1..] {
                outward = opt_max(outward, Some(vt.clone() / vs.clone()));
                inward = opt_max(inward, Some(vs.clone() / vt.clone()));
            }
        }
        // prefix position s, tail position t
        outward = opt_max(outward, tail.sup.clone().map(|sup| sup / pmin.clone()));
        inward = opt_max(
            inward,
            if tail.inf.is_zero() {
                None
            } else {
                Some(pmax.clone() / tail.inf.clone())
            },
        );
        outward = opt_max(outward, tail.outward.clone());
        inward = opt_max(inward, tail.inward.clone());
        let total = tail
            .total
            .clone()
            .map(|t| prefix.iter().cloned().fold(t, |a, b| a + b));
        Some(TailSummary {
            liminf: tail.liminf,
            limsup: tail.limsup,
            inf: S::min_of(pmin, tail.inf),
            sup: tail.sup.map(|s| S::max_of(s, pmax)),
            outward,
            inward,
            total,
        })
    }

    /// `Σ_{t ≥ 0} v(t)` when it is known to be finite, `Infinite` when known
    /// to diverge, `None` otherwise.
    pub fn total(&self) -> Option<ExtendedWeight<S>> {
        let mut acc = ExtendedWeight::zero();
        for w in &self.prefix {
            acc = acc + w.clone();
        }
        if acc.is_infinite() {
            return Some(acc);
        }
        match self.tail.summary() {
            Some(s) => match s.total {
                Some(t) => Some(acc + ExtendedWeight::Finite(t)),
                None if s.limsup.is_positive() || s.liminf.is_positive() => Some(ExtendedWeight::Infinite),
                None => None,
            },
            None => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn brute_ratios(seq: &Sequence<Rational>, n: u64) -> (Rational, Rational) {
        let vals: Vec<Rational> = (0..n).map(|t| seq.value(t).into_finite().unwrap()).collect();
        let mut out = q(0, 1);
        let mut inn = q(0, 1);
        for s in 0..vals.len() {
            for t in s + 1..vals.len() {
                out = Rational::max_of(out, vals[t].clone() / vals[s].clone());
                inn = Rational::max_of(inn, vals[s].clone() / vals[t].clone());
            }
        }
        (out, inn)
    }

    #[test]
    fn block_layout() {
        // blocks of length 3, 5, 7 start at 0, 3, 8
        assert_eq!(block_position(0), (1, 0));
        assert_eq!(block_position(2), (1, 2));
        assert_eq!(block_position(3), (2, 0));
        assert_eq!(block_position(7), (2, 4));
        assert_eq!(block_position(8), (3, 0));
        let valley = SeqRule::Blocks {
            base: q(1, 1),
            factor: q(1, 2),
            offset: 0,
        };
        let vals: Vec<_> = (0..8).map(|t| valley.value(t)).collect();
        assert_eq!(vals, vec![q(1, 1), q(1, 2), q(1, 1), q(1, 1), q(1, 2), q(1, 4), q(1, 2), q(1, 1)]);
    }

    #[test]
    fn zigzag_layout() {
        // run 1: one up, two downs; run 2: three ups, four downs
        let z = SeqRule::Zigzag {
            up: q(2, 1),
            down: q(1, 2),
            offset: 0,
        };
        let vals: Vec<_> = (0..10).map(|t| z.value(t)).collect();
        let (u, d) = (q(2, 1), q(1, 2));
        assert_eq!(vals, vec![u.clone(), d.clone(), d.clone(), u.clone(), u.clone(), u.clone(), d.clone(), d.clone(), d.clone(), d.clone()]);
        for u in 0..200 {
            let (k, d) = zigzag_position(u);
            assert!(d < 4 * k - 1, "u={u}");
        }
    }

    #[test]
    fn shifted_agrees_with_value() {
        let rules = vec![
            SeqRule::Quasi {
                pattern: vec![q(1, 1), q(3, 1), q(1, 2)],
                growth: q(1, 3),
            },
            SeqRule::Blocks {
                base: q(2, 1),
                factor: q(2, 1),
                offset: 1,
            },
            SeqRule::Products {
                weights: Box::new(SeqRule::Zigzag {
                    up: q(2, 1),
                    down: q(1, 2),
                    offset: 0,
                }),
                power: 2,
                scale: q(1, 1),
                inclusive: false,
            },
        ];
        for r in rules {
            for k in 0..7 {
                let s = r.shifted(k);
                for t in 0..30 {
                    assert_eq!(s.value(t), r.value(t + k));
                }
            }
        }
    }

    #[test]
    fn quasi_summary_matches_window() {
        let seqs = vec![
            Sequence::from_rule(SeqRule::Quasi {
                pattern: vec![q(1, 1), q(3, 1), q(1, 2)],
                growth: q(1, 3),
            }),
            Sequence::new(
                vec![ExtendedWeight::Finite(q(5, 1)), ExtendedWeight::Finite(q(1, 7))],
                SeqRule::Quasi {
                    pattern: vec![q(2, 1), q(1, 1)],
                    growth: q(1, 1),
                },
            ),
            Sequence::from_rule(SeqRule::Quasi {
                pattern: vec![q(1, 1), q(1, 4)],
                growth: q(3, 1),
            }),
        ];
        for seq in seqs {
            let s = seq.summary().unwrap();
            let (out, inn) = brute_ratios(&seq, 40);
            if let Some(o) = s.outward.clone() {
                assert_eq!(o, out);
            }
            if let Some(i) = s.inward.clone() {
                assert_eq!(i, inn);
            }
        }
    }

    #[test]
    fn geometric_total() {
        let s = Sequence::from_rule(SeqRule::geometric(q(1, 2), q(1, 2)));
        assert_eq!(s.total(), Some(ExtendedWeight::Finite(q(1, 1))));
        let c = Sequence::from_rule(SeqRule::constant(q(1, 1)));
        assert_eq!(c.total(), Some(ExtendedWeight::Infinite));
    }

    #[test]
    fn add_over_common_period() {
        let a = Sequence::from_rule(SeqRule::geometric(q(1, 1), q(1, 2)));
        let b = Sequence::new(
            vec![ExtendedWeight::Finite(q(3, 1))],
            SeqRule::Quasi {
                pattern: vec![q(1, 1), q(2, 1)],
                growth: q(1, 4),
            },
        );
        let s = a.add(&b).unwrap();
        for t in 0..20 {
            assert_eq!(s.value(t), a.value(t) + b.value(t));
        }
        let c = Sequence::from_rule(SeqRule::geometric(q(1, 1), q(1, 3)));
        assert!(a.add(&c).is_none());
        assert_eq!(b.skip(3).value(2), b.value(5));
    }

    #[test]
    fn reciprocal_quasi() {
        let r = SeqRule::geometric(q(2, 1), q(1, 2)).reciprocal().unwrap();
        assert_eq!(r.value(3), q(4, 1));
    }
}
