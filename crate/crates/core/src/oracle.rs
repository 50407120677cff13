//! Exact asymptotic facts about measure sequences and the finite-horizon
//! evidence that backs them.
//!
//! A [`SeqFact`] states the liminf/limsup of `n ↦ μ(f^{∓n}(B))` for one set
//! `B` together with closed-form envelopes. Envelopes are what makes a fact
//! replayable: evaluating the sequence up to any horizon must satisfy them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atom::Atom;
use crate::scalar::Scalar;
use crate::sequence::Lim;
use crate::weight::ExtendedWeight;

/// Which iterate family a fact is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `μ(f^{-n}(B))`
    Backward,
    /// `μ(f^n(B))`
    Forward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Backward => "backward",
            Direction::Forward => "forward",
        })
    }
}

/// Index sequence `n_k = a·k² + b·k + c` for `k ≥ k0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRule {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub k0: u64,
}

impl IndexRule {
    pub fn quadratic(a: i64, b: i64, c: i64, k0: u64) -> Self {
        IndexRule { a, b, c, k0 }
    }

    pub fn at(&self, k: u64) -> i64 {
        let k = k as i64;
        self.a * k * k + self.b * k + self.c
    }

    /// `(k, n_k)` pairs with `0 ≤ n_k ≤ horizon`, `k ≥ k0`.
    pub fn up_to(&self, horizon: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut k = self.k0;
        // sequences used here are nondecreasing from k0 on
        loop {
            let n = self.at(k);
            if n > horizon as i64 {
                break;
            }
            if n >= 0 {
                out.push((k, n as u64));
            }
            k += 1;
            if k > self.k0 + 4 * horizon + 8 {
                break;
            }
        }
        out
    }
}

/// Closed-form constraint on a sequence `v(n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope<S> {
    /// `v(n) ≤ scale · ratio^⌊(n − from)/period⌋` for `n ≥ from`.
    DecayFrom { from: u64, scale: S, ratio: S, period: u64 },
    /// `v(n) ≥ scale · ratio^⌊(n − from)/period⌋` for `n ≥ from`.
    GrowthFrom { from: u64, scale: S, ratio: S, period: u64 },
    /// `v(n) = values[(n − from) mod len]` for `n ≥ from`.
    PeriodicFrom { from: u64, values: Vec<ExtendedWeight<S>> },
    /// `v(n_k) ≤ scale · ratio^k`.
    DipsAlong { times: IndexRule, scale: S, ratio: S },
    /// `v(n_k) ≥ scale · ratio^k`.
    PeaksAlong { times: IndexRule, scale: S, ratio: S },
}

impl<S: Scalar> Envelope<S> {
    /// Checks the envelope against `v(0..=horizon)`.
    pub fn check(&self, values: &[ExtendedWeight<S>]) -> Result<(), String> {
        let horizon = values.len().saturating_sub(1) as u64;
        match self {
            Envelope::DecayFrom {
                from,
                scale,
                ratio,
                period,
            } => {
                for n in *from..=horizon {
                    let bound = scale.clone() * ratio.powi(((n - from) / period) as i64);
                    if values[n as usize] > ExtendedWeight::Finite(bound.clone()) {
                        return Err(format!("decay envelope broken at n={n}: {} > {bound}", values[n as usize]));
                    }
                }
            }
            Envelope::GrowthFrom {
                from,
                scale,
                ratio,
                period,
            } => {
                for n in *from..=horizon {
                    let bound = scale.clone() * ratio.powi(((n - from) / period) as i64);
                    if values[n as usize] < ExtendedWeight::Finite(bound.clone()) {
                        return Err(format!("growth envelope broken at n={n}: {} < {bound}", values[n as usize]));
                    }
                }
            }
            Envelope::PeriodicFrom { from, values: cycle } => {
                for n in *from..=horizon {
                    let expect = &cycle[((n - from) as usize) % cycle.len()];
                    if &values[n as usize] != expect {
                        return Err(format!("periodic envelope broken at n={n}"));
                    }
                }
            }
            Envelope::DipsAlong { times, scale, ratio } => {
                for (k, n) in times.up_to(horizon) {
                    let bound = scale.clone() * ratio.powi(k as i64);
                    if values[n as usize] > ExtendedWeight::Finite(bound.clone()) {
                        return Err(format!("dip envelope broken at n={n}: {} > {bound}", values[n as usize]));
                    }
                }
            }
            Envelope::PeaksAlong { times, scale, ratio } => {
                for (k, n) in times.up_to(horizon) {
                    let bound = scale.clone() * ratio.powi(k as i64);
                    if values[n as usize] < ExtendedWeight::Finite(bound.clone()) {
                        return Err(format!("peak envelope broken at n={n}: {} < {bound}", values[n as usize]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Recorded evidence points `(n, bound)` up to the horizon, for reports.
    pub fn evidence_times(&self, horizon: u64) -> Vec<u64> {
        match self {
            Envelope::DipsAlong { times, .. } | Envelope::PeaksAlong { times, .. } => {
                times.up_to(horizon).into_iter().map(|(_, n)| n).collect()
            }
            Envelope::DecayFrom { from, .. }
            | Envelope::GrowthFrom { from, .. }
            | Envelope::PeriodicFrom { from, .. } => {
                if *from <= horizon {
                    vec![*from]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

/// Envelope attached to a subset of the fact's set.
#[derive(Debug, Clone, PartialEq)]
pub struct PartEnvelope<S> {
    pub part: Vec<Atom>,
    pub envelope: Envelope<S>,
}

/// Exact asymptotics of `n ↦ μ(f^{∓n}(B))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeqFact<S> {
    pub liminf: Lim<S>,
    pub limsup: Lim<S>,
    /// Generator rule justifying the limits.
    pub rule: String,
    pub envelopes: Vec<PartEnvelope<S>>,
}

impl<S: Scalar> SeqFact<S> {
    pub fn new(liminf: Lim<S>, limsup: Lim<S>, rule: impl Into<String>) -> Self {
        SeqFact {
            liminf,
            limsup,
            rule: rule.into(),
            envelopes: Vec::new(),
        }
    }

    pub fn with_envelope(mut self, part: Vec<Atom>, envelope: Envelope<S>) -> Self {
        self.envelopes.push(PartEnvelope { part, envelope });
        self
    }

    /// Sequence converges to zero.
    pub fn vanishes(&self) -> bool {
        self.limsup.is_zero()
    }

    pub fn scale(&self, k: &S) -> Self {
        SeqFact {
            liminf: self.liminf.scale(k),
            limsup: self.limsup.scale(k),
            rule: self.rule.clone(),
            envelopes: self.envelopes.clone(),
        }
    }

    /// Asymptotics of the sum of two sequences on disjoint parts.
    /// `None` when the combination is not determined by the parts.
    pub fn combine(&self, other: &SeqFact<S>) -> Option<SeqFact<S>> {
        let liminf = if self.vanishes() {
            other.liminf.clone()
        } else if other.vanishes() {
            self.liminf.clone()
        } else {
            match (&self.liminf, &other.liminf) {
                (Lim::Infinite, _) | (_, Lim::Infinite) => Lim::Infinite,
                (a, b) => {
                    let lo = match (a.lower(), b.lower()) {
                        (ExtendedWeight::Finite(x), ExtendedWeight::Finite(y)) => x + y,
                        _ => unreachable!(),
                    };
                    if lo.is_positive() {
                        Lim::AtLeast(lo)
                    } else {
                        return None;
                    }
                }
            }
        };
        let limsup = if self.vanishes() {
            other.limsup.clone()
        } else if other.vanishes() {
            self.limsup.clone()
        } else {
            match (&self.limsup, &other.limsup) {
                (Lim::Infinite, _) | (_, Lim::Infinite) => Lim::Infinite,
                (a, b) => {
                    let lo = match (a.lower(), b.lower()) {
                        (ExtendedWeight::Finite(x), ExtendedWeight::Finite(y)) => S::max_of(x, y),
                        _ => unreachable!(),
                    };
                    Lim::AtLeast(lo)
                }
            }
        };
        let mut envelopes = self.envelopes.clone();
        envelopes.extend(other.envelopes.iter().cloned());
        Some(SeqFact {
            liminf,
            limsup,
            rule: format!("{}; {}", self.rule, other.rule),
            envelopes,
        })
    }
}

/// A fact declared for an explicit set.
#[derive(Debug, Clone, PartialEq)]
pub struct DeclaredFact<S> {
    pub set: Vec<Atom>,
    pub direction: Direction,
    pub fact: SeqFact<S>,
}

/// Existential criteria whose witness is a single set `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SetCriterion {
    #[serde(rename = "LY3")]
    Ly3,
    #[serde(rename = "LY4")]
    Ly4,
    #[serde(rename = "LY5")]
    Ly5,
    #[serde(rename = "LY6")]
    Ly6,
}

/// Universal statement refuting a criterion for every admissible set.
#[derive(Debug, Clone, PartialEq)]
pub struct Refutation<S> {
    pub criterion: RefutedCriterion,
    pub rule: String,
    /// For liminf-type refutations: every admissible `B` satisfies
    /// `μ(f^{∓n}(B)) ≥ bound · μ_min(B)` eventually, where `μ_min(B)` is
    /// `1` when `relative` is false.
    pub bound: Option<S>,
    /// Sample sets replayed against the statement.
    pub samples: Vec<Vec<Atom>>,
    /// Per-sample cap on the window ratio for ratio-type refutations; a
    /// missing cap asks for the window supremum to stabilize instead.
    pub caps: Vec<Option<S>>,
}

/// Criteria that may carry a universal refutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RefutedCriterion {
    /// No `B` with `μ(B) > 0` has `liminf μ(f^{-n}(B)) = 0`.
    #[serde(rename = "LY3")]
    Ly3,
    /// No `B` with `μ(B) > 0` has `liminf μ(f^n(B)) = 0`.
    #[serde(rename = "LY4")]
    Ly4,
    /// No `B` of finite positive measure has a semi-irregular indicator.
    #[serde(rename = "LY6")]
    Ly6,
    /// No vector is semi-irregular.
    #[serde(rename = "LY1")]
    Ly1,
}

/// Closed-form family `B_i`, `i ≥ 1`, for the (A)/(B) criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyRule {
    /// `B_i = {(i, row)}`.
    ColumnCell { row: i64 },
    /// `B_i = {i + offset}` on an integer space.
    Point { offset: i64 },
}

impl FamilyRule {
    pub fn member(&self, i: u64) -> Vec<Atom> {
        match *self {
            FamilyRule::ColumnCell { row } => vec![Atom::Cell(i as i64, row)],
            FamilyRule::Point { offset } => vec![Atom::Point(i as i64 + offset)],
        }
    }
}

/// Generator-level answer for the (A)/(B) characterization.
#[derive(Debug, Clone, PartialEq)]
pub enum Thm2Claim<S> {
    /// Every member vanishes along all `n` (so `α_j = j` works) and the
    /// normalized orbit of `B_i` reaches `scale · ratio^i` at `n = a·i + b`.
    Holds {
        family: FamilyRule,
        peak_time: (i64, i64),
        peak_scale: S,
        peak_ratio: S,
        rule: String,
    },
    /// Every nonempty family satisfying (A) is contained in the sets listed
    /// by `admissible`, and for those the supremum in (B) equals `sup`.
    Fails {
        sup: S,
        admissible: String,
        samples: Vec<Vec<Atom>>,
        rule: String,
    },
}

/// All declared asymptotic knowledge about a system.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemOracle<S> {
    pub facts: Vec<DeclaredFact<S>>,
    pub witnesses: Vec<(SetCriterion, Vec<Atom>)>,
    pub refutations: Vec<Refutation<S>>,
    pub thm2: Option<Thm2Claim<S>>,
}

impl<S> Default for SystemOracle<S> {
    fn default() -> Self {
        SystemOracle {
            facts: Vec::new(),
            witnesses: Vec::new(),
            refutations: Vec::new(),
            thm2: None,
        }
    }
}

impl<S: Scalar> SystemOracle<S> {
    pub fn is_empty(&self) -> bool {
        self.facts.is_empty() && self.witnesses.is_empty() && self.refutations.is_empty() && self.thm2.is_none()
    }

    pub fn fact_for(&self, set: &[Atom], direction: Direction) -> Option<&SeqFact<S>> {
        self.facts
            .iter()
            .find(|f| f.direction == direction && f.set == set)
            .map(|f| &f.fact)
    }

    pub fn witness(&self, c: SetCriterion) -> Option<&Vec<Atom>> {
        self.witnesses.iter().find(|(k, _)| *k == c).map(|(_, s)| s)
    }

    pub fn refutation(&self, c: RefutedCriterion) -> Option<&Refutation<S>> {
        self.refutations.iter().find(|r| r.criterion == c)
    }

    pub fn declare(&mut self, set: Vec<Atom>, direction: Direction, fact: SeqFact<S>) {
        let mut set = set;
        set.sort();
        set.dedup();
        self.facts.push(DeclaredFact { set, direction, fact });
    }

    /// Merges `other` into `self`, keeping existing entries on conflict.
    pub fn merge(&mut self, other: SystemOracle<S>) {
        for f in other.facts {
            if self.fact_for(&f.set, f.direction).is_none() {
                self.facts.push(f);
            }
        }
        for (c, w) in other.witnesses {
            if self.witness(c).is_none() {
                self.witnesses.push((c, w));
            }
        }
        for r in other.refutations {
            if self.refutation(r.criterion).is_none() {
                self.refutations.push(r);
            }
        }
        if self.thm2.is_none() {
            self.thm2 = other.thm2;
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

    fn w(n: i64, d: i64) -> ExtendedWeight<Rational> {
        ExtendedWeight::Finite(q(n, d))
    }

    #[test]
    fn index_rule_enumeration() {
        let r = IndexRule::quadratic(1, 1, -2, 1);
        assert_eq!(r.up_to(20), vec![(1, 0), (2, 4), (3, 10), (4, 18)]);
    }

    #[test]
    fn decay_envelope() {
        let vals: Vec<_> = (0..10).map(|n| w(1, 1 << n)).collect();
        let env = Envelope::DecayFrom {
            from: 2,
            scale: q(1, 4),
            ratio: q(1, 2),
            period: 1,
        };
        assert!(env.check(&vals).is_ok());
        let tight = Envelope::DecayFrom {
            from: 2,
            scale: q(1, 8),
            ratio: q(1, 2),
            period: 1,
        };
        assert!(tight.check(&vals).is_err());
    }

    #[test]
    fn combine_vanishing_and_oscillating() {
        let v = SeqFact::<Rational>::new(Lim::zero(), Lim::zero(), "a");
        let o = SeqFact::new(Lim::zero(), Lim::AtLeast(q(1, 1)), "b");
        let c = v.combine(&o).unwrap();
        assert!(c.liminf.is_zero());
        assert!(c.limsup.is_positive());
        // two oscillating parts: liminf not determined
        assert!(o.combine(&o).is_none());
    }
}
