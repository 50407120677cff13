//! Three-valued verdicts with replayable witnesses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::atom::{Atom, AtomSet};
use crate::measure::{backward_trace, forward_trace};
use crate::oracle::{Direction, Envelope, SeqFact, Thm2Claim};
use crate::scalar::Scalar;
use crate::system::AtomicSystem;
use crate::weight::ExtendedWeight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriterionId {
    #[serde(rename = "LY1")]
    Ly1,
    #[serde(rename = "LY2")]
    Ly2,
    #[serde(rename = "LY3")]
    Ly3,
    #[serde(rename = "LY4")]
    Ly4,
    #[serde(rename = "LY5")]
    Ly5,
    #[serde(rename = "LY6")]
    Ly6,
    #[serde(rename = "LY7")]
    Ly7,
    #[serde(rename = "THM2_A")]
    Thm2A,
    #[serde(rename = "THM2_B")]
    Thm2B,
    #[serde(rename = "COR1_i")]
    Cor1I,
    #[serde(rename = "COR1_ii")]
    Cor1Ii,
    #[serde(rename = "CTHM2_a")]
    Cthm2A,
    #[serde(rename = "CTHM2_b")]
    Cthm2B,
    #[serde(rename = "WSHIFT")]
    Wshift,
}

impl CriterionId {
    pub const ALL: [CriterionId; 14] = [
        CriterionId::Ly1,
        CriterionId::Ly2,
        CriterionId::Ly3,
        CriterionId::Ly4,
        CriterionId::Ly5,
        CriterionId::Ly6,
        CriterionId::Ly7,
        CriterionId::Thm2A,
        CriterionId::Thm2B,
        CriterionId::Cor1I,
        CriterionId::Cor1Ii,
        CriterionId::Cthm2A,
        CriterionId::Cthm2B,
        CriterionId::Wshift,
    ];

    pub const LY: [CriterionId; 7] = [
        CriterionId::Ly1,
        CriterionId::Ly2,
        CriterionId::Ly3,
        CriterionId::Ly4,
        CriterionId::Ly5,
        CriterionId::Ly6,
        CriterionId::Ly7,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CriterionId::Ly1 => "LY1",
            CriterionId::Ly2 => "LY2",
            CriterionId::Ly3 => "LY3",
            CriterionId::Ly4 => "LY4",
            CriterionId::Ly5 => "LY5",
            CriterionId::Ly6 => "LY6",
            CriterionId::Ly7 => "LY7",
            CriterionId::Thm2A => "THM2_A",
            CriterionId::Thm2B => "THM2_B",
            CriterionId::Cor1I => "COR1_i",
            CriterionId::Cor1Ii => "COR1_ii",
            CriterionId::Cthm2A => "CTHM2_a",
            CriterionId::Cthm2B => "CTHM2_b",
            CriterionId::Wshift => "WSHIFT",
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CriterionId::ALL
            .iter()
            .find(|c| c.as_str() == s)
            .copied()
            .ok_or_else(|| format!("unknown criterion `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Proved,
    Refuted,
    UnknownAtHorizon,
}

impl Status {
    pub fn negate(self) -> Self {
        match self {
            Status::Proved => Status::Refuted,
            Status::Refuted => Status::Proved,
            Status::UnknownAtHorizon => Status::UnknownAtHorizon,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Status::UnknownAtHorizon
    }

    pub fn letter(self) -> &'static str {
        match self {
            Status::Proved => "P",
            Status::Refuted => "R",
            Status::UnknownAtHorizon => "?",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proved => "Proved",
            Status::Refuted => "Refuted",
            Status::UnknownAtHorizon => "UnknownAtHorizon",
        })
    }
}

/// Property of `n ↦ μ(f^{∓n}(B))` established by a fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    LiminfZero,
    LiminfPositive,
    LimsupPositive,
    Vanishes,
    /// Not both `liminf = 0` and `limsup > 0`.
    NotOscillating,
}

impl Claim {
    pub fn holds<S: Scalar>(&self, fact: &SeqFact<S>) -> bool {
        match self {
            Claim::LiminfZero => fact.liminf.is_zero(),
            Claim::LiminfPositive => fact.liminf.is_positive(),
            Claim::LimsupPositive => fact.limsup.is_positive(),
            Claim::Vanishes => fact.vanishes(),
            Claim::NotOscillating => !(fact.liminf.is_zero() && fact.limsup.is_positive()),
        }
    }

    /// Whether `env` on `part` is finite-horizon evidence for the claim about
    /// `set`. Upper bounds must cover the whole set; lower bounds on a part
    /// transfer to the whole set.
    fn supported_by<S: Scalar>(&self, env: &Envelope<S>, part: &[Atom], set: &[Atom]) -> bool {
        let whole = part == set;
        let one = S::one();
        match (self, env) {
            (Claim::LiminfZero, Envelope::DipsAlong { ratio, .. }) => whole && *ratio < one,
            (Claim::LiminfZero | Claim::Vanishes, Envelope::DecayFrom { ratio, .. }) => whole && *ratio < one,
            (Claim::LiminfZero, Envelope::PeriodicFrom { values, .. }) => whole && values.iter().any(|v| v.is_zero()),
            (Claim::Vanishes, Envelope::PeriodicFrom { values, .. }) => whole && values.iter().all(|v| v.is_zero()),
            (Claim::LiminfPositive, Envelope::GrowthFrom { scale, ratio, .. }) => scale.is_positive() && *ratio >= one,
            (Claim::LiminfPositive, Envelope::PeriodicFrom { values, .. }) => values.iter().all(|v| v.is_positive()),
            (Claim::LimsupPositive, Envelope::PeaksAlong { scale, ratio, .. }) => scale.is_positive() && *ratio >= one,
            (Claim::LimsupPositive, Envelope::GrowthFrom { scale, ratio, .. }) => scale.is_positive() && *ratio >= one,
            (Claim::LimsupPositive, Envelope::PeriodicFrom { values, .. }) => values.iter().any(|v| v.is_positive()),
            (Claim::NotOscillating, env) => {
                Claim::Vanishes.supported_by(env, part, set) || Claim::LiminfPositive.supported_by(env, part, set)
            }
            _ => false,
        }
    }
}

/// Evidence carried by a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness<S> {
    /// A fact about `n ↦ μ(f^{∓n}(B))` establishing `claim`.
    Orbit {
        set: Vec<Atom>,
        direction: Direction,
        fact: SeqFact<S>,
        claim: Claim,
    },
    /// A vector `φ` whose orbit norms are controlled by the orbit of its
    /// support: `min|φ|^p μ(f^{-n}(S)) ≤ ‖T^n φ‖^p ≤ max|φ|^p μ(f^{-n}(S))`.
    Vector {
        support: Vec<Atom>,
        fact: SeqFact<S>,
        claim: Claim,
        bound: Option<S>,
    },
    /// Every component verdict.
    All(Vec<Verdict<S>>),
    /// Consequence of another verdict along a valid implication.
    Implied { edge: String, premise: Box<Verdict<S>> },
    /// Statement about every admissible set, replayed on samples.
    Universal {
        rule: String,
        direction: Direction,
        claim: Claim,
        bound: Option<S>,
        samples: Vec<Vec<Atom>>,
    },
    /// `Q(A) = sup { μ(f^k(A))/μ(f^l(A)) : k < l }` is finite for every `A`
    /// of finite positive measure, so no such `A` oscillates backward.
    /// Replayed by checking that the window supremum over `|k|, |l| ≤ w`
    /// does not grow from `w = H/2` to `w = H`.
    /// A sample with a cap is instead checked against it.
    RatioWindow {
        rule: String,
        samples: Vec<Vec<Atom>>,
        caps: Vec<Option<S>>,
    },
    /// Supremum of a ratio family; `sup = None` means unbounded.
    Ratio {
        set: Option<Vec<Atom>>,
        sup: Option<S>,
        rule: String,
    },
    /// The (A)/(B) characterization over a closed-form family.
    Family(Thm2Claim<S>),
    /// Exhaustive search over a finite system.
    Exhaustive { rule: String, checked: usize },
    /// Nothing conclusive: the extreme value seen within the horizon.
    Seen {
        set: Option<Vec<Atom>>,
        best: Option<ExtendedWeight<S>>,
        at: Option<u64>,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<S> {
    pub criterion: CriterionId,
    pub status: Status,
    pub horizon: u64,
    pub witness: Witness<S>,
}

impl<S: Scalar> Verdict<S> {
    pub fn new(criterion: CriterionId, status: Status, horizon: u64, witness: Witness<S>) -> Self {
        Verdict {
            criterion,
            status,
            horizon,
            witness,
        }
    }

    pub fn unknown(criterion: CriterionId, horizon: u64, reason: impl Into<String>) -> Self {
        Verdict::new(
            criterion,
            Status::UnknownAtHorizon,
            horizon,
            Witness::Seen {
                set: None,
                best: None,
                at: None,
                reason: reason.into(),
            },
        )
    }
}

/// Per-criterion verdicts of one system.
pub type Report<S> = BTreeMap<CriterionId, Verdict<S>>;

pub(crate) fn trace<S: Scalar>(sys: &AtomicSystem<S>, set: &[Atom], dir: Direction, h: u64) -> Result<Vec<ExtendedWeight<S>>, String> {
    let aset: AtomSet = set.iter().copied().collect();
    match dir {
        Direction::Backward => backward_trace(sys, &aset, h),
        Direction::Forward => forward_trace(sys, &aset, h),
    }
    .map_err(|e| e.to_string())
}

pub(crate) fn check_fact<S: Scalar>(
    sys: &AtomicSystem<S>,
    set: &[Atom],
    dir: Direction,
    fact: &SeqFact<S>,
    claim: Claim,
    h: u64,
) -> Result<(), String> {
    if !claim.holds(fact) {
        return Err(format!("fact does not establish {claim:?}"));
    }
    let mut supported = false;
    for pe in &fact.envelopes {
        let values = trace(sys, &pe.part, dir, h)?;
        pe.envelope.check(&values)?;
        supported |= claim.supported_by(&pe.envelope, &pe.part, set);
    }
    if !supported {
        return Err(format!("no envelope supports {claim:?} for {}", fmt_set(set)));
    }
    Ok(())
}

/// `max { μ(f^k(A))/μ(f^l(A)) : −w ≤ k < l ≤ w, 0 < μ(f^l(A)) < ∞ }`,
/// with `μ(f^{−n}(A))` read as the measure of the preimage.
pub fn window_ratio_sup<S: Scalar>(sys: &AtomicSystem<S>, set: &[Atom], w: u64) -> Result<ExtendedWeight<S>, String> {
    let back = trace(sys, set, Direction::Backward, w)?;
    let fwd = trace(sys, set, Direction::Forward, w)?;
    // index k + w holds μ(f^k(A))
    let values: Vec<ExtendedWeight<S>> = back.iter().skip(1).rev().chain(fwd.iter()).cloned().collect();
    let mut best = ExtendedWeight::zero();
    let mut prefix_max = ExtendedWeight::zero();
    for (l, vl) in values.iter().enumerate() {
        if l > 0 {
            if let ExtendedWeight::Finite(d) = vl {
                if d.is_positive() {
                    best = best.max(prefix_max.ratio(vl).expect("positive denominator"));
                }
            }
        }
        prefix_max = prefix_max.max(vl.clone());
    }
    Ok(best)
}

/// Steps after which the orbit of a sample near the origin has left its
/// starting region; "eventually" is never judged earlier.
pub fn transient(set: &[Atom]) -> u64 {
    2 * (set.iter().map(|a| a.radius()).max().unwrap_or(0) + 1)
}

pub fn fmt_set(set: &[Atom]) -> String {
    AtomSet::Finite(set.iter().copied().collect()).to_string()
}

/// Re-derives the status of `v` from its witness using the measure
/// primitives of `sys`.
pub fn replay<S: Scalar>(sys: &AtomicSystem<S>, v: &Verdict<S>) -> Result<(), String> {
    let h = v.horizon;
    match &v.witness {
        Witness::Orbit {
            set,
            direction,
            fact,
            claim,
        } => check_fact(sys, set, *direction, fact, *claim, h),
        Witness::Vector { support, fact, claim, .. } => check_fact(sys, support, Direction::Backward, fact, *claim, h),
        Witness::All(parts) => {
            for p in parts {
                replay(sys, p)?;
            }
            let derived = if parts.iter().all(|p| p.status == Status::Proved) {
                Status::Proved
            } else if parts.iter().any(|p| p.status == Status::Refuted) {
                Status::Refuted
            } else {
                Status::UnknownAtHorizon
            };
            if derived != v.status {
                return Err(format!("components give {derived}, verdict says {}", v.status));
            }
            Ok(())
        }
        Witness::Implied { premise, .. } => {
            replay(sys, premise)?;
            let ok = crate::audit::implied_status(&sys.flags, premise.criterion, premise.status, v.criterion) == Some(v.status);
            if ok {
                Ok(())
            } else {
                Err(format!("{} {} does not imply {} {}", premise.criterion, premise.status, v.criterion, v.status))
            }
        }
        Witness::Universal {
            direction,
            claim,
            bound,
            samples,
            ..
        } => {
            for s in samples {
                let values = trace(sys, s, *direction, h)?;
                if let Some(b) = bound {
                    let bound = ExtendedWeight::Finite(b.clone());
                    if let Some(n) = ((h / 2).max(transient(s))..=h).find(|&n| values[n as usize] < bound) {
                        return Err(format!("sample {} drops below {b} at n = {n}", fmt_set(s)));
                    }
                }
                if let Some(fact) = crate::asymptotics::derive_fact(sys, s, *direction) {
                    if !claim.holds(&fact) {
                        return Err(format!("sample {} contradicts {claim:?}", fmt_set(s)));
                    }
                }
            }
            Ok(())
        }
        Witness::RatioWindow { samples, caps, .. } => {
            for (x, s) in samples.iter().enumerate() {
                let full = window_ratio_sup(sys, s, h)?;
                match caps.get(x).cloned().flatten() {
                    Some(cap) => {
                        if full > ExtendedWeight::Finite(cap.clone()) {
                            return Err(format!("window ratio of {} exceeds its cap {cap}", fmt_set(s)));
                        }
                    }
                    None => {
                        let from = (h / 2).max(transient(s));
                        if from < h && window_ratio_sup(sys, s, from)? != full {
                            return Err(format!("window ratio of {} still grows at horizon {h}", fmt_set(s)));
                        }
                    }
                }
            }
            Ok(())
        }
        Witness::Ratio { set, sup, .. } => {
            let again = match (v.criterion, set) {
                (CriterionId::Cor1Ii, Some(set)) => crate::asymptotics::two_sided_ratio_sup(sys, set),
                (CriterionId::Cthm2B | CriterionId::Wshift, _) => crate::criteria::line_ratio_sup(sys),
                _ => None,
            };
            if let Some(again) = again {
                if &again != sup {
                    return Err("ratio supremum does not re-derive".into());
                }
            }
            let expect = if sup.is_none() { Status::Proved } else { Status::Refuted };
            if expect == v.status {
                Ok(())
            } else {
                Err("ratio witness disagrees with status".into())
            }
        }
        Witness::Family(claim) => crate::criteria::replay_family(sys, claim, h),
        Witness::Exhaustive { .. } => Ok(()),
        Witness::Seen { .. } => {
            if v.status == Status::UnknownAtHorizon {
                Ok(())
            } else {
                Err("decided verdict without certificate".into())
            }
        }
    }
}
