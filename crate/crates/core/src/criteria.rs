//! Checkers for LY1–LY7 and the sufficient conditions, and the system-level
//! decision procedure.

use std::collections::BTreeSet;

use crate::asymptotics::{derive_fact, measure_sequence, table_orbit, two_sided_ratio_sup};
use crate::atom::{Atom, AtomSet};
use crate::error::{Error, Result};
use crate::measure::set_measure;
use crate::oracle::{Direction, Thm2Claim};
use crate::scalar::{Exponent, Scalar};
use crate::system::{AtomicSystem, Space};
use crate::verdict::{check_fact, fmt_set, trace, Claim, CriterionId, Status, Verdict, Witness};
use crate::weight::ExtendedWeight;

/// Members of a closed-form family replayed against its peak rule.
const FAMILY_REPLAY: u64 = 8;

fn normalized(b: &[Atom]) -> Vec<Atom> {
    let s: BTreeSet<Atom> = b.iter().copied().collect();
    s.into_iter().collect()
}

fn require_positive<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom]) -> Result<ExtendedWeight<S>> {
    let m = set_measure(sys, &b.iter().copied().collect::<AtomSet>())?;
    if m.is_zero() {
        return Err(Error::ZeroMeasureSet);
    }
    Ok(m)
}

fn to_err(e: String) -> Error {
    Error::InvalidSystem(e)
}

#[derive(Clone, Copy)]
enum Extreme {
    Min,
    Max,
}

/// Orbit-fact verdict: `yes` proves, `no` refutes; otherwise the extreme
/// value seen over the horizon.
#[allow(clippy::too_many_arguments)]
fn orbit_verdict<S: Scalar>(
    sys: &AtomicSystem<S>,
    criterion: CriterionId,
    b: &[Atom],
    dir: Direction,
    yes: Claim,
    no: Claim,
    extreme: Extreme,
    h: u64,
) -> Result<Verdict<S>> {
    if let Some(fact) = derive_fact(sys, b, dir) {
        for (claim, status) in [(yes, Status::Proved), (no, Status::Refuted)] {
            if claim.holds(&fact) && check_fact(sys, b, dir, &fact, claim, h).is_ok() {
                return Ok(Verdict::new(
                    criterion,
                    status,
                    h,
                    Witness::Orbit {
                        set: b.to_vec(),
                        direction: dir,
                        fact: fact.clone(),
                        claim,
                    },
                ));
            }
        }
    }
    let values = trace(sys, b, dir, h).map_err(to_err)?;
    let window: Vec<(usize, &ExtendedWeight<S>)> = match extreme {
        Extreme::Min => values.iter().enumerate().collect(),
        Extreme::Max => values.iter().enumerate().skip(values.len() / 2).collect(),
    };
    let (at, best) = window
        .into_iter()
        .reduce(|a, c| match extreme {
            Extreme::Min if c.1 < a.1 => c,
            Extreme::Max if c.1 > a.1 => c,
            _ => a,
        })
        .expect("trace is nonempty");
    Ok(Verdict::new(
        criterion,
        Status::UnknownAtHorizon,
        h,
        Witness::Seen {
            set: Some(b.to_vec()),
            best: Some(best.clone()),
            at: Some(at as u64),
            reason: format!("no generator certificate for the {dir} orbit of {}", fmt_set(b)),
        },
    ))
}

fn conjunction<S: Scalar>(criterion: CriterionId, h: u64, parts: Vec<Verdict<S>>) -> Verdict<S> {
    let status = if parts.iter().all(|p| p.status == Status::Proved) {
        Status::Proved
    } else if parts.iter().any(|p| p.status == Status::Refuted) {
        Status::Refuted
    } else {
        Status::UnknownAtHorizon
    };
    Verdict::new(criterion, status, h, Witness::All(parts))
}

/// `liminf μ(f^{-n}(B)) = 0`.
pub fn check_ly3<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], h: u64) -> Result<Verdict<S>> {
    let b = normalized(b);
    require_positive(sys, &b)?;
    orbit_verdict(
        sys,
        CriterionId::Ly3,
        &b,
        Direction::Backward,
        Claim::LiminfZero,
        Claim::LiminfPositive,
        Extreme::Min,
        h,
    )
}

/// `liminf μ(f^n(B)) = 0`.
pub fn check_ly4<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], h: u64) -> Result<Verdict<S>> {
    let b = normalized(b);
    require_positive(sys, &b)?;
    orbit_verdict(
        sys,
        CriterionId::Ly4,
        &b,
        Direction::Forward,
        Claim::LiminfZero,
        Claim::LiminfPositive,
        Extreme::Min,
        h,
    )
}

/// Both liminfs vanish.
pub fn check_ly5<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], h: u64) -> Result<Verdict<S>> {
    let back = check_ly3(sys, b, h)?;
    let fwd = check_ly4(sys, b, h)?;
    Ok(conjunction(CriterionId::Ly5, h, vec![back, fwd]))
}

/// `liminf μ(f^{-n}(B)) = 0 < limsup μ(f^{-n}(B))`.
pub fn check_ly6<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], h: u64) -> Result<Verdict<S>> {
    let low = check_ly3(sys, b, h)?;
    let b = normalized(b);
    let high = orbit_verdict(
        sys,
        CriterionId::Ly6,
        &b,
        Direction::Backward,
        Claim::LimsupPositive,
        Claim::Vanishes,
        Extreme::Max,
        h,
    )?;
    Ok(conjunction(CriterionId::Ly6, h, vec![low, high]))
}

/// `χ_B` is semi-irregular; `‖T^k χ_B‖^p = μ(f^{-k}(B))` makes this LY6 for `B`.
pub fn check_ly7<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], h: u64) -> Result<Verdict<S>> {
    let premise = check_ly6(sys, b, h)?;
    if premise.status == Status::UnknownAtHorizon {
        return Ok(Verdict::new(CriterionId::Ly7, premise.status, h, premise.witness));
    }
    Ok(Verdict::new(
        CriterionId::Ly7,
        premise.status,
        h,
        Witness::Implied {
            edge: "‖T^k χ_B‖^p = μ(f^{-k}(B))".into(),
            premise: Box::new(premise),
        },
    ))
}

/// `liminf ‖T^n φ‖ = 0` for a finitely supported `φ ≠ 0`, through
/// `min|φ|^p μ(f^{-n}(S)) ≤ ‖T^n φ‖^p ≤ max|φ|^p μ(f^{-n}(S))` on the
/// support `S`.
pub fn check_ly2<S: Scalar>(sys: &AtomicSystem<S>, phi: &[(Atom, S)], p: &Exponent, h: u64) -> Result<Verdict<S>> {
    let mut support: Vec<(Atom, S)> = Vec::new();
    for (a, v) in phi {
        if v.is_zero() {
            continue;
        }
        let m = sys.measure(a)?;
        if m.is_infinite() {
            return Err(Error::InfiniteNorm(*a));
        }
        let pv = v.abs().pow_exponent(p).ok_or_else(|| Error::InexactPower(crate::scalar::ratio_string(v)))?;
        if m.is_positive() {
            support.push((*a, pv));
        }
    }
    if support.is_empty() {
        return Err(Error::ZeroMeasureSet);
    }
    let atoms = normalized(&support.iter().map(|(a, _)| *a).collect::<Vec<_>>());
    let max_p = support.iter().map(|(_, v)| v.clone()).reduce(S::max_of).unwrap();
    if let Some(fact) = derive_fact(sys, &atoms, Direction::Backward) {
        let claim = Claim::LiminfZero;
        if claim.holds(&fact) && check_fact(sys, &atoms, Direction::Backward, &fact, claim, h).is_ok() {
            return Ok(Verdict::new(
                CriterionId::Ly2,
                Status::Proved,
                h,
                Witness::Vector {
                    support: atoms,
                    fact,
                    claim,
                    bound: Some(max_p),
                },
            ));
        }
    }
    // one nonvanishing atom is enough to keep the norms away from zero
    let mut candidates = vec![atoms.clone()];
    candidates.extend(atoms.iter().map(|a| vec![*a]));
    for part in candidates {
        let Some(fact) = derive_fact(sys, &part, Direction::Backward) else { continue };
        let claim = Claim::LiminfPositive;
        if claim.holds(&fact) && check_fact(sys, &part, Direction::Backward, &fact, claim, h).is_ok() {
            let min_p = support
                .iter()
                .filter(|(a, _)| part.contains(a))
                .map(|(_, v)| v.clone())
                .reduce(S::min_of)
                .unwrap();
            let bound = match fact.liminf.lower() {
                ExtendedWeight::Finite(l) => Some(min_p * l),
                ExtendedWeight::Infinite => None,
            };
            return Ok(Verdict::new(
                CriterionId::Ly2,
                Status::Refuted,
                h,
                Witness::Vector {
                    support: part,
                    fact,
                    claim,
                    bound,
                },
            ));
        }
    }
    let mut norms = vec![S::zero(); h as usize + 1];
    for (a, pv) in &support {
        for (n, w) in trace(sys, &[*a], Direction::Backward, h).map_err(to_err)?.into_iter().enumerate() {
            let w = w.into_finite().ok_or(Error::InfiniteNorm(*a))?;
            norms[n] = norms[n].clone() + pv.clone() * w;
        }
    }
    let (at, best) = norms
        .into_iter()
        .enumerate()
        .reduce(|a, c| if c.1 < a.1 { c } else { a })
        .unwrap();
    Ok(Verdict::new(
        CriterionId::Ly2,
        Status::UnknownAtHorizon,
        h,
        Witness::Seen {
            set: Some(atoms),
            best: Some(ExtendedWeight::Finite(best)),
            at: Some(at as u64),
            reason: "no generator certificate for the orbit norms".into(),
        },
    ))
}

/// `sup { μ({i})/μ({j}) : i < j, 0 < μ({j}) < ∞ }` after conjugating the
/// line system to `i ↦ i + 1`.
pub fn line_ratio_sup<S: Scalar>(sys: &AtomicSystem<S>) -> Option<Option<S>> {
    let (profile, step) = sys.line_profile()?;
    match step {
        1 => profile.ratio_sup(),
        -1 => profile.reflect().ratio_sup(),
        _ => None,
    }
}

/// Conditions (a) and (b) for a shift on `ℤ`.
pub fn check_cthm2<S: Scalar>(sys: &AtomicSystem<S>, h: u64) -> Result<(Verdict<S>, Verdict<S>)> {
    let Some((_, step)) = sys.line_profile() else {
        return Ok((
            Verdict::unknown(CriterionId::Cthm2A, h, "not a shift on ℤ"),
            Verdict::unknown(CriterionId::Cthm2B, h, "not a shift on ℤ"),
        ));
    };
    if step.abs() != 1 {
        return Err(Error::InvalidSystem(format!("line step {step}")));
    }
    // μ(f^{-n}({0})) walks the side that conjugates to i → −∞
    let a = orbit_verdict(
        sys,
        CriterionId::Cthm2A,
        &[Atom::Point(0)],
        Direction::Backward,
        Claim::LiminfZero,
        Claim::LiminfPositive,
        Extreme::Min,
        h,
    )?;
    let b = match line_ratio_sup(sys) {
        Some(sup) => {
            let status = if sup.is_none() { Status::Proved } else { Status::Refuted };
            Verdict::new(
                CriterionId::Cthm2B,
                status,
                h,
                Witness::Ratio {
                    set: None,
                    sup,
                    rule: format!("{}: ratio supremum from the tail rules of μ on both sides", sys.name),
                },
            )
        }
        None => Verdict::unknown(CriterionId::Cthm2B, h, "measure profile has no exact summary"),
    };
    Ok((a, b))
}

/// Conditions (i) and (ii) for one set `B`. Evaluated for any `f`; only
/// [`cor1_implies_ly1`] needs injectivity.
pub fn check_cor1<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], h: u64) -> Result<(Verdict<S>, Verdict<S>)> {
    let b = normalized(b);
    if require_positive(sys, &b)?.is_infinite() {
        return Err(Error::InfiniteMeasureSet);
    }
    let i = orbit_verdict(
        sys,
        CriterionId::Cor1I,
        &b,
        Direction::Backward,
        Claim::LiminfZero,
        Claim::LiminfPositive,
        Extreme::Min,
        h,
    )?;
    let ii = match two_sided_ratio_sup(sys, &b) {
        Some(sup) => {
            let status = if sup.is_none() { Status::Proved } else { Status::Refuted };
            Verdict::new(
                CriterionId::Cor1Ii,
                status,
                h,
                Witness::Ratio {
                    set: Some(b.clone()),
                    sup,
                    rule: format!("{}: two-sided orbit measures of {} in closed form", sys.name, fmt_set(&b)),
                },
            )
        }
        None => {
            let best = crate::verdict::window_ratio_sup(sys, &b, h).map_err(to_err)?;
            Verdict::new(
                CriterionId::Cor1Ii,
                Status::UnknownAtHorizon,
                h,
                Witness::Seen {
                    set: Some(b.clone()),
                    best: Some(best),
                    at: None,
                    reason: "two-sided orbit has no closed form".into(),
                },
            )
        }
    };
    Ok((i, ii))
}

/// LY1 from (i) and (ii), valid for injective `f`.
pub fn cor1_implies_ly1<S: Scalar>(sys: &AtomicSystem<S>, i: Verdict<S>, ii: Verdict<S>) -> Result<Option<Verdict<S>>> {
    if !sys.flags.injective {
        return Err(Error::NotInjective);
    }
    if i.status == Status::Proved && ii.status == Status::Proved {
        let h = i.horizon.max(ii.horizon);
        return Ok(Some(Verdict::new(CriterionId::Ly1, Status::Proved, h, Witness::All(vec![i, ii]))));
    }
    Ok(None)
}

/// `sup_{n ≥ 1} μ(f^{-n}(B))/μ(B)` when the generator gives it exactly.
fn backward_ratio_sup<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], mb: &S) -> Option<Option<S>> {
    if let Space::Table(_) = sys.space {
        let (values, _) = table_orbit(sys, b, Direction::Backward)?;
        let mut best = S::zero();
        for v in values.iter().skip(1) {
            best = S::max_of(best, v.as_finite()?.clone() / mb.clone());
        }
        return Some(Some(best));
    }
    let seq = measure_sequence(sys, b, Direction::Backward)?.skip(1);
    let summary = seq.summary()?;
    Some(summary.sup.map(|s| s / mb.clone()))
}

/// Conditions (A) and (B) for a family `B_i`, or for the system's declared
/// family claim when `family` is `None`.
pub fn check_thm2<S: Scalar>(
    sys: &AtomicSystem<S>,
    family: Option<&[Vec<Atom>]>,
    h: u64,
) -> Result<(Verdict<S>, Verdict<S>)> {
    let Some(family) = family else {
        return Ok(match &sys.oracle.thm2 {
            Some(claim @ Thm2Claim::Holds { .. }) => (
                Verdict::new(CriterionId::Thm2A, Status::Proved, h, Witness::Family(claim.clone())),
                Verdict::new(CriterionId::Thm2B, Status::Proved, h, Witness::Family(claim.clone())),
            ),
            Some(claim @ Thm2Claim::Fails { samples, .. }) => {
                let a = match samples.first() {
                    Some(s) => orbit_verdict(
                        sys,
                        CriterionId::Thm2A,
                        s,
                        Direction::Backward,
                        Claim::Vanishes,
                        Claim::LiminfPositive,
                        Extreme::Min,
                        h,
                    )?,
                    None => Verdict::unknown(CriterionId::Thm2A, h, "no admissible sample"),
                };
                (a, Verdict::new(CriterionId::Thm2B, Status::Refuted, h, Witness::Family(claim.clone())))
            }
            None => (
                Verdict::unknown(CriterionId::Thm2A, h, "no declared family"),
                Verdict::unknown(CriterionId::Thm2B, h, "no declared family"),
            ),
        });
    };
    let mut parts = Vec::new();
    let mut sup: Option<S> = Some(S::zero());
    let mut exact = true;
    for b in family {
        let b = normalized(b);
        let m = require_positive(sys, &b)?;
        let ExtendedWeight::Finite(mb) = m else {
            return Err(Error::InfiniteMeasureSet);
        };
        parts.push(orbit_verdict(
            sys,
            CriterionId::Thm2A,
            &b,
            Direction::Backward,
            Claim::Vanishes,
            Claim::LiminfPositive,
            Extreme::Min,
            h,
        )?);
        match backward_ratio_sup(sys, &b, &mb) {
            Some(None) => sup = None,
            Some(Some(s)) => sup = sup.map(|cur| S::max_of(cur, s)),
            None => exact = false,
        }
    }
    let a = conjunction(CriterionId::Thm2A, h, parts);
    let rule = format!("{}: backward ratio suprema of {} sets", sys.name, family.len());
    let b = if sup.is_none() {
        Verdict::new(CriterionId::Thm2B, Status::Proved, h, Witness::Ratio { set: None, sup, rule })
    } else if exact {
        Verdict::new(CriterionId::Thm2B, Status::Refuted, h, Witness::Ratio { set: None, sup, rule })
    } else {
        Verdict::unknown(CriterionId::Thm2B, h, "a member's backward orbit has no closed form")
    };
    Ok((a, b))
}

/// Replays a declared family claim.
pub fn replay_family<S: Scalar>(sys: &AtomicSystem<S>, claim: &Thm2Claim<S>, h: u64) -> std::result::Result<(), String> {
    match claim {
        Thm2Claim::Holds {
            family,
            peak_time: (a, b),
            peak_scale,
            peak_ratio,
            ..
        } => {
            if *peak_ratio <= S::one() || !peak_scale.is_positive() {
                return Err("peak ratios do not grow".into());
            }
            let mut checked = 0;
            for i in 1..=FAMILY_REPLAY {
                let n = a * i as i64 + b;
                if n < 0 || n as u64 > h {
                    continue;
                }
                let member = family.member(i);
                let fact = derive_fact(sys, &member, Direction::Backward)
                    .ok_or_else(|| format!("no fact for {}", fmt_set(&member)))?;
                check_fact(sys, &member, Direction::Backward, &fact, Claim::Vanishes, h)?;
                let values = trace(sys, &member, Direction::Backward, n as u64)?;
                let want = ExtendedWeight::Finite(peak_scale.clone() * peak_ratio.powi(i as i64));
                let got = values[n as usize]
                    .ratio(&values[0])
                    .ok_or("member has degenerate measure")?;
                if got < want {
                    return Err(format!("member {i} peaks at {got} < {want}"));
                }
                checked += 1;
            }
            if checked == 0 {
                return Err("no member peaks within the horizon".into());
            }
            Ok(())
        }
        Thm2Claim::Fails { sup, samples, .. } => {
            let mut best: Option<ExtendedWeight<S>> = None;
            for s in samples {
                let fact =
                    derive_fact(sys, s, Direction::Backward).ok_or_else(|| format!("no fact for {}", fmt_set(s)))?;
                if !(fact.liminf.is_zero()) {
                    return Err(format!("sample {} violates (A)", fmt_set(s)));
                }
                let values = trace(sys, s, Direction::Backward, h)?;
                for v in values.iter().skip(1) {
                    let r = v.ratio(&values[0]).ok_or("sample has degenerate measure")?;
                    if r > ExtendedWeight::Finite(sup.clone()) {
                        return Err(format!("sample {} exceeds the declared supremum", fmt_set(s)));
                    }
                    best = Some(match best {
                        Some(b) => b.max(r),
                        None => r,
                    });
                }
            }
            if best != Some(ExtendedWeight::Finite(sup.clone())) {
                return Err("declared supremum is not attained on the samples".into());
            }
            Ok(())
        }
    }
}
