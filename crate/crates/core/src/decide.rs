//! System-level LY1–LY7 table: existential witnesses from probe sets,
//! universal refutations from generator rules and declared oracles, and
//! closure along the implication graph.

use std::collections::BTreeMap;

use crate::atom::Atom;
use crate::audit::implied_status;
use crate::criteria::{check_cor1, check_cthm2, check_ly3, check_ly4, check_ly5, check_ly6, cor1_implies_ly1};
use crate::error::Result;
use crate::measure::expansion_constants;
use crate::oracle::{Direction, RefutedCriterion, SetCriterion, Thm2Claim};
use crate::scalar::Scalar;
use crate::system::{AbsorbingFamily, AtomicSystem, ColumnFamily, Space};
use crate::verdict::{Claim, CriterionId, Report, Status, Verdict, Witness};
use crate::weight::ExtendedWeight;

/// Probe window radius for existential criteria.
pub const PROBE_RADIUS: u64 = 2;

fn positive_singletons<S: Scalar>(sys: &AtomicSystem<S>) -> Vec<Vec<Atom>> {
    sys.window_atoms(PROBE_RADIUS)
        .into_iter()
        .filter(|a| matches!(sys.measure(a), Ok(ExtendedWeight::Finite(ref m)) if m.is_positive()))
        .map(|a| vec![a])
        .collect()
}

/// Candidate sets: declared witnesses first, then positive singletons.
fn probes<S: Scalar>(sys: &AtomicSystem<S>, c: SetCriterion) -> Vec<Vec<Atom>> {
    let mut out = Vec::new();
    if let Some(w) = sys.oracle.witness(c) {
        out.push(w.clone());
    }
    out.extend(positive_singletons(sys));
    out
}

fn first_proved<S: Scalar>(
    sys: &AtomicSystem<S>,
    c: SetCriterion,
    h: u64,
    check: impl Fn(&AtomicSystem<S>, &[Atom], u64) -> Result<Verdict<S>>,
) -> Result<(Option<Verdict<S>>, Option<Verdict<S>>)> {
    let mut fallback = None;
    for b in probes(sys, c) {
        let v = check(sys, &b, h)?;
        if v.status == Status::Proved {
            return Ok((Some(v), None));
        }
        if fallback.is_none() && v.status == Status::UnknownAtHorizon {
            fallback = Some(v);
        }
    }
    Ok((None, fallback))
}

fn universal<S: Scalar>(
    criterion: CriterionId,
    h: u64,
    rule: String,
    direction: Direction,
    claim: Claim,
    bound: Option<S>,
    samples: Vec<Vec<Atom>>,
) -> Verdict<S> {
    Verdict::new(
        criterion,
        Status::Refuted,
        h,
        Witness::Universal {
            rule,
            direction,
            claim,
            bound,
            samples,
        },
    )
}

/// Refutations that follow from the shape of the generator.
fn generator_refutations<S: Scalar>(sys: &AtomicSystem<S>, h: u64) -> Result<Vec<Verdict<S>>> {
    let samples = positive_singletons(sys);
    let mut out = Vec::new();
    match &sys.space {
        Space::Line { profile, step } => {
            let p = if *step == 1 { profile.clone() } else { profile.reflect() };
            let back = p.left.summary();
            let fwd = p.right.summary();
            if let Some(s) = &back {
                if s.inf.is_positive() {
                    out.push(universal(
                        CriterionId::Ly3,
                        h,
                        format!("{}: every atom the backward orbits visit has measure at least {}", sys.name, s.inf),
                        Direction::Backward,
                        Claim::LiminfPositive,
                        Some(s.inf.clone()),
                        samples.clone(),
                    ));
                }
            }
            if let Some(s) = &fwd {
                if s.inf.is_positive() {
                    out.push(universal(
                        CriterionId::Ly4,
                        h,
                        format!("{}: every atom the forward orbits visit has measure at least {}", sys.name, s.inf),
                        Direction::Forward,
                        Claim::LiminfPositive,
                        Some(s.inf.clone()),
                        samples.clone(),
                    ));
                }
            }
            if let (Some(b), Some(f)) = (&back, &fwd) {
                // finite-measure sets meet the forward side finitely; the
                // backward side is summable and dominated, so orbits vanish
                if f.inf.is_positive() && b.limsup.is_zero() && b.outward.is_some() && b.total.is_some() {
                    out.push(universal(
                        CriterionId::Ly6,
                        h,
                        format!(
                            "{}: sets of finite measure are finite on the forward side and their backward measures vanish by dominated convergence",
                            sys.name
                        ),
                        Direction::Backward,
                        Claim::Vanishes,
                        None,
                        samples.clone(),
                    ));
                }
            }
            if sys.flags.injective {
                let (a, b) = check_cthm2(sys, h)?;
                if a.status.is_decided() && b.status.is_decided() || a.status == Status::Refuted || b.status == Status::Refuted
                {
                    let v = Verdict::new(
                        CriterionId::Ly1,
                        if a.status == Status::Proved && b.status == Status::Proved {
                            Status::Proved
                        } else {
                            Status::Refuted
                        },
                        h,
                        Witness::All(vec![a, b]),
                    );
                    out.push(v);
                }
            }
        }
        Space::Chain { measure, zero_atom } => {
            // a fixed atom of measure zero never belongs to a positive set's support
            let mut low = measure.value(0);
            if let Some(z) = zero_atom.as_ref().filter(|z| z.is_positive()) {
                low = low.min(z.clone());
            }
            if low.is_positive() {
                out.push(universal(
                    CriterionId::Ly4,
                    h,
                    format!("{}: forward images of any set contain 1 or the fixed atom 0 from some n on", sys.name),
                    Direction::Forward,
                    Claim::LiminfPositive,
                    low.into_finite(),
                    samples.clone(),
                ));
            }
            if let Some(s) = measure.summary() {
                if measure.value(0).is_positive() && s.limsup.is_zero() && s.outward.is_some() {
                    out.push(universal(
                        CriterionId::Ly1,
                        h,
                        format!(
                            "{}: ‖T^n φ‖^p ≥ |φ(1)|^p μ({{1}}) and the rest of the norm vanishes by domination, so no vector is semi-irregular",
                            sys.name
                        ),
                        Direction::Backward,
                        Claim::NotOscillating,
                        None,
                        samples.clone(),
                    ));
                }
            }
        }
        Space::Columns(fam) => {
            let bound = match fam {
                ColumnFamily::Uniform(p) => p.left.summary().map(|s| s.inf).filter(|v| v.is_positive()),
                ColumnFamily::Bands => Some(S::one()),
            };
            if let Some(bound) = bound {
                out.push(universal(
                    CriterionId::Ly4,
                    h,
                    format!("{}: every column has measure at least {bound} below row 1", sys.name),
                    Direction::Forward,
                    Claim::LiminfPositive,
                    Some(bound),
                    samples.clone(),
                ));
            }
        }
        Space::Absorbing(AbsorbingFamily::Fdg) => {
            out.push(universal(
                CriterionId::Ly4,
                h,
                format!("{}: forward images end in the fixed cells (i,1) of positive measure", sys.name),
                Direction::Forward,
                Claim::LiminfPositive,
                None,
                samples.clone(),
            ));
        }
        Space::Comb { .. } => {}
        Space::Table(_) => out.extend(table_refutations(sys, h)?),
    }
    Ok(out)
}

/// Finite tables: iterates of sets are eventually periodic, so singleton
/// and pair probes are exhaustive.
fn table_refutations<S: Scalar>(sys: &AtomicSystem<S>, h: u64) -> Result<Vec<Verdict<S>>> {
    let mut out = Vec::new();
    let singles = positive_singletons(sys);
    let n = singles.len();
    let exhaustive = |c: CriterionId, rule: &str, checked: usize| {
        Verdict::new(
            c,
            Status::Refuted,
            h,
            Witness::Exhaustive {
                rule: format!("{}: {rule}", sys.name),
                checked,
            },
        )
    };
    let all_refuted = |f: &dyn Fn(&[Atom]) -> Result<Verdict<S>>| -> Result<bool> {
        for b in &singles {
            if f(b)?.status != Status::Refuted {
                return Ok(false);
            }
        }
        Ok(true)
    };
    // orbit measures of a set dominate those of each of its atoms
    if all_refuted(&|b| check_ly3(sys, b, h))? {
        out.push(exhaustive(CriterionId::Ly3, "no atom of positive measure has vanishing preimages", n));
    }
    if all_refuted(&|b| check_ly4(sys, b, h))? {
        out.push(exhaustive(CriterionId::Ly4, "no atom of positive measure has vanishing images", n));
    }
    if all_refuted(&|b| check_ly5(sys, b, h))? {
        out.push(exhaustive(CriterionId::Ly5, "no atom of positive measure has both orbits vanishing", n));
    }
    let c = expansion_constants(sys, 0)?;
    if c.c_lower.is_positive() {
        out.push(exhaustive(
            CriterionId::Ly6,
            "with c > 0 a preimage of measure zero has preimages of measure zero, so a vanishing phase never recovers",
            n,
        ));
    }
    out.push(exhaustive(
        CriterionId::Ly1,
        "an operator on a finite-dimensional space has no semi-irregular vector",
        0,
    ));
    Ok(out)
}

fn oracle_refutations<S: Scalar>(sys: &AtomicSystem<S>, h: u64) -> Vec<Verdict<S>> {
    sys.oracle
        .refutations
        .iter()
        .map(|r| match r.criterion {
            RefutedCriterion::Ly6 => Verdict::new(
                CriterionId::Ly6,
                Status::Refuted,
                h,
                Witness::RatioWindow {
                    rule: r.rule.clone(),
                    samples: r.samples.clone(),
                    caps: r.caps.clone(),
                },
            ),
            RefutedCriterion::Ly3 => universal(
                CriterionId::Ly3,
                h,
                r.rule.clone(),
                Direction::Backward,
                Claim::LiminfPositive,
                r.bound.clone(),
                r.samples.clone(),
            ),
            RefutedCriterion::Ly4 => universal(
                CriterionId::Ly4,
                h,
                r.rule.clone(),
                Direction::Forward,
                Claim::LiminfPositive,
                r.bound.clone(),
                r.samples.clone(),
            ),
            RefutedCriterion::Ly1 => universal(
                CriterionId::Ly1,
                h,
                r.rule.clone(),
                Direction::Backward,
                Claim::NotOscillating,
                None,
                r.samples.clone(),
            ),
        })
        .collect()
}

fn place<S: Scalar>(report: &mut Report<S>, v: Verdict<S>) {
    let slot = report.entry(v.criterion);
    if let std::collections::btree_map::Entry::Vacant(e) = slot {
        e.insert(v);
    }
}

/// Fills undecided cells from decided ones along the implication graph.
pub fn propagate<S: Scalar>(sys: &AtomicSystem<S>, report: &mut Report<S>) {
    loop {
        let mut added = Vec::new();
        for target in CriterionId::LY {
            if report.get(&target).is_some_and(|v| v.status.is_decided()) {
                continue;
            }
            let source = CriterionId::LY.iter().find_map(|&src| {
                let v = report.get(&src)?;
                let st = implied_status(&sys.flags, src, v.status, target)?;
                Some((v.clone(), st))
            });
            if let Some((premise, status)) = source {
                let h = premise.horizon;
                let edge = match status {
                    Status::Proved => format!("{}⇒{}", premise.criterion, target),
                    _ => format!("{}⇒{}", target, premise.criterion),
                };
                added.push(Verdict::new(
                    target,
                    status,
                    h,
                    Witness::Implied {
                        edge,
                        premise: Box::new(premise),
                    },
                ));
            }
        }
        if added.is_empty() {
            return;
        }
        for v in added {
            report.insert(v.criterion, v);
        }
    }
}

/// LY1–LY7 for the whole system.
pub fn decide<S: Scalar>(sys: &AtomicSystem<S>, h: u64) -> Result<Report<S>> {
    let mut report: Report<S> = BTreeMap::new();
    let mut unknown: BTreeMap<CriterionId, Verdict<S>> = BTreeMap::new();

    let existential: [(SetCriterion, CriterionId, fn(&AtomicSystem<S>, &[Atom], u64) -> Result<Verdict<S>>); 4] = [
        (SetCriterion::Ly3, CriterionId::Ly3, check_ly3),
        (SetCriterion::Ly4, CriterionId::Ly4, check_ly4),
        (SetCriterion::Ly5, CriterionId::Ly5, check_ly5),
        (SetCriterion::Ly6, CriterionId::Ly6, check_ly6),
    ];
    for (sc, id, check) in existential {
        let (proved, fallback) = first_proved(sys, sc, h, check)?;
        if let Some(v) = proved {
            place(&mut report, v);
        } else if let Some(v) = fallback {
            unknown.insert(id, v);
        }
    }

    match &sys.oracle.thm2 {
        Some(claim @ Thm2Claim::Holds { .. }) => {
            place(&mut report, Verdict::new(CriterionId::Ly1, Status::Proved, h, Witness::Family(claim.clone())))
        }
        Some(claim @ Thm2Claim::Fails { .. }) => {
            place(&mut report, Verdict::new(CriterionId::Ly1, Status::Refuted, h, Witness::Family(claim.clone())))
        }
        None => {}
    }

    if sys.flags.injective && !report.contains_key(&CriterionId::Ly1) {
        for b in positive_singletons(sys) {
            let (i, ii) = check_cor1(sys, &b, h)?;
            if let Some(v) = cor1_implies_ly1(sys, i, ii)? {
                place(&mut report, v);
                break;
            }
        }
    }

    for v in generator_refutations(sys, h)? {
        place(&mut report, v);
    }
    for v in oracle_refutations(sys, h) {
        place(&mut report, v);
    }

    propagate(sys, &mut report);

    for id in CriterionId::LY {
        if !report.contains_key(&id) {
            let v = unknown
                .remove(&id)
                .map(|mut v| {
                    v.criterion = id;
                    v
                })
                .unwrap_or_else(|| Verdict::unknown(id, h, "no certificate within the probe window"));
            report.insert(id, v);
        }
    }
    Ok(report)
}
