//! Exact asymptotics of `n ↦ μ(f^{∓n}(B))` for finite sets `B`, derived from
//! the generator of a system or taken from its declared oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::atom::Atom;
use crate::oracle::{Direction, Envelope, SeqFact};
use crate::profile::{constant_fact, sequence_fact, ZProfile};
use crate::scalar::Scalar;
use crate::sequence::{Lim, SeqRule, Sequence};
use crate::system::{AtomicSystem, Space, Table};
use crate::weight::ExtendedWeight;

/// Longest run of explicit iterates tried before giving up on eventual
/// stabilization of a forward orbit.
const STABILIZE_LIMIT: u64 = 4096;

fn describe<S: Scalar>(rule: &SeqRule<S>) -> String {
    match rule {
        SeqRule::Quasi { pattern, growth } => {
            format!("quasi-geometric tail (period {}, growth {})", pattern.len(), crate::scalar::ratio_string(growth))
        }
        SeqRule::Blocks { base, factor, .. } => format!(
            "block tail (base {}, factor {})",
            crate::scalar::ratio_string(base),
            crate::scalar::ratio_string(factor)
        ),
        SeqRule::Zigzag { .. } => "zigzag tail".into(),
        SeqRule::Products { .. } => "running-product tail".into(),
    }
}

fn points(set: &[Atom]) -> Option<Vec<i64>> {
    set.iter().map(|a| a.point()).collect()
}

fn sum_all<S: Scalar>(parts: Vec<Sequence<S>>) -> Option<Sequence<S>> {
    let mut it = parts.into_iter();
    let first = it.next()?;
    it.try_fold(first, |acc, s| acc.add(&s))
}

/// `n ↦ μ(f^{∓n}(B))` as a closed-form sequence, when the generator
/// provides one.
pub fn measure_sequence<S: Scalar>(sys: &AtomicSystem<S>, set: &[Atom], dir: Direction) -> Option<Sequence<S>> {
    if set.is_empty() {
        return None;
    }
    match &sys.space {
        Space::Line { profile, step } => {
            let up = (dir == Direction::Forward) == (*step > 0);
            profile.walk_set(&points(set)?, up)
        }
        Space::Columns(fam) => {
            let mut by_col: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
            for a in set {
                let (i, j) = a.cell()?;
                by_col.entry(i).or_default().push(j);
            }
            let parts = by_col
                .into_iter()
                .map(|(i, js)| fam.profile(i).walk_set(&js, dir == Direction::Backward))
                .collect::<Option<Vec<_>>>()?;
            sum_all(parts)
        }
        Space::Comb { line, teeth } => match dir {
            Direction::Backward => {
                let parts = set
                    .iter()
                    .map(|a| {
                        let (i, j) = a.cell()?;
                        if j == 0 {
                            (i <= 0).then(|| line.walk_down(i))
                        } else {
                            Some(teeth.tooth(i).skip((j - 1) as u64))
                        }
                    })
                    .collect::<Option<Vec<_>>>()?;
                sum_all(parts)
            }
            Direction::Forward => {
                // after `lift` steps every atom sits on the line, where f is injective
                let lift = set.iter().map(|a| a.cell().map_or(0, |(_, j)| j)).max()? as u64;
                let mut cur: BTreeSet<Atom> = set.iter().copied().collect();
                let mut lead = Vec::new();
                for _ in 0..lift {
                    lead.push(ExtendedWeight::sum(cur.iter().map(|a| sys.measure(a).ok()).collect::<Option<Vec<_>>>()?));
                    cur = cur.iter().map(|a| sys.image(a).ok()).collect::<Option<_>>()?;
                }
                let xs: Vec<i64> = cur.iter().map(|a| a.cell().map(|(i, _)| i)).collect::<Option<_>>()?;
                Some(Sequence::after(lead, &line.walk_set(&xs, true)?))
            }
        },
        Space::Chain { measure, .. } if dir == Direction::Backward => {
            let parts = set
                .iter()
                .map(|a| match a.point()? {
                    i if i >= 2 => Some(measure.skip((i - 1) as u64)),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()?;
            sum_all(parts)
        }
        Space::Absorbing(fam) if dir == Direction::Backward => {
            let parts = set
                .iter()
                .map(|a| match a.cell()? {
                    (i, j) if j >= 2 => Some(fam.column::<S>(i).skip((j - 1) as u64)),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()?;
            sum_all(parts)
        }
        _ => None,
    }
}

/// Two-sided orbit profile `k ↦ μ(f^k(B))`, `k ∈ ℤ`, negative `k` meaning
/// preimages.
pub fn orbit_profile<S: Scalar>(sys: &AtomicSystem<S>, set: &[Atom]) -> Option<ZProfile<S>> {
    let back = measure_sequence(sys, set, Direction::Backward)?;
    let fwd = measure_sequence(sys, set, Direction::Forward)?;
    Some(ZProfile::new(back.drop_first(), fwd))
}

/// Asymptotic fact for `μ(f^{∓n}(B))`: the declared oracle first, then the
/// generator.
pub fn derive_fact<S: Scalar>(sys: &AtomicSystem<S>, set: &[Atom], dir: Direction) -> Option<SeqFact<S>> {
    let mut set = set.to_vec();
    set.sort();
    set.dedup();
    if let Some(f) = sys.oracle.fact_for(&set, dir) {
        return Some(f.clone());
    }
    if let Space::Table(t) = &sys.space {
        return table_fact(sys, t, &set, dir);
    }
    if let Some(seq) = measure_sequence(sys, &set, dir) {
        let rule = format!("{} {} measures follow the {}", sys.name, dir, describe(&seq.tail));
        if let Some(f) = sequence_fact(&seq, &set, &rule) {
            return Some(f);
        }
    }
    match dir {
        Direction::Forward => stabilized_forward(sys, &set),
        Direction::Backward => cumulative_backward(sys, &set),
    }
}

/// Forward orbits that become fixed sets after finitely many steps.
fn stabilized_forward<S: Scalar>(sys: &AtomicSystem<S>, set: &[Atom]) -> Option<SeqFact<S>> {
    if !matches!(sys.space, Space::Chain { .. } | Space::Absorbing(_)) {
        return None;
    }
    let mut cur: BTreeSet<Atom> = set.iter().copied().collect();
    for n in 0..STABILIZE_LIMIT {
        let next: BTreeSet<Atom> = cur.iter().map(|a| sys.image(a).ok()).collect::<Option<_>>()?;
        if next == cur {
            let value = ExtendedWeight::sum(cur.iter().map(|a| sys.measure(a).ok()).collect::<Option<Vec<_>>>()?);
            let rule = format!("{}: forward images are the fixed set {} from n = {n}", sys.name, fmt_atoms(&cur));
            return Some(constant_fact(n, value, set, &rule));
        }
        cur = next;
    }
    None
}

fn fmt_atoms(s: &BTreeSet<Atom>) -> String {
    crate::atom::AtomSet::Finite(s.clone()).to_string()
}

/// Backward orbits of absorbing atoms accumulate a whole ray or column;
/// their measure increases to its total.
fn cumulative_backward<S: Scalar>(sys: &AtomicSystem<S>, set: &[Atom]) -> Option<SeqFact<S>> {
    let (absorbing, rest): (Vec<Atom>, Vec<Atom>) = match &sys.space {
        Space::Chain { .. } => set.iter().partition(|a| matches!(a.point(), Some(0 | 1))),
        Space::Absorbing(_) => set.iter().partition(|a| matches!(a.cell(), Some((_, 1)))),
        _ => return None,
    };
    if absorbing.is_empty() {
        return None;
    }
    let mut fact: Option<SeqFact<S>> = None;
    for a in &absorbing {
        let (total, first) = match (&sys.space, *a) {
            (Space::Chain { zero_atom, .. }, Atom::Point(0)) => {
                let z = zero_atom.clone()?;
                (z.clone(), z)
            }
            (Space::Chain { measure, .. }, Atom::Point(_)) => (measure.total()?, measure.value(0)),
            (Space::Absorbing(fam), Atom::Cell(i, _)) => {
                (ExtendedWeight::Finite(fam.column_total::<S>(i)), fam.column::<S>(i).value(0))
            }
            _ => return None,
        };
        let lim = match &total {
            ExtendedWeight::Finite(v) => Lim::Exact(v.clone()),
            ExtendedWeight::Infinite => Lim::Infinite,
        };
        let rule = format!("{}: f^(-n)({a}) increases to a set of total measure {}", sys.name, total);
        let mut f = SeqFact::new(lim.clone(), lim, rule);
        if let ExtendedWeight::Finite(v) = first {
            f = f.with_envelope(
                vec![*a],
                Envelope::GrowthFrom {
                    from: 0,
                    scale: v,
                    ratio: S::one(),
                    period: 1,
                },
            );
        }
        fact = Some(match fact {
            None => f,
            Some(prev) => prev.combine(&f)?,
        });
    }
    if rest.is_empty() {
        return fact;
    }
    let other = derive_fact(sys, &rest, Direction::Backward)?;
    fact?.combine(&other)
}

/// Iterates of `B` under `f^{∓1}` until a set repeats; returns the values
/// `μ(S_0), …, μ(S_{end−1})` and the start of the cycle.
pub fn table_orbit<S: Scalar>(
    sys: &AtomicSystem<S>,
    set: &[Atom],
    dir: Direction,
) -> Option<(Vec<ExtendedWeight<S>>, usize)> {
    let mut seen: HashMap<BTreeSet<Atom>, usize> = HashMap::new();
    let mut cur: BTreeSet<Atom> = set.iter().copied().collect();
    let mut values = Vec::new();
    loop {
        if let Some(&start) = seen.get(&cur) {
            return Some((values, start));
        }
        seen.insert(cur.clone(), values.len());
        values.push(ExtendedWeight::sum(cur.iter().map(|a| sys.measure(a).ok()).collect::<Option<Vec<_>>>()?));
        cur = match dir {
            Direction::Backward => {
                let mut next = BTreeSet::new();
                for a in &cur {
                    next.extend(sys.fiber(a).ok()?);
                }
                next
            }
            Direction::Forward => cur.iter().map(|a| sys.image(a).ok()).collect::<Option<_>>()?,
        };
    }
}

fn table_fact<S: Scalar>(sys: &AtomicSystem<S>, _t: &Table<S>, set: &[Atom], dir: Direction) -> Option<SeqFact<S>> {
    let (values, start) = table_orbit(sys, set, dir)?;
    let cycle = values[start..].to_vec();
    let lo = cycle.iter().cloned().reduce(ExtendedWeight::min)?;
    let hi = cycle.iter().cloned().reduce(ExtendedWeight::max)?;
    let as_lim = |w: ExtendedWeight<S>| match w {
        ExtendedWeight::Finite(v) => Lim::Exact(v),
        ExtendedWeight::Infinite => Lim::Infinite,
    };
    let rule = format!(
        "{}: {} iterates of a finite set repeat from n = {start} with period {}",
        sys.name,
        dir,
        cycle.len()
    );
    Some(SeqFact::new(as_lim(lo), as_lim(hi), rule).with_envelope(
        set.to_vec(),
        Envelope::PeriodicFrom {
            from: start as u64,
            values: cycle,
        },
    ))
}

/// `sup { μ(f^n(B))/μ(f^m(B)) : n < m, 0 < μ(f^m(B)) < ∞ }` over `n, m ∈ ℤ`.
/// `Some(None)` is an unbounded supremum; `None` means undecidable here.
pub fn two_sided_ratio_sup<S: Scalar>(sys: &AtomicSystem<S>, set: &[Atom]) -> Option<Option<S>> {
    if let Space::Table(_) = &sys.space {
        let (back, bstart) = table_orbit(sys, set, Direction::Backward)?;
        let (fwd, fstart) = table_orbit(sys, set, Direction::Forward)?;
        // two periods on each side reach every ordered pair of phases
        let bcyc = back.len() - bstart;
        let fcyc = fwd.len() - fstart;
        let at = |k: i64| -> ExtendedWeight<S> {
            if k >= 0 {
                let k = k as usize;
                if k < fwd.len() {
                    fwd[k].clone()
                } else {
                    fwd[fstart + (k - fstart) % fcyc].clone()
                }
            } else {
                let k = (-k) as usize;
                if k < back.len() {
                    back[k].clone()
                } else {
                    back[bstart + (k - bstart) % bcyc].clone()
                }
            }
        };
        let lo = -((back.len() + 2 * bcyc) as i64);
        let hi = (fwd.len() + 2 * fcyc) as i64;
        let mut best: Option<S> = None;
        for m in lo..=hi {
            let dm = at(m);
            let ExtendedWeight::Finite(dm) = dm else { continue };
            if dm.is_zero() {
                continue;
            }
            for n in lo..m {
                match at(n) {
                    ExtendedWeight::Infinite => return Some(None),
                    ExtendedWeight::Finite(v) => {
                        let r = v / dm.clone();
                        best = Some(match best {
                            Some(b) => S::max_of(b, r),
                            None => r,
                        });
                    }
                }
            }
        }
        return Some(best);
    }
    orbit_profile(sys, set)?.ratio_sup()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{backward_trace, forward_trace};
    use crate::scalar::Rational;
    use crate::system::{AbsorbingFamily, ColumnFamily, TeethRule};
    use crate::AtomSet;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn systems() -> Vec<AtomicSystem<Rational>> {
        let half = q(1, 2);
        vec![
            AtomicSystem::new(
                "line",
                Space::Line {
                    profile: ZProfile::new(
                        Sequence::from_rule(SeqRule::Blocks {
                            base: q(1, 1),
                            factor: half.clone(),
                            offset: 0,
                        }),
                        Sequence::from_rule(SeqRule::geometric(q(1, 1), q(1, 2))),
                    ),
                    step: 1,
                },
            ),
            AtomicSystem::new("columns", Space::Columns(ColumnFamily::Bands)),
            AtomicSystem::new(
                "comb",
                Space::Comb {
                    line: ZProfile::new(
                        Sequence::from_rule(SeqRule::geometric(half.clone(), half.clone())),
                        Sequence::from_rule(SeqRule::geometric(q(1, 1), half.clone())),
                    ),
                    teeth: TeethRule::Ramp { ratio: half.clone() },
                },
            ),
            AtomicSystem::new(
                "chain",
                Space::Chain {
                    measure: Sequence::from_rule(SeqRule::geometric(half.clone(), half.clone())),
                    zero_atom: Some(ExtendedWeight::zero()),
                },
            ),
            AtomicSystem::new("absorbing", Space::Absorbing(AbsorbingFamily::Fdg)),
        ]
    }

    #[test]
    fn sequences_agree_with_iteration() {
        for sys in systems() {
            let win = sys.window_atoms(3);
            for (k, a) in win.iter().enumerate() {
                let b = win[(k * 7 + 3) % win.len()];
                let set: Vec<Atom> = if a == &b { vec![*a] } else { vec![*a, b] };
                let aset: AtomSet = set.iter().copied().collect();
                for dir in [Direction::Backward, Direction::Forward] {
                    let Some(seq) = measure_sequence(&sys, &set, dir) else { continue };
                    let trace = match dir {
                        Direction::Backward => backward_trace(&sys, &aset, 40).unwrap(),
                        Direction::Forward => forward_trace(&sys, &aset, 40).unwrap(),
                    };
                    for (n, v) in trace.iter().enumerate() {
                        assert_eq!(&seq.value(n as u64), v, "{} {:?} {dir} n={n}", sys.name, set);
                    }
                }
            }
        }
    }

    #[test]
    fn facts_replay_on_traces() {
        for sys in systems() {
            for a in sys.window_atoms(2) {
                let aset = AtomSet::singleton(a);
                for dir in [Direction::Backward, Direction::Forward] {
                    let Some(fact) = derive_fact(&sys, &[a], dir) else { continue };
                    let trace = match dir {
                        Direction::Backward => backward_trace(&sys, &aset, 120).unwrap(),
                        Direction::Forward => forward_trace(&sys, &aset, 120).unwrap(),
                    };
                    for e in &fact.envelopes {
                        e.envelope.check(&trace).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn chain_backward_of_fixed_point() {
        let sys = &systems()[3];
        let f = derive_fact(sys, &[Atom::Point(1)], Direction::Backward).unwrap();
        assert_eq!(f.liminf, Lim::Exact(q(1, 1)));
        let z = derive_fact(sys, &[Atom::Point(0)], Direction::Forward).unwrap();
        assert!(z.liminf.is_zero());
    }
}
