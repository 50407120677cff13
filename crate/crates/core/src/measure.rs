//! Images, preimages and their measures, and the expansion constants of a
//! system.

use std::collections::BTreeSet;

use crate::atom::{Atom, AtomSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::system::{AtomicSystem, Space};
use crate::weight::ExtendedWeight;

fn explicit(s: &AtomSet) -> Result<&BTreeSet<Atom>> {
    s.atoms().ok_or_else(|| Error::SymbolicSetUnsupported(s.to_string()))
}

/// `f^n(S)`.
pub fn image_set<S: Scalar>(sys: &AtomicSystem<S>, set: &AtomSet, n: u64) -> Result<AtomSet> {
    let mut cur = explicit(set)?.clone();
    for _ in 0..n {
        cur = cur.iter().map(|a| sys.image(a)).collect::<Result<_>>()?;
    }
    Ok(AtomSet::Finite(cur))
}

/// `f^{-n}(S)`.
pub fn preimage_set<S: Scalar>(sys: &AtomicSystem<S>, set: &AtomSet, n: u64) -> Result<AtomSet> {
    let mut cur = explicit(set)?.clone();
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for a in &cur {
            next.extend(sys.fiber(a)?);
        }
        cur = next;
    }
    Ok(AtomSet::Finite(cur))
}

/// `μ(S)`, including the symbolic families the generators understand.
pub fn set_measure<S: Scalar>(sys: &AtomicSystem<S>, set: &AtomSet) -> Result<ExtendedWeight<S>> {
    match set {
        AtomSet::Finite(atoms) => {
            let mut acc = ExtendedWeight::zero();
            for a in atoms {
                acc = acc + sys.measure(a)?;
            }
            Ok(acc)
        }
        AtomSet::Column(i) => {
            let unsupported = || Error::SymbolicSetUnsupported(set.to_string());
            match &sys.space {
                Space::Columns(fam) => {
                    let p = fam.profile(*i);
                    Ok(p.left.total().ok_or_else(unsupported)? + p.right.total().ok_or_else(unsupported)?)
                }
                Space::Absorbing(fam) if *i >= 1 => Ok(ExtendedWeight::Finite(fam.column_total(*i))),
                Space::Comb { teeth, .. } if *i >= 1 => teeth.tooth(*i).total().ok_or_else(unsupported),
                _ => Err(unsupported()),
            }
        }
        AtomSet::Ray { start, step } => {
            let unsupported = || Error::SymbolicSetUnsupported(set.to_string());
            match (&sys.space, step) {
                (Space::Line { profile, .. }, 1) => profile.walk_up(*start).total().ok_or_else(unsupported),
                (Space::Line { profile, .. }, -1) => profile.walk_down(*start).total().ok_or_else(unsupported),
                (Space::Chain { measure, .. }, 1) if *start >= 1 => {
                    measure.skip((*start - 1) as u64).total().ok_or_else(unsupported)
                }
                _ => Err(unsupported()),
            }
        }
    }
}

/// `μ(f^{-n}(B))`.
pub fn backward_measure<S: Scalar>(sys: &AtomicSystem<S>, set: &AtomSet, n: u64) -> Result<ExtendedWeight<S>> {
    set_measure(sys, &preimage_set(sys, set, n)?)
}

/// `μ(f^n(B))`, collisions merged.
pub fn forward_measure<S: Scalar>(sys: &AtomicSystem<S>, set: &AtomSet, n: u64) -> Result<ExtendedWeight<S>> {
    set_measure(sys, &image_set(sys, set, n)?)
}

/// `μ(f^{-n}(B))` for `n = 0..=horizon`, one preimage step at a time.
pub fn backward_trace<S: Scalar>(sys: &AtomicSystem<S>, set: &AtomSet, horizon: u64) -> Result<Vec<ExtendedWeight<S>>> {
    let mut cur = explicit(set)?.clone();
    let mut out = Vec::with_capacity(horizon as usize + 1);
    for n in 0..=horizon {
        if n > 0 {
            let mut next = BTreeSet::new();
            for a in &cur {
                next.extend(sys.fiber(a)?);
            }
            cur = next;
        }
        out.push(ExtendedWeight::sum(cur.iter().map(|a| sys.measure(a)).collect::<Result<Vec<_>>>()?));
    }
    Ok(out)
}

/// `μ(f^n(B))` for `n = 0..=horizon`.
pub fn forward_trace<S: Scalar>(sys: &AtomicSystem<S>, set: &AtomSet, horizon: u64) -> Result<Vec<ExtendedWeight<S>>> {
    let mut cur = explicit(set)?.clone();
    let mut out = Vec::with_capacity(horizon as usize + 1);
    for n in 0..=horizon {
        if n > 0 {
            cur = cur.iter().map(|a| sys.image(a)).collect::<Result<_>>()?;
        }
        out.push(ExtendedWeight::sum(cur.iter().map(|a| sys.measure(a)).collect::<Result<Vec<_>>>()?));
    }
    Ok(out)
}

/// Window-restricted constants of `μ(f(B)) ≥ c_lower μ(B)` and
/// `μ(f(B)) ≤ c_upper μ(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionConstants<S> {
    pub c_lower: ExtendedWeight<S>,
    pub c_upper: ExtendedWeight<S>,
    /// The generator guarantees these are the true infimum and supremum.
    pub exact: bool,
    pub radius: u64,
}

/// Expansion constants over the window of the given radius.
///
/// `c_lower` is the minimum of `μ(y)/μ(fiber(y) ∩ W)` over `y ∈ f(W)`; this
/// is the infimum over subsets of `W` because `μ(f(B)) ≥ Σ_y` of the fiber
/// shares. `c_upper` is the maximum of `μ(f(x))/μ(x)` over `x ∈ W`.
pub fn expansion_constants<S: Scalar>(sys: &AtomicSystem<S>, radius: u64) -> Result<ExpansionConstants<S>> {
    let window = sys.window_atoms(radius);
    let inside: BTreeSet<Atom> = window.iter().copied().collect();
    let mut targets = BTreeSet::new();
    for x in &window {
        targets.insert(sys.image(x)?);
    }
    let mut c_lower: Option<ExtendedWeight<S>> = None;
    for y in &targets {
        let fiber_mass = ExtendedWeight::sum(
            sys.fiber(y)?
                .into_iter()
                .filter(|x| inside.contains(x))
                .map(|x| sys.measure(&x))
                .collect::<Result<Vec<_>>>()?,
        );
        if fiber_mass.is_zero() {
            continue;
        }
        let my = sys.measure(y)?;
        if my.is_infinite() {
            continue;
        }
        let r = my.ratio(&fiber_mass).expect("fiber mass is positive");
        c_lower = Some(match c_lower {
            Some(c) => c.min(r),
            None => r,
        });
    }
    let mut c_upper: Option<ExtendedWeight<S>> = None;
    for x in &window {
        let mx = sys.measure(x)?;
        if mx.is_zero() || mx.is_infinite() {
            continue;
        }
        let r = sys.measure(&sys.image(x)?)?.ratio(&mx).expect("denominator positive");
        c_upper = Some(match c_upper {
            Some(c) => c.max(r),
            None => r,
        });
    }
    Ok(ExpansionConstants {
        c_lower: c_lower.unwrap_or_else(ExtendedWeight::one),
        c_upper: c_upper.unwrap_or_else(ExtendedWeight::one),
        exact: sys.flags.constants_exact_from.is_some_and(|r| radius >= r),
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ZProfile;
    use crate::scalar::Rational;
    use crate::sequence::{SeqRule, Sequence};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn notfinite() -> AtomicSystem<Rational> {
        AtomicSystem::new(
            "notfinite",
            Space::Line {
                profile: ZProfile::new(
                    Sequence::from_rule(SeqRule::geometric(q(1, 2), q(1, 2))),
                    Sequence::from_rule(SeqRule::constant(q(1, 1))),
                ),
                step: 1,
            },
        )
    }

    #[test]
    fn line_images_and_measures() {
        let sys = notfinite();
        let b = AtomSet::singleton(Atom::Point(0));
        assert_eq!(image_set(&sys, &b, 3).unwrap(), AtomSet::singleton(Atom::Point(3)));
        assert_eq!(image_set(&sys, &b, 0).unwrap(), b);
        assert_eq!(backward_measure(&sys, &b, 3).unwrap(), ExtendedWeight::Finite(q(1, 8)));
        assert_eq!(backward_measure(&sys, &AtomSet::empty(), 5).unwrap(), ExtendedWeight::zero());
        assert_eq!(
            set_measure(&sys, &AtomSet::Ray { start: -1, step: -1 }).unwrap(),
            ExtendedWeight::Finite(q(1, 1))
        );
        let t = backward_trace(&sys, &b, 4).unwrap();
        assert_eq!(t[4], ExtendedWeight::Finite(q(1, 16)));
    }

    #[test]
    fn identity_constants() {
        use crate::system::Table;
        use std::collections::BTreeMap;
        let entries: BTreeMap<_, _> = (0..4)
            .map(|i| (Atom::Point(i), (ExtendedWeight::Finite(q(i + 1, 3)), Atom::Point(i))))
            .collect();
        let sys = AtomicSystem::new("id", Space::Table(Table::new(entries, BTreeSet::new()).unwrap()));
        let c = expansion_constants(&sys, 0).unwrap();
        assert_eq!(c.c_lower, ExtendedWeight::one());
        assert_eq!(c.c_upper, ExtendedWeight::one());
        assert!(c.exact);
    }
}
