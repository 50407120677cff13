//! Countable atomic measure spaces with a self-map, presented by generators.

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::oracle::SystemOracle;
use crate::profile::ZProfile;
use crate::scalar::Scalar;
use crate::sequence::{SeqRule, Sequence};
use crate::weight::ExtendedWeight;

/// Declared structural properties of `f` and `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub injective: bool,
    pub surjective: bool,
    pub finite_measure: bool,
    /// Window radius from which the window-restricted expansion constants
    /// equal the true infimum and supremum.
    pub constants_exact_from: Option<u64>,
}

/// Measures on the columns `{i} × ℤ` of `ℕ × ℤ`.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnFamily<S> {
    /// Every column carries the same profile.
    Uniform(ZProfile<S>),
    /// Column `i`: `2^{−j}` for `j ≤ 0`, rising as `2^j` to `2^i`, falling
    /// back to `1` at `j = 2i`, flat up to `j = 4i`, then `2^{4i−j}`.
    Bands,
}

/// Measures on the teeth `{n} × ℕ` of the comb space.
#[derive(Debug, Clone, PartialEq)]
pub enum TeethRule<S> {
    /// `μ(n, j) = ratio^{n−j}` for `j < n` and `1` for `j ≥ n`.
    Ramp { ratio: S },
}

/// Measures on the columns `{i} × ℕ` of the absorbing grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsorbingFamily {
    /// `μ(i, j) = δ_i · 2^{j−1}` for `j ≤ i + 1` and `δ_i · 2^{2i+1−j}`
    /// beyond, with `δ_1 = 1` and `δ_i = 1/(i · 2^{4i+1})`.
    Fdg,
}

/// Explicit finite system: `atom ↦ (μ, f(atom))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<S> {
    entries: BTreeMap<Atom, (ExtendedWeight<S>, Atom)>,
    fibers: BTreeMap<Atom, Vec<Atom>>,
    /// Atoms declared to have infinite fibers outside the table.
    infinite_fibers: BTreeSet<Atom>,
}

impl<S: Scalar> Table<S> {
    pub fn new(entries: BTreeMap<Atom, (ExtendedWeight<S>, Atom)>, infinite_fibers: BTreeSet<Atom>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSystem("empty table".into()));
        }
        let mut fibers: BTreeMap<Atom, Vec<Atom>> = entries.keys().map(|a| (*a, Vec::new())).collect();
        for (x, (_, y)) in &entries {
            fibers
                .get_mut(y)
                .ok_or(Error::AtomOutsideSpace(*y))?
                .push(*x);
        }
        Ok(Table {
            entries,
            fibers,
            infinite_fibers,
        })
    }

    pub fn entries(&self) -> &BTreeMap<Atom, (ExtendedWeight<S>, Atom)> {
        &self.entries
    }

    pub fn infinite_fibers(&self) -> &BTreeSet<Atom> {
        &self.infinite_fibers
    }
}

/// The supported generator shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum Space<S> {
    Table(Table<S>),
    /// `ℤ` with `f(i) = i + step`, `step = ±1`.
    Line { profile: ZProfile<S>, step: i64 },
    /// `{1, 2, …}` (plus an isolated fixed atom `0` when `zero_atom` is set)
    /// with `f(i) = max(i − 1, 1)`; `measure(t) = μ({t + 1})`.
    Chain {
        measure: Sequence<S>,
        zero_atom: Option<ExtendedWeight<S>>,
    },
    /// `ℕ × ℤ` with `f(i, j) = (i, j − 1)`.
    Columns(ColumnFamily<S>),
    /// `(ℤ × {0}) ∪ (ℕ × ℕ)` with `f(i, 0) = (i + 1, 0)` and
    /// `f(n, j) = (n, j − 1)`.
    Comb { line: ZProfile<S>, teeth: TeethRule<S> },
    /// `ℕ × ℕ` with `f(i, j) = (i, j − 1)` for `j > 1` and `(i, 1)` fixed.
    Absorbing(AbsorbingFamily),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicSystem<S> {
    pub name: String,
    pub space: Space<S>,
    pub flags: Flags,
    pub oracle: SystemOracle<S>,
}

/// `δ_i` of the absorbing-grid family.
pub fn fdg_delta<S: Scalar>(i: i64) -> S {
    if i <= 1 {
        S::one()
    } else {
        S::one() / (S::from_int(i) * S::pow2(4 * i + 1))
    }
}

impl<S: Scalar> ColumnFamily<S> {
    pub fn profile(&self, i: i64) -> ZProfile<S> {
        match self {
            ColumnFamily::Uniform(p) => p.clone(),
            ColumnFamily::Bands => {
                let two = S::from_int(2);
                let left = Sequence::from_rule(SeqRule::geometric(two.clone(), two));
                let mut prefix = Vec::new();
                for j in 0..=4 * i {
                    let e = if j <= i {
                        j
                    } else if j <= 2 * i {
                        2 * i - j
                    } else {
                        0
                    };
                    prefix.push(ExtendedWeight::Finite(S::pow2(e)));
                }
                let half = S::from_ratio(1, 2);
                let right = Sequence::new(prefix, SeqRule::geometric(half.clone(), half));
                ZProfile::new(left, right)
            }
        }
    }

    /// `μ(i, j)`, without building the column profile.
    pub fn value(&self, i: i64, j: i64) -> ExtendedWeight<S> {
        match self {
            ColumnFamily::Uniform(p) => p.value(j),
            ColumnFamily::Bands => {
                let e = if j <= 0 {
                    -j
                } else if j <= i {
                    j
                } else if j <= 2 * i {
                    2 * i - j
                } else if j <= 4 * i {
                    0
                } else {
                    4 * i - j
                };
                ExtendedWeight::Finite(S::pow2(e))
            }
        }
    }
}

impl<S: Scalar> TeethRule<S> {
    /// `j ↦ μ(n, j)` as a sequence in `t = j − 1`.
    pub fn tooth(&self, n: i64) -> Sequence<S> {
        match self {
            TeethRule::Ramp { ratio } => {
                let prefix = (1..n).map(|j| ExtendedWeight::Finite(ratio.powi(n - j))).collect();
                Sequence::new(prefix, SeqRule::constant(S::one()))
            }
        }
    }
}

impl AbsorbingFamily {
    /// `j ↦ μ(i, j)` as a sequence in `t = j − 1`.
    pub fn column<S: Scalar>(&self, i: i64) -> Sequence<S> {
        match self {
            AbsorbingFamily::Fdg => {
                let d: S = fdg_delta(i);
                let prefix = (0..=i).map(|t| ExtendedWeight::Finite(d.clone() * S::pow2(t))).collect();
                let half = S::from_ratio(1, 2);
                Sequence::new(prefix, SeqRule::geometric(d * S::pow2(i - 1), half))
            }
        }
    }

    /// `μ(i, j)`.
    pub fn value<S: Scalar>(&self, i: i64, j: i64) -> S {
        match self {
            AbsorbingFamily::Fdg => {
                let e = if j <= i + 1 { j - 1 } else { 2 * i + 1 - j };
                fdg_delta::<S>(i) * S::pow2(e)
            }
        }
    }

    /// `μ({i} × ℕ)`.
    pub fn column_total<S: Scalar>(&self, i: i64) -> S {
        match self {
            AbsorbingFamily::Fdg => fdg_delta::<S>(i) * (S::from_int(3) * S::pow2(i) - S::one()),
        }
    }
}

impl<S: Scalar> AtomicSystem<S> {
    pub fn new(name: impl Into<String>, space: Space<S>) -> Self {
        let flags = default_flags(&space);
        AtomicSystem {
            name: name.into(),
            space,
            flags,
            oracle: SystemOracle::default(),
        }
    }

    pub fn with_oracle(mut self, oracle: SystemOracle<S>) -> Self {
        self.oracle = oracle;
        self
    }

    pub fn contains(&self, a: &Atom) -> bool {
        match (&self.space, a) {
            (Space::Table(t), _) => t.entries.contains_key(a),
            (Space::Line { .. }, Atom::Point(_)) => true,
            (Space::Chain { zero_atom, .. }, Atom::Point(i)) => *i >= 1 || (*i == 0 && zero_atom.is_some()),
            (Space::Columns(_), Atom::Cell(i, _)) => *i >= 1,
            (Space::Comb { .. }, Atom::Cell(i, j)) => *j == 0 || (*i >= 1 && *j >= 1),
            (Space::Absorbing(_), Atom::Cell(i, j)) => *i >= 1 && *j >= 1,
            _ => false,
        }
    }

    fn check(&self, a: &Atom) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::AtomOutsideSpace(*a))
        }
    }

    pub fn measure(&self, a: &Atom) -> Result<ExtendedWeight<S>> {
        self.check(a)?;
        Ok(match (&self.space, *a) {
            (Space::Table(t), _) => t.entries[a].0.clone(),
            (Space::Line { profile, .. }, Atom::Point(i)) => profile.value(i),
            (Space::Chain { measure, zero_atom }, Atom::Point(i)) => {
                if i == 0 {
                    zero_atom.clone().expect("checked")
                } else {
                    measure.value((i - 1) as u64)
                }
            }
            (Space::Columns(fam), Atom::Cell(i, j)) => fam.value(i, j),
            (Space::Comb { line, teeth }, Atom::Cell(i, j)) => {
                if j == 0 {
                    line.value(i)
                } else {
                    teeth.tooth(i).value((j - 1) as u64)
                }
            }
            (Space::Absorbing(fam), Atom::Cell(i, j)) => ExtendedWeight::Finite(fam.value(i, j)),
            _ => unreachable!("membership checked"),
        })
    }

    pub fn image(&self, a: &Atom) -> Result<Atom> {
        self.check(a)?;
        Ok(match (&self.space, *a) {
            (Space::Table(t), _) => t.entries[a].1,
            (Space::Line { step, .. }, Atom::Point(i)) => Atom::Point(i + step),
            (Space::Chain { .. }, Atom::Point(i)) => Atom::Point(if i == 0 { 0 } else { (i - 1).max(1) }),
            (Space::Columns(_), Atom::Cell(i, j)) => Atom::Cell(i, j - 1),
            (Space::Comb { .. }, Atom::Cell(i, j)) => {
                if j == 0 {
                    Atom::Cell(i + 1, 0)
                } else {
                    Atom::Cell(i, j - 1)
                }
            }
            (Space::Absorbing(_), Atom::Cell(i, j)) => Atom::Cell(i, (j - 1).max(1)),
            _ => unreachable!("membership checked"),
        })
    }

    /// `f^{-1}({a})` in canonical order.
    pub fn fiber(&self, a: &Atom) -> Result<Vec<Atom>> {
        self.check(a)?;
        Ok(match (&self.space, *a) {
            (Space::Table(t), _) => {
                if t.infinite_fibers.contains(a) {
                    return Err(Error::InfiniteFiber(*a));
                }
                t.fibers[a].clone()
            }
            (Space::Line { step, .. }, Atom::Point(i)) => vec![Atom::Point(i - step)],
            (Space::Chain { .. }, Atom::Point(i)) => match i {
                0 => vec![Atom::Point(0)],
                1 => vec![Atom::Point(1), Atom::Point(2)],
                _ => vec![Atom::Point(i + 1)],
            },
            (Space::Columns(_), Atom::Cell(i, j)) => vec![Atom::Cell(i, j + 1)],
            (Space::Comb { .. }, Atom::Cell(i, j)) => {
                if j == 0 && i >= 1 {
                    vec![Atom::Cell(i - 1, 0), Atom::Cell(i, 1)]
                } else if j == 0 {
                    vec![Atom::Cell(i - 1, 0)]
                } else {
                    vec![Atom::Cell(i, j + 1)]
                }
            }
            (Space::Absorbing(_), Atom::Cell(i, j)) => {
                if j == 1 {
                    vec![Atom::Cell(i, 1), Atom::Cell(i, 2)]
                } else {
                    vec![Atom::Cell(i, j + 1)]
                }
            }
            _ => unreachable!("membership checked"),
        })
    }

    /// Atoms inside the truncation window of the given radius.
    pub fn window_atoms(&self, radius: u64) -> Vec<Atom> {
        let n = radius as i64;
        let mut out: Vec<Atom> = match &self.space {
            Space::Table(t) => t.entries.keys().copied().collect(),
            Space::Line { .. } => (-n..=n).map(Atom::Point).collect(),
            Space::Chain { zero_atom, .. } => {
                let start = if zero_atom.is_some() { 0 } else { 1 };
                (start..=n.max(1)).map(Atom::Point).collect()
            }
            Space::Columns(_) => (1..=n.max(1))
                .flat_map(|i| (-n..=n).map(move |j| Atom::Cell(i, j)))
                .collect(),
            Space::Comb { .. } => {
                let mut v: Vec<Atom> = (-n..=n).map(|i| Atom::Cell(i, 0)).collect();
                v.extend((1..=n).flat_map(|i| (1..=n).map(move |j| Atom::Cell(i, j))));
                v
            }
            Space::Absorbing(_) => (1..=n.max(1))
                .flat_map(|i| (1..=n.max(1)).map(move |j| Atom::Cell(i, j)))
                .collect(),
        };
        out.sort();
        out
    }

    /// `μ(X)` when known in closed form.
    pub fn total_measure(&self) -> Option<ExtendedWeight<S>> {
        match &self.space {
            Space::Table(t) => Some(ExtendedWeight::sum(t.entries.values().map(|(m, _)| m.clone()))),
            Space::Line { profile, .. } => Some(profile.left.total()? + profile.right.total()?),
            Space::Chain { measure, zero_atom } => {
                Some(measure.total()? + zero_atom.clone().unwrap_or_else(ExtendedWeight::zero))
            }
            Space::Columns(_) | Space::Comb { .. } => Some(ExtendedWeight::Infinite),
            Space::Absorbing(AbsorbingFamily::Fdg) => None,
        }
    }

    /// `f^{-1}` for bijective line systems.
    pub fn inverse(&self) -> Option<Self> {
        match &self.space {
            Space::Line { profile, step } => Some(AtomicSystem::new(
                format!("{}-inverse", self.name),
                Space::Line {
                    profile: profile.clone(),
                    step: -step,
                },
            )),
            _ => None,
        }
    }

    pub fn line_profile(&self) -> Option<(&ZProfile<S>, i64)> {
        match &self.space {
            Space::Line { profile, step } => Some((profile, *step)),
            _ => None,
        }
    }
}

fn default_flags<S: Scalar>(space: &Space<S>) -> Flags {
    match space {
        Space::Table(t) => {
            let injective = t.fibers.values().all(|f| f.len() <= 1) && t.infinite_fibers.is_empty();
            let surjective = t.fibers.values().all(|f| !f.is_empty()) || !t.infinite_fibers.is_empty();
            Flags {
                injective,
                surjective,
                finite_measure: t.entries.values().all(|(m, _)| !m.is_infinite()),
                constants_exact_from: Some(0),
            }
        }
        Space::Line { profile, .. } => Flags {
            injective: true,
            surjective: true,
            finite_measure: matches!(
                (profile.left.total(), profile.right.total()),
                (Some(ExtendedWeight::Finite(_)), Some(ExtendedWeight::Finite(_)))
            ),
            constants_exact_from: stable_radius(&profile.left).zip(stable_radius(&profile.right)).map(|(a, b)| a.max(b)),
        },
        Space::Chain { measure, .. } => Flags {
            injective: false,
            surjective: true,
            finite_measure: matches!(measure.total(), Some(ExtendedWeight::Finite(_))),
            constants_exact_from: stable_radius(measure),
        },
        Space::Columns(_) => Flags {
            injective: true,
            surjective: true,
            finite_measure: false,
            constants_exact_from: Some(8),
        },
        Space::Comb { .. } => Flags {
            injective: false,
            surjective: true,
            finite_measure: false,
            constants_exact_from: Some(4),
        },
        Space::Absorbing(_) => Flags {
            injective: false,
            surjective: true,
            finite_measure: true,
            constants_exact_from: Some(4),
        },
    }
}

/// Radius after which consecutive ratios of the sequence repeat values
/// already seen, for the closed-form tails.
fn stable_radius<S: Scalar>(seq: &Sequence<S>) -> Option<u64> {
    let p = seq.prefix_len();
    match &seq.tail {
        SeqRule::Quasi { pattern, .. } => Some(p + pattern.len() as u64 + 2),
        SeqRule::Blocks { offset, .. } => Some(p + 8 + offset),
        SeqRule::Zigzag { offset, .. } => Some(p + 8 + offset),
        SeqRule::Products { weights, .. } => match weights.as_ref() {
            SeqRule::Zigzag { offset, .. } => Some(p + 8 + offset),
            SeqRule::Quasi { pattern, .. } => Some(p + pattern.len() as u64 + 2),
            _ => None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn fibers_invert_images_on_windows() {
        let half = q(1, 2);
        let systems: Vec<AtomicSystem<Rational>> = vec![
            AtomicSystem::new(
                "chain",
                Space::Chain {
                    measure: Sequence::from_rule(SeqRule::geometric(half.clone(), half.clone())),
                    zero_atom: Some(ExtendedWeight::zero()),
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
            AtomicSystem::new("absorbing", Space::Absorbing(AbsorbingFamily::Fdg)),
        ];
        for sys in systems {
            let win = sys.window_atoms(6);
            for y in &win {
                for x in sys.fiber(y).unwrap() {
                    assert_eq!(sys.image(&x).unwrap(), *y, "{}", sys.name);
                }
            }
            for x in &win {
                let y = sys.image(x).unwrap();
                assert!(sys.fiber(&y).unwrap().contains(x), "{}", sys.name);
            }
        }
    }

    #[test]
    fn bands_table() {
        let sys: AtomicSystem<Rational> = AtomicSystem::new("bands", Space::Columns(ColumnFamily::Bands));
        let m = |i, j| sys.measure(&Atom::Cell(i, j)).unwrap().into_finite().unwrap();
        assert_eq!(m(3, -2), q(4, 1));
        assert_eq!(m(3, 3), q(8, 1));
        assert_eq!(m(3, 5), q(2, 1));
        assert_eq!(m(3, 12), q(1, 1));
        assert_eq!(m(3, 14), q(1, 4));
    }

    #[test]
    fn direct_values_match_profiles() {
        for i in 1..5 {
            let p = ColumnFamily::<Rational>::Bands.profile(i);
            let c = AbsorbingFamily::Fdg.column::<Rational>(i);
            for j in -10..30 {
                assert_eq!(ColumnFamily::<Rational>::Bands.value(i, j), p.value(j));
                if j >= 1 {
                    assert_eq!(ExtendedWeight::Finite(AbsorbingFamily::Fdg.value::<Rational>(i, j)), c.value((j - 1) as u64));
                }
            }
        }
    }

    #[test]
    fn fdg_column_total() {
        for i in 1..6 {
            let col = AbsorbingFamily::Fdg.column::<Rational>(i);
            let s = (0..400u64).fold(q(0, 1), |acc, t| acc + col.value(t).into_finite().unwrap());
            let total: Rational = AbsorbingFamily::Fdg.column_total(i);
            assert!(total.clone() - s < q(1, 1_000_000_000));
        }
    }
}
