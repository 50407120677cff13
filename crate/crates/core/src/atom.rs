//! Points of a countable atomic space and finite or symbolic sets of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A point of the state space. Integer atoms label `ℤ`, `ℕ` or tables;
/// cell atoms label grid spaces such as `ℕ × ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Atom {
    Point(i64),
    Cell(i64, i64),
}

impl Atom {
    pub fn point(&self) -> Option<i64> {
        match *self {
            Atom::Point(i) => Some(i),
            Atom::Cell(..) => None,
        }
    }

    /// Largest absolute coordinate.
    pub fn radius(&self) -> u64 {
        match *self {
            Atom::Point(i) => i.unsigned_abs(),
            Atom::Cell(i, j) => i.unsigned_abs().max(j.unsigned_abs()),
        }
    }

    pub fn cell(&self) -> Option<(i64, i64)> {
        match *self {
            Atom::Cell(i, j) => Some((i, j)),
            Atom::Point(_) => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Point(i) => write!(f, "{i}"),
            Atom::Cell(i, j) => write!(f, "({i},{j})"),
        }
    }
}

impl FromStr for Atom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| format!("bad cell atom `{s}`"))?;
            let a = a.trim().parse().map_err(|_| format!("bad cell atom `{s}`"))?;
            let b = b.trim().parse().map_err(|_| format!("bad cell atom `{s}`"))?;
            return Ok(Atom::Cell(a, b));
        }
        t.parse().map(Atom::Point).map_err(|_| format!("bad atom `{s}`"))
    }
}

/// Parses `"0"`, `"{0,1}"`, `"(1,0)"` or `"{(0,0),(1,0)}"`.
pub fn parse_atom_list(s: &str) -> Result<Vec<Atom>, String> {
    let t = s.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .unwrap_or(t)
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (idx, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(inner[start..idx].parse()?);
                start = idx + 1;
            }
            _ => {}
        }
    }
    out.push(inner[start..].parse()?);
    Ok(out)
}

/// A measurable set. Finite sets are explicit; symbolic sets name one of
/// the infinite families the built-in systems understand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomSet {
    Finite(BTreeSet<Atom>),
    /// `{i} × ℤ` (or `{i} × ℕ`) in a grid space.
    Column(i64),
    /// `{start, start + step, start + 2·step, …}` in an integer space.
    Ray { start: i64, step: i64 },
}

impl AtomSet {
    pub fn empty() -> Self {
        AtomSet::Finite(BTreeSet::new())
    }

    pub fn singleton(a: Atom) -> Self {
        AtomSet::Finite(BTreeSet::from([a]))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, AtomSet::Finite(_))
    }

    pub fn atoms(&self) -> Option<&BTreeSet<Atom>> {
        match self {
            AtomSet::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, AtomSet::Finite(s) if s.is_empty())
    }

    pub fn contains(&self, a: &Atom) -> bool {
        match (self, a) {
            (AtomSet::Finite(s), _) => s.contains(a),
            (AtomSet::Column(c), Atom::Cell(i, _)) => c == i,
            (AtomSet::Ray { start, step }, Atom::Point(x)) => {
                let d = x - start;
                *step != 0 && d % step == 0 && d / step >= 0
            }
            _ => false,
        }
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        AtomSet::Finite(iter.into_iter().collect())
    }
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomSet::Finite(s) => {
                f.write_str("{")?;
                for (k, a) in s.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")
            }
            AtomSet::Column(i) => write!(f, "{{{i}}}×ℤ"),
            AtomSet::Ray { start, step } => write!(f, "{{{start}+{step}k : k≥0}}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_lists() {
        assert_eq!(parse_atom_list("{0,1}").unwrap(), vec![Atom::Point(0), Atom::Point(1)]);
        assert_eq!(
            parse_atom_list("{(0,0),(1,-2)}").unwrap(),
            vec![Atom::Cell(0, 0), Atom::Cell(1, -2)]
        );
        assert_eq!(parse_atom_list("-3").unwrap(), vec![Atom::Point(-3)]);
        assert!(parse_atom_list("{x}").is_err());
    }

    #[test]
    fn canonical_order() {
        let s: AtomSet = [Atom::Point(3), Atom::Point(-1), Atom::Point(0)].into_iter().collect();
        assert_eq!(s.to_string(), "{-1,0,3}");
    }

    #[test]
    fn symbolic_membership() {
        assert!(AtomSet::Column(2).contains(&Atom::Cell(2, -7)));
        assert!(!AtomSet::Column(2).contains(&Atom::Point(2)));
        let r = AtomSet::Ray { start: 0, step: -1 };
        assert!(r.contains(&Atom::Point(-5)));
        assert!(!r.contains(&Atom::Point(1)));
    }
}
