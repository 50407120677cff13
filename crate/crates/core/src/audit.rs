//! The implication graph between LY1–LY7 and its audit.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::system::Flags;
use crate::verdict::{CriterionId, Status};

use CriterionId::*;

/// Direct implications valid for sets of finite measure, plus the
/// conditional ones enabled by `flags`.
pub fn edges(flags: &Flags) -> Vec<(CriterionId, CriterionId)> {
    let mut e = vec![
        (Ly6, Ly7),
        (Ly7, Ly6),
        (Ly7, Ly1),
        (Ly1, Ly2),
        (Ly2, Ly3),
        (Ly3, Ly2),
        (Ly5, Ly3),
        (Ly5, Ly4),
    ];
    if flags.finite_measure {
        e.push((Ly4, Ly5));
    }
    if flags.injective {
        e.push((Ly5, Ly6));
    }
    e
}

fn index(c: CriterionId) -> Option<usize> {
    CriterionId::LY.iter().position(|&x| x == c)
}

/// `reach[a][b]`: `a` implies `b` through zero or more edges.
pub fn closure(flags: &Flags) -> [[bool; 7]; 7] {
    let mut r = [[false; 7]; 7];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in edges(flags) {
        r[index(a).unwrap()][index(b).unwrap()] = true;
    }
    for k in 0..7 {
        for i in 0..7 {
            for j in 0..7 {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn implies(flags: &Flags, a: CriterionId, b: CriterionId) -> bool {
    match (index(a), index(b)) {
        (Some(i), Some(j)) => closure(flags)[i][j],
        _ => false,
    }
}

/// Status of `target` forced by `premise` having `status`, if any.
pub fn implied_status(flags: &Flags, premise: CriterionId, status: Status, target: CriterionId) -> Option<Status> {
    match status {
        Status::Proved if implies(flags, premise, target) => Some(Status::Proved),
        Status::Refuted if implies(flags, target, premise) => Some(Status::Refuted),
        _ => None,
    }
}

/// A Proved criterion that implies a Refuted one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub premise: CriterionId,
    pub conclusion: CriterionId,
}

impl Violation {
    pub fn edge(&self) -> String {
        format!("{}⇒{}", self.premise, self.conclusion)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} Proved but {} Refuted", self.edge(), self.conclusion)
    }
}

/// Every ordered pair `(a, b)` with `a ⇒ b`, `a` Proved and `b` Refuted.
/// Unknown and missing cells never contradict.
pub fn audit_implications(statuses: &BTreeMap<CriterionId, Status>, flags: &Flags) -> Vec<Violation> {
    let reach = closure(flags);
    let mut out = Vec::new();
    for (i, &a) in CriterionId::LY.iter().enumerate() {
        if statuses.get(&a) != Some(&Status::Proved) {
            continue;
        }
        for (j, &b) in CriterionId::LY.iter().enumerate() {
            if i != j && reach[i][j] && statuses.get(&b) == Some(&Status::Refuted) {
                out.push(Violation {
                    premise: a,
                    conclusion: b,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(cells: &[(CriterionId, Status)]) -> BTreeMap<CriterionId, Status> {
        cells.iter().copied().collect()
    }

    #[test]
    fn two_cell_contradiction() {
        let t = table(&[(Ly6, Status::Proved), (Ly1, Status::Refuted)]);
        let v = audit_implications(&t, &Flags::default());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].edge(), "LY6⇒LY1");
    }

    #[test]
    fn unknown_never_contradicts() {
        let t = table(&[(Ly6, Status::Proved), (Ly1, Status::UnknownAtHorizon)]);
        assert!(audit_implications(&t, &Flags::default()).is_empty());
    }

    #[test]
    fn conditional_edges() {
        let t = table(&[(Ly5, Status::Proved), (Ly6, Status::Refuted)]);
        assert!(audit_implications(&t, &Flags::default()).is_empty());
        let inj = Flags {
            injective: true,
            ..Flags::default()
        };
        assert_eq!(audit_implications(&t, &inj).len(), 1);
        assert_eq!(implied_status(&inj, Ly6, Status::Refuted, Ly5), Some(Status::Refuted));
        assert_eq!(implied_status(&Flags::default(), Ly6, Status::Refuted, Ly5), None);
    }
}
