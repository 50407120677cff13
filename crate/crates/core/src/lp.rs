//! Finitely supported vectors of `L^p`, the composition operator and exact
//! orbit norms.
//!
//! Norms are carried as `‖·‖^p` so every value stays rational.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::atom::{Atom, AtomSet};
use crate::error::{Error, Result};
use crate::measure::backward_trace;
use crate::scalar::{Exponent, Scalar};
use crate::system::AtomicSystem;
use crate::weight::ExtendedWeight;

/// A finitely supported vector. Invariants: no stored zeros, no value on an
/// atom of measure zero (the canonical a.e. representative) and none on an
/// atom of infinite measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction<S> {
    support: BTreeMap<Atom, S>,
    p: Exponent,
}

impl<S: Scalar> SimpleFunction<S> {
    pub fn zero(p: Exponent) -> Self {
        SimpleFunction {
            support: BTreeMap::new(),
            p,
        }
    }

    /// Canonicalizes `values` against `sys`; a repeated atom keeps its last
    /// value.
    pub fn new(sys: &AtomicSystem<S>, values: impl IntoIterator<Item = (Atom, S)>, p: Exponent) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (a, v) in values {
            let m = sys.measure(&a)?;
            if v.is_zero() || m.is_zero() {
                support.remove(&a);
                continue;
            }
            if m.is_infinite() {
                return Err(Error::InfiniteNorm(a));
            }
            support.insert(a, v);
        }
        Ok(SimpleFunction { support, p })
    }

    /// `χ_B`.
    pub fn indicator(sys: &AtomicSystem<S>, set: &[Atom], p: Exponent) -> Result<Self> {
        Self::new(sys, set.iter().map(|&a| (a, S::one())), p)
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn support(&self) -> &BTreeMap<Atom, S> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn get(&self, a: &Atom) -> S {
        self.support.get(a).cloned().unwrap_or_else(S::zero)
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero(self.p);
        }
        SimpleFunction {
            support: self.support.iter().map(|(a, v)| (*a, v.clone() * k.clone())).collect(),
            p: self.p,
        }
    }

    /// `self − other`; both must share `p`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::DimensionMismatch(format!("p = {} against p = {}", self.p, other.p)));
        }
        let mut support = self.support.clone();
        for (a, v) in &other.support {
            let d = support.get(a).cloned().unwrap_or_else(S::zero) - v.clone();
            if d.is_zero() {
                support.remove(a);
            } else {
                support.insert(*a, d);
            }
        }
        Ok(SimpleFunction { support, p: self.p })
    }

    /// `‖self‖^p`.
    pub fn norm_p(&self, sys: &AtomicSystem<S>) -> Result<ExtendedWeight<S>> {
        let mut acc = ExtendedWeight::zero();
        for (a, v) in &self.support {
            acc = acc + sys.measure(a)?.scale(&abs_pow(v, &self.p)?);
        }
        Ok(acc)
    }
}

/// `|v|^p`, rejected when it is irrational.
pub fn abs_pow<S: Scalar>(v: &S, p: &Exponent) -> Result<S> {
    v.abs().pow_exponent(p).ok_or_else(|| Error::InexactPower(v.to_string()))
}

/// `T_f φ = φ ∘ f`. Fibers of distinct atoms are disjoint, so values are
/// copied and never summed.
pub fn apply_tf<S: Scalar>(sys: &AtomicSystem<S>, phi: &SimpleFunction<S>) -> Result<SimpleFunction<S>> {
    let mut support = BTreeMap::new();
    for (y, v) in &phi.support {
        for x in sys.fiber(y)? {
            let m = sys.measure(&x)?;
            if m.is_zero() {
                continue;
            }
            if m.is_infinite() {
                return Err(Error::InfiniteNorm(x));
            }
            support.insert(x, v.clone());
        }
    }
    Ok(SimpleFunction { support, p: phi.p })
}

/// `n ↦ ‖T_f^n φ‖^p` for `n = 0..=horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTrace<S> {
    pub values: Vec<ExtendedWeight<S>>,
    pub horizon: u64,
}

impl<S: Scalar> OrbitTrace<S> {
    /// CSV with header `n,numerator,denominator,is_infinite`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,numerator,denominator,is_infinite\n");
        for (n, v) in self.values.iter().enumerate() {
            match v {
                ExtendedWeight::Finite(x) => {
                    let (num, den) = x.ratio_parts();
                    let _ = writeln!(out, "{n},{num},{den},false");
                }
                ExtendedWeight::Infinite => {
                    let _ = writeln!(out, "{n},inf,,true");
                }
            }
        }
        out
    }
}

/// Sums `|φ(y)|^p μ(f^{-n}{y})` over the support.
pub fn orbit_norms<S: Scalar>(sys: &AtomicSystem<S>, phi: &SimpleFunction<S>, horizon: u64) -> Result<OrbitTrace<S>> {
    let mut values = vec![ExtendedWeight::zero(); horizon as usize + 1];
    for (y, v) in &phi.support {
        let w = abs_pow(v, &phi.p)?;
        let trace = backward_trace(sys, &AtomSet::singleton(*y), horizon)?;
        for (acc, m) in values.iter_mut().zip(trace) {
            if m.is_infinite() {
                return Err(Error::InfiniteNorm(*y));
            }
            *acc = acc.clone() + m.scale(&w);
        }
    }
    Ok(OrbitTrace { values, horizon })
}

/// Independent path: iterate [`apply_tf`] and sum `‖·‖^p` directly.
pub fn orbit_norms_oracle<S: Scalar>(sys: &AtomicSystem<S>, phi: &SimpleFunction<S>, horizon: u64) -> Result<OrbitTrace<S>> {
    let mut cur = phi.clone();
    let mut values = Vec::with_capacity(horizon as usize + 1);
    for n in 0..=horizon {
        if n > 0 {
            cur = apply_tf(sys, &cur)?;
        }
        values.push(cur.norm_p(sys)?);
    }
    Ok(OrbitTrace { values, horizon })
}

/// Atoms carrying positive finite measure inside the window.
pub fn finite_window_atoms<S: Scalar>(sys: &AtomicSystem<S>, radius: u64) -> Vec<Atom> {
    sys.window_atoms(radius)
        .into_iter()
        .filter(|a| matches!(sys.measure(a), Ok(ExtendedWeight::Finite(ref m)) if !m.is_zero()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn tf_on_indicators() {
        let sys = gallery::ninjective::<Rational>();
        let phi = SimpleFunction::indicator(&sys, &[Atom::Point(1)], Exponent::ONE).unwrap();
        let img = apply_tf(&sys, &phi).unwrap();
        let want: Vec<Atom> = vec![Atom::Point(1), Atom::Point(2)];
        assert_eq!(img.support().keys().copied().collect::<Vec<_>>(), want);

        let line = gallery::notfinite::<Rational>();
        let phi = SimpleFunction::indicator(&line, &[Atom::Point(0)], Exponent::ONE).unwrap();
        let img = apply_tf(&line, &phi).unwrap();
        assert_eq!(img.support().keys().copied().collect::<Vec<_>>(), vec![Atom::Point(-1)]);

        let zero = SimpleFunction::zero(Exponent::ONE);
        assert!(apply_tf(&line, &zero).unwrap().is_zero());
    }

    #[test]
    fn notfinite_norms_halve() {
        let sys = gallery::notfinite::<Rational>();
        let phi = SimpleFunction::indicator(&sys, &[Atom::Point(0)], Exponent::ONE).unwrap();
        let t = orbit_norms(&sys, &phi, 10).unwrap();
        for (k, v) in t.values.iter().enumerate() {
            assert_eq!(*v, ExtendedWeight::Finite(Rational::pow2(-(k as i64))));
        }
        assert_eq!(t, orbit_norms_oracle(&sys, &phi, 10).unwrap());
    }

    #[test]
    fn zero_trace() {
        let sys = gallery::ninjective::<Rational>();
        let t = orbit_norms(&sys, &SimpleFunction::zero(Exponent::ONE), 5).unwrap();
        assert!(t.values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn infinite_atoms_rejected() {
        let sys = gallery::se4::<Rational>();
        let err = SimpleFunction::new(&sys, [(Atom::Point(1), q(1, 1))], Exponent::ONE).unwrap_err();
        assert_eq!(err, Error::InfiniteNorm(Atom::Point(1)));
    }

    #[test]
    fn fractional_p() {
        let sys = gallery::notfinite::<Rational>();
        let p: Exponent = "3/2".parse().unwrap();
        let phi = SimpleFunction::new(&sys, [(Atom::Point(0), q(4, 1))], p).unwrap();
        assert_eq!(phi.norm_p(&sys).unwrap(), ExtendedWeight::Finite(q(8, 1)));
        let bad = SimpleFunction::new(&sys, [(Atom::Point(0), q(2, 1))], p).unwrap();
        assert!(matches!(bad.norm_p(&sys), Err(Error::InexactPower(_))));
    }

    #[test]
    fn csv_header() {
        let t = OrbitTrace::<Rational> {
            values: vec![ExtendedWeight::Finite(q(1, 2)), ExtendedWeight::Infinite],
            horizon: 1,
        };
        assert_eq!(t.to_csv(), "n,numerator,denominator,is_infinite\n0,1,2,false\n1,inf,,true\n");
    }
}
