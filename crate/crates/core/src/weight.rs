//! Nonnegative measure values extended by a single point at infinity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::scalar::{ratio_string, Scalar};

/// A value of `μ`: a nonnegative scalar or `Infinite`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedWeight<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> ExtendedWeight<S> {
    pub fn zero() -> Self {
        ExtendedWeight::Finite(S::zero())
    }

    pub fn one() -> Self {
        ExtendedWeight::Finite(S::one())
    }

    pub fn finite(v: S) -> Self {
        debug_assert!(!v.is_negative(), "measure values are nonnegative");
        ExtendedWeight::Finite(v)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedWeight::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtendedWeight::Finite(v) if v.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    pub fn as_finite(&self) -> Option<&S> {
        match self {
            ExtendedWeight::Finite(v) => Some(v),
            ExtendedWeight::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<S> {
        match self {
            ExtendedWeight::Finite(v) => Some(v),
            ExtendedWeight::Infinite => None,
        }
    }

    /// Multiplication by a nonnegative finite scalar; `0 · ∞ = 0`.
    pub fn scale(&self, k: &S) -> Self {
        match self {
            ExtendedWeight::Finite(v) => ExtendedWeight::Finite(v.clone() * k.clone()),
            ExtendedWeight::Infinite if k.is_zero() => Self::zero(),
            ExtendedWeight::Infinite => ExtendedWeight::Infinite,
        }
    }

    /// `self / other` for ratios of measures. `None` when both sides are zero
    /// or both are infinite. `q / ∞ = 0` and `∞ / q = ∞` are returned as such;
    /// callers that must not divide by infinity check first.
    pub fn ratio(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (ExtendedWeight::Infinite, ExtendedWeight::Infinite) => None,
            (ExtendedWeight::Infinite, _) => Some(ExtendedWeight::Infinite),
            (ExtendedWeight::Finite(_), ExtendedWeight::Infinite) => Some(Self::zero()),
            (ExtendedWeight::Finite(a), ExtendedWeight::Finite(b)) => {
                if b.is_zero() {
                    if a.is_zero() {
                        None
                    } else {
                        Some(ExtendedWeight::Infinite)
                    }
                } else {
                    Some(ExtendedWeight::Finite(a.clone() / b.clone()))
                }
            }
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedWeight::Finite(v) => v.to_f64(),
            ExtendedWeight::Infinite => f64::INFINITY,
        }
    }

    /// `"num/den"` or `"inf"`.
    pub fn to_ratio_string(&self) -> String {
        match self {
            ExtendedWeight::Finite(v) => ratio_string(v),
            ExtendedWeight::Infinite => "inf".to_string(),
        }
    }

    /// Inverse of [`to_ratio_string`](Self::to_ratio_string); rejects negatives.
    pub fn parse(s: &str) -> Option<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Some(ExtendedWeight::Infinite);
        }
        let v = S::parse_str(t)?;
        if v.is_negative() {
            return None;
        }
        Some(ExtendedWeight::Finite(v))
    }

    pub fn sum<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        iter.into_iter().fold(Self::zero(), |a, b| a + b)
    }
}

impl<S: Scalar> Add for ExtendedWeight<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedWeight::Finite(a), ExtendedWeight::Finite(b)) => ExtendedWeight::Finite(a + b),
            _ => ExtendedWeight::Infinite,
        }
    }
}

impl<S: Scalar> PartialOrd for ExtendedWeight<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtendedWeight::Infinite, ExtendedWeight::Infinite) => Some(Ordering::Equal),
            (ExtendedWeight::Infinite, _) => Some(Ordering::Greater),
            (_, ExtendedWeight::Infinite) => Some(Ordering::Less),
            (ExtendedWeight::Finite(a), ExtendedWeight::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<S: Scalar> From<S> for ExtendedWeight<S> {
    fn from(v: S) -> Self {
        ExtendedWeight::Finite(v)
    }
}

impl<S: Scalar> fmt::Display for ExtendedWeight<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ratio_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type W = ExtendedWeight<Rational>;

    fn w(n: i64, d: i64) -> W {
        W::Finite(Rational::from_ratio(n, d))
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!(w(1, 2) + W::Infinite, W::Infinite);
        assert_eq!(W::sum([w(1, 2), w(1, 4)]), w(3, 4));
        assert!(W::Infinite > w(1000, 1));
    }

    #[test]
    fn ratios() {
        assert_eq!(w(1, 2).ratio(&w(1, 4)), Some(w(2, 1)));
        assert_eq!(w(0, 1).ratio(&w(0, 1)), None);
        assert_eq!(w(1, 1).ratio(&W::Infinite), Some(w(0, 1)));
        assert_eq!(W::Infinite.ratio(&W::Infinite), None);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["inf", "3/8", "0", "7"] {
            let v = W::parse(s).unwrap();
            assert_eq!(W::parse(&v.to_ratio_string()), Some(v));
        }
        assert!(W::parse("-1/2").is_none());
        assert!(W::parse("1/0").is_none());
    }
}
