//! Scalar abstraction shared by every measure and norm computation.
//!
//! All certificates are meant to be evaluated with [`Rational`]; `f64` is
//! supported for quick exploratory runs where exactness is not required.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational, the default scalar.
pub type Rational = BigRational;

/// Field operations plus the few constructors the library needs.
pub trait Scalar: Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// Whether comparisons on this scalar are exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn to_f64(&self) -> f64;

    /// Parses `"a"`, `"a/b"` or a decimal literal.
    fn parse_str(s: &str) -> Option<Self>;

    /// Numerator and denominator in lowest terms, when the value is rational.
    fn ratio_parts(&self) -> (String, String);

    fn pow2(exp: i64) -> Self {
        Self::from_int(2).powi(exp)
    }

    /// Integer power, negative exponents allowed for nonzero bases.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// `self^p` for the rational exponent `p`, when the result is
    /// representable exactly. Inexact scalars always succeed.
    fn pow_exponent(&self, p: &Exponent) -> Option<Self>;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

/// Exponent `p` of the space `L^p`, a rational `num/den` with `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    num: u32,
    den: u32,
}

impl Exponent {
    pub const ONE: Exponent = Exponent { num: 1, den: 1 };
    pub const TWO: Exponent = Exponent { num: 2, den: 1 };

    pub fn new(num: u32, den: u32) -> Option<Self> {
        if den == 0 || num < den {
            return None;
        }
        let g = gcd(num, den);
        Some(Exponent {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(p: u32) -> Option<Self> {
        Self::new(p, 1)
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: u32 = n.parse().map_err(|_| format!("bad exponent `{s}`"))?;
        let d: u32 = d.parse().map_err(|_| format!("bad exponent `{s}`"))?;
        Exponent::new(n, d).ok_or_else(|| format!("exponent `{s}` must be a rational >= 1"))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact integer `den`-th root of a nonnegative big integer.
fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if k == 1 || n.is_zero() || n.is_one() {
        return Some(n.clone());
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(BigRational::new(n, d));
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Some(BigRational::from_integer(n));
        }
        // decimal literal, read exactly
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.')?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{}{}", if int_part.is_empty() { "0" } else { int_part }, frac_part)
            .parse()
            .ok()?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let v = BigRational::new(digits, den);
        Some(if neg { -v } else { v })
    }

    fn ratio_parts(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }

    fn pow_exponent(&self, p: &Exponent) -> Option<Self> {
        let powered = Scalar::powi(self, p.num as i64);
        if p.den == 1 {
            return Some(powered);
        }
        let num = exact_root(powered.numer(), p.den)?;
        let den = exact_root(powered.denom(), p.den)?;
        Some(BigRational::new(num, den))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            if d == 0.0 {
                return None;
            }
            return Some(n / d);
        }
        s.parse().ok().filter(|v: &f64| v.is_finite())
    }

    fn ratio_parts(&self) -> (String, String) {
        match BigRational::from_float(*self) {
            Some(r) => r.ratio_parts(),
            None => (self.to_string(), "1".to_string()),
        }
    }

    fn powi(&self, exp: i64) -> Self {
        f64::powi(*self, exp as i32)
    }

    fn pow_exponent(&self, p: &Exponent) -> Option<Self> {
        Some(self.abs().powf(p.as_f64()))
    }
}

/// Formats a scalar as `num/den` (or `num` for integers).
pub fn ratio_string<S: Scalar>(v: &S) -> String {
    let (n, d) = v.ratio_parts();
    if d == "1" {
        n
    } else {
        format!("{n}/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Rational::parse_str("3/6"), Some(q(1, 2)));
        assert_eq!(Rational::parse_str("-7"), Some(q(-7, 1)));
        assert_eq!(Rational::parse_str("0.125"), Some(q(1, 8)));
        assert_eq!(Rational::parse_str("1/0"), None);
        assert_eq!(Rational::parse_str("abc"), None);
    }

    #[test]
    fn powers() {
        assert_eq!(Rational::pow2(-3), q(1, 8));
        assert_eq!(Scalar::powi(&q(2, 3), 3), q(8, 27));
        assert_eq!(Scalar::powi(&q(2, 3), -2), q(9, 4));
        assert_eq!(q(4, 9).pow_exponent(&Exponent::new(3, 2).unwrap()), Some(q(8, 27)));
        assert_eq!(q(2, 1).pow_exponent(&Exponent::new(3, 2).unwrap()), None);
    }

    #[test]
    fn exponent_rejects_below_one() {
        assert!(Exponent::new(1, 2).is_none());
        assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::TWO);
        assert!("1/3".parse::<Exponent>().is_err());
    }

    #[test]
    fn ratio_strings() {
        assert_eq!(ratio_string(&q(6, 4)), "3/2");
        assert_eq!(ratio_string(&q(5, 1)), "5");
        assert_eq!(ratio_string(&0.25f64), "1/4");
    }
}
