use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::primes::is_prime;
use super::ArithError;

/// Reduced fraction with positive denominator; zero is 0/1.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"-3"`, `"7/8"` or `"  12 "`.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ArithError::ZeroDenominator);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Exponent of a prime in a rational number; `PlusInfinity` only for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::PlusInfinity)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::PlusInfinity) => Ordering::Less,
            (Valuation::PlusInfinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::PlusInfinity, Valuation::PlusInfinity) => Ordering::Equal,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::PlusInfinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::PlusInfinity => write!(f, "+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::PlusInfinity => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "+inf" => Ok(Valuation::PlusInfinity),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// Exponent of `p` in a nonzero integer, without primality checks.
pub fn int_val(n: &BigInt, p: u64) -> i64 {
    if n.is_zero() {
        return i64::MAX;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// p-adic valuation; `|x|_p = p^(-vp(x))`.
pub fn vp(x: &Rational, p: u64) -> Result<Valuation, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    Ok(vp_unchecked(x, p))
}

pub(crate) fn vp_unchecked(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::PlusInfinity;
    }
    Valuation::Finite(int_val(x.numer(), p) - int_val(x.denom(), p))
}

/// Splits off the p-power: returns (k, u) with x = p^k * u, vp(u) = 0. Zero maps to (0, 0).
pub fn split_p_power(x: &Rational, p: u64) -> (i64, Rational) {
    match vp_unchecked(x, p) {
        Valuation::PlusInfinity => (0, Rational::zero()),
        Valuation::Finite(k) => {
            let pk = Rational::from_integer(BigInt::from(p)).pow(k as i32);
            (k, x / pk)
        }
    }
}

/// Largest power of `p` dividing the positive integer `n`.
pub fn p_part(n: &BigInt, p: u64) -> BigInt {
    BigInt::from(p).pow(int_val(n, p) as u32)
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Integer square root test: returns `Some(r)` with r >= 0, r^2 = n.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn rational_sqrt_exact(x: &Rational) -> Option<Rational> {
    let n = int_sqrt_exact(x.numer())?;
    let d = int_sqrt_exact(x.denom())?;
    Some(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vp_examples() {
        assert_eq!(vp(&ratio(8, 7), 7).unwrap(), Valuation::Finite(-1));
        assert_eq!(vp(&rat(0), 7).unwrap(), Valuation::PlusInfinity);
        assert_eq!(vp(&ratio(729, 728), 7).unwrap(), Valuation::Finite(-1));
        assert_eq!(vp(&rat(-1664), 2).unwrap(), Valuation::Finite(7));
        assert!(matches!(vp(&rat(5), 6), Err(ArithError::NotPrime(6))));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational(" -3 ").unwrap(), rat(-3));
        assert_eq!(parse_rational("14/-8").unwrap(), ratio(-7, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuation_order() {
        assert!(Valuation::Finite(100) < Valuation::PlusInfinity);
        assert_eq!(Valuation::Finite(2) + Valuation::PlusInfinity, Valuation::PlusInfinity);
        assert_eq!(serde_json::to_string(&Valuation::PlusInfinity).unwrap(), "\"+inf\"");
    }
}
