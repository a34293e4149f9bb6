use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::CurveError;
use crate::arith::fq::{FqElement, FqField};
use crate::arith::poly::Coefficient;
use crate::arith::primes::prime_divisors;
use crate::arith::rational::{int_val, parse_rational, vp_unchecked, Rational, Valuation};

/// b2, b4, b6, b8 from a1..a6 over any coefficient ring.
pub fn b_invariants<T: Coefficient>(a: &[T; 5]) -> [T; 4] {
    let [a1, a2, a3, a4, a6] = a;
    let one = a1.one_like();
    let k = |n: u32| -> T {
        let mut acc = a1.zero_like();
        for _ in 0..n {
            acc = acc.add_ref(&one);
        }
        acc
    };
    let a1a1 = a1.mul_ref(a1);
    let b2 = a1a1.add_ref(&k(4).mul_ref(a2));
    let b4 = k(2).mul_ref(a4).add_ref(&a1.mul_ref(a3));
    let b6 = a3.mul_ref(a3).add_ref(&k(4).mul_ref(a6));
    let b8 = a1a1
        .mul_ref(a6)
        .add_ref(&k(4).mul_ref(a2).mul_ref(a6))
        .sub_ref(&a1.mul_ref(a3).mul_ref(a4))
        .add_ref(&a2.mul_ref(a3).mul_ref(a3))
        .sub_ref(&a4.mul_ref(a4));
    [b2, b4, b6, b8]
}

/// Discriminant over any coefficient ring.
pub fn discriminant<T: Coefficient>(a: &[T; 5]) -> T {
    let [b2, b4, b6, b8] = b_invariants(a);
    let one = b2.one_like();
    let k = |n: u32| -> T {
        let mut acc = b2.zero_like();
        for _ in 0..n {
            acc = acc.add_ref(&one);
        }
        acc
    };
    let t1 = b2.mul_ref(&b2).mul_ref(&b8).neg_ref();
    let t2 = k(8).mul_ref(&b4).mul_ref(&b4).mul_ref(&b4);
    let t3 = k(27).mul_ref(&b6).mul_ref(&b6);
    let t4 = k(9).mul_ref(&b2).mul_ref(&b4).mul_ref(&b6);
    t1.sub_ref(&t2).sub_ref(&t3).add_ref(&t4)
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q, nonsingular.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    a: [Rational; 5],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    #[serde(with = "rational_str")]
    pub b2: Rational,
    #[serde(with = "rational_str")]
    pub b4: Rational,
    #[serde(with = "rational_str")]
    pub b6: Rational,
    #[serde(with = "rational_str")]
    pub b8: Rational,
    #[serde(with = "rational_str")]
    pub c4: Rational,
    #[serde(with = "rational_str")]
    pub c6: Rational,
    #[serde(with = "rational_str")]
    pub discriminant: Rational,
    #[serde(with = "rational_str")]
    pub j: Rational,
}

impl WeierstrassModel {
    pub fn new(a: [Rational; 5]) -> Result<Self, CurveError> {
        if discriminant(&a).is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(WeierstrassModel { a })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self, CurveError> {
        Self::new(a.map(|x| Rational::from_integer(BigInt::from(x))))
    }

    pub fn parse(a: &[impl AsRef<str>]) -> Result<Self, CurveError> {
        if a.len() != 5 {
            return Err(CurveError::CoefficientCount(a.len()));
        }
        let mut out: [Rational; 5] = Default::default();
        for (slot, s) in out.iter_mut().zip(a) {
            *slot = parse_rational(s.as_ref()).map_err(CurveError::Arith)?;
        }
        Self::new(out)
    }

    pub fn coefficients(&self) -> &[Rational; 5] {
        &self.a
    }

    pub fn a1(&self) -> &Rational {
        &self.a[0]
    }
    pub fn a2(&self) -> &Rational {
        &self.a[1]
    }
    pub fn a3(&self) -> &Rational {
        &self.a[2]
    }
    pub fn a4(&self) -> &Rational {
        &self.a[3]
    }
    pub fn a6(&self) -> &Rational {
        &self.a[4]
    }

    pub fn invariants(&self) -> CurveInvariants {
        let [b2, b4, b6, b8] = b_invariants(&self.a);
        let c4 = &b2 * &b2 - Rational::from_integer(24.into()) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + Rational::from_integer(36.into()) * &b2 * &b4
            - Rational::from_integer(216.into()) * &b6;
        let disc = discriminant(&self.a);
        let j = &c4 * &c4 * &c4 / &disc;
        CurveInvariants { b2, b4, b6, b8, c4, c6, discriminant: disc, j }
    }

    pub fn discriminant(&self) -> Rational {
        discriminant(&self.a)
    }

    pub fn j_invariant(&self) -> Rational {
        self.invariants().j
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|c| c.denom().is_one())
    }

    /// Scales by u = prod l^k so that every u^i a_i is integral; returns the
    /// model with a_i' = u^i a_i (the isomorphism x = x'/u^2, y = y'/u^3).
    pub fn integral_model(&self) -> WeierstrassModel {
        let weights = [1u32, 2, 3, 4, 6];
        let mut u = BigInt::one();
        let denoms = self.a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        for l in prime_divisors(&denoms) {
            let k = self
                .a
                .iter()
                .zip(weights)
                .map(|(c, w)| {
                    let d = int_val(c.denom(), l);
                    (d + w as i64 - 1) / w as i64
                })
                .max()
                .unwrap_or(0);
            u *= BigInt::from(l).pow(k as u32);
        }
        self.scale(&Rational::from_integer(u))
    }

    /// a_i -> u^i a_i.
    pub fn scale(&self, u: &Rational) -> WeierstrassModel {
        let weights = [1i32, 2, 3, 4, 6];
        let mut a = self.a.clone();
        for (c, w) in a.iter_mut().zip(weights) {
            *c = &*c * u.pow(w);
        }
        WeierstrassModel { a }
    }

    /// Makes the model integral at `l` by scaling with a power of `l` only.
    pub fn integral_at(&self, l: u64) -> WeierstrassModel {
        let weights = [1i64, 2, 3, 4, 6];
        let k = self
            .a
            .iter()
            .zip(weights)
            .map(|(c, w)| match vp_unchecked(c, l) {
                Valuation::Finite(v) if v < 0 => (-v + w - 1) / w,
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        let u = Rational::from_integer(BigInt::from(l).pow(k as u32));
        self.scale(&u)
    }

    /// Reduction of an l-integral model into `field` (characteristic l).
    pub fn reduce(&self, field: &FqField) -> Result<FqModel, CurveError> {
        let l = field.characteristic();
        let mut out = Vec::with_capacity(5);
        for c in &self.a {
            if int_val(c.denom(), l) > 0 {
                return Err(CurveError::NotIntegralAt(l));
            }
            let lb = BigInt::from(l);
            let num = c.numer().mod_floor(&lb);
            let den = c.denom().mod_floor(&lb);
            let num = field.from_int(num.try_into().unwrap());
            let den = field.from_int(den.try_into().unwrap());
            out.push(num * den.inverse().expect("unit denominator"));
        }
        Ok(FqModel { a: out.try_into().unwrap() })
    }

    /// Valuation of the discriminant at l.
    pub fn disc_valuation(&self, l: u64) -> i64 {
        vp_unchecked(&self.discriminant(), l).finite().expect("nonsingular")
    }

    /// Rational primes dividing the discriminant of the integral model.
    pub fn bad_primes(&self) -> Vec<u64> {
        let m = self.integral_model();
        prime_divisors(m.discriminant().numer())
    }

    pub fn to_strings(&self) -> [String; 5] {
        self.a.clone().map(|c| c.to_string())
    }

    pub fn is_negative_disc(&self) -> bool {
        self.discriminant().is_negative()
    }
}

impl fmt::Debug for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.a.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl Serialize for WeierstrassModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeierstrassModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        WeierstrassModel::parse(&raw).map_err(serde::de::Error::custom)
    }
}

/// A Weierstrass model over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqModel {
    pub a: [FqElement; 5],
}

impl FqModel {
    pub fn new(a: [FqElement; 5]) -> Self {
        FqModel { a }
    }

    pub fn field(&self) -> &FqField {
        self.a[0].field()
    }

    pub fn discriminant(&self) -> FqElement {
        discriminant(&self.a)
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// Coordinates of every coefficient lie in the prime field.
    pub fn defined_over_prime_field(&self) -> bool {
        self.a.iter().all(|c| c.is_prime_field())
    }

    /// The same equation read over the prime field.
    pub fn descend_to_prime_field(&self) -> Option<FqModel> {
        if !self.defined_over_prime_field() {
            return None;
        }
        let base = FqField::new(self.field().characteristic(), 1).ok()?;
        let a = self.a.clone().map(|c| base.from_int(c.coords()[0] as i64));
        Some(FqModel { a })
    }
}

pub(crate) mod rational_str {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    #[allow(dead_code)]
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{rat, ratio};

    #[test]
    fn discriminant_examples() {
        let e = WeierstrassModel::from_ints([1, 0, 0, -1, -1]).unwrap();
        assert_eq!(e.discriminant(), rat(-294));
        let e2 = WeierstrassModel::from_ints([-1, 2, 2, 0, 0]).unwrap();
        assert_eq!(e2.discriminant(), rat(-1664));
        assert_eq!(rat(-1664), rat(-(1 << 7) * 13));
        let e3 = WeierstrassModel::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(e3.discriminant(), rat(-432));
        assert_eq!(e3.j_invariant(), rat(0));
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(WeierstrassModel::from_ints([0, 0, 0, 0, 0]), Err(CurveError::Singular)));
        assert!(matches!(WeierstrassModel::from_ints([0, 0, 0, -3, 2]), Err(CurveError::Singular)));
    }

    #[test]
    fn integral_model_clears_denominators() {
        let a = [ratio(1, 2), rat(0), ratio(1, 3), rat(1), ratio(5, 7)];
        let m = WeierstrassModel::new(a).unwrap();
        let im = m.integral_model();
        assert!(im.is_integral());
        assert_eq!(im.j_invariant(), m.j_invariant());
        let at3 = m.integral_at(3);
        assert!(vp_unchecked(at3.a3(), 3) >= Valuation::Finite(0));
    }

    #[test]
    fn reduction_mod_l() {
        let e = WeierstrassModel::from_ints([1, 0, 0, -1, -1]).unwrap();
        let f5 = FqField::new(5, 1).unwrap();
        let r = e.reduce(&f5).unwrap();
        assert_eq!(r.a[3], f5.from_int(4));
        assert!(r.is_nonsingular());
        let f7 = FqField::new(7, 1).unwrap();
        assert!(!e.reduce(&f7).unwrap().is_nonsingular());
        let half = WeierstrassModel::new([ratio(1, 2), rat(0), rat(0), rat(1), rat(1)]).unwrap();
        assert!(matches!(half.reduce(&FqField::new(2, 1).unwrap()), Err(CurveError::NotIntegralAt(2))));
    }
}
