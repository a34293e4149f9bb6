//! Dense univariate polynomials over a field.

use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::fq::FqElement;
use super::primes::divisors;
use super::rational::Rational;
use super::ArithError;

/// Field element usable as a polynomial coefficient.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn is_zero_coeff(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl Coefficient for Rational {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Coefficient for FqElement {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

/// Coefficients low degree first, trailing zeros trimmed. `zero` is a template
/// element so the zero polynomial still knows its coefficient ring.
#[derive(Clone, PartialEq)]
pub struct Polynomial<T: Coefficient> {
    coeffs: Vec<T>,
    zero: T,
}

impl<T: Coefficient> Polynomial<T> {
    pub fn new(coeffs: Vec<T>, zero: T) -> Self {
        let mut p = Polynomial { coeffs, zero };
        p.trim();
        p
    }

    pub fn zero(zero: T) -> Self {
        Polynomial { coeffs: Vec::new(), zero }
    }

    pub fn constant(c: T) -> Self {
        let zero = c.zero_like();
        Polynomial::new(vec![c], zero)
    }

    /// The monomial x.
    pub fn x(zero: T) -> Self {
        let one = zero.one_like();
        Polynomial::new(vec![zero.clone(), one], zero)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero_coeff()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(self.zero.clone(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn scale(&self, c: &T) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect(), self.zero.clone())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("leading coefficient invertible")),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let mut acc = self.zero.clone();
                for _ in 0..i {
                    acc = acc.add_ref(c);
                }
                acc
            })
            .collect();
        Polynomial::new(coeffs, self.zero.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Polynomial::constant(self.zero.one_like());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), ArithError> {
        let dd = divisor.degree().ok_or(ArithError::ZeroPolynomial)?;
        let lead_inv = divisor.leading().unwrap().inv().ok_or(ArithError::ZeroPolynomial)?;
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Ok((Polynomial::zero(self.zero.clone()), self.clone()));
        }
        let mut quot = vec![self.zero.clone(); n - dd];
        for i in (0..n - dd).rev() {
            let c = rem[i + dd].mul_ref(&lead_inv);
            if c.is_zero_coeff() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].sub_ref(&c.mul_ref(d));
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Polynomial::new(quot, self.zero.clone()), Polynomial::new(rem, self.zero.clone())))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, ArithError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow_mod(&self, exp: &BigUint, modulus: &Self) -> Result<Self, ArithError> {
        let mut acc = Polynomial::constant(self.zero.one_like()).rem(modulus)?;
        let base = self.rem(modulus)?;
        for i in (0..exp.bits()).rev() {
            acc = (&acc * &acc).rem(modulus)?;
            if exp.bit(i) {
                acc = (&acc * &base).rem(modulus)?;
            }
        }
        Ok(acc)
    }
}

impl<T: Coefficient> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i).add_ref(&rhs.coeff(i))).collect(), self.zero.clone())
    }
}

impl<T: Coefficient> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i).sub_ref(&rhs.coeff(i))).collect(), self.zero.clone())
    }
}

impl<T: Coefficient> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.zero.clone());
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_coeff() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Polynomial::new(out, self.zero.clone())
    }
}

impl<T: Coefficient> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| c.neg_ref()).collect(), self.zero.clone())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<T: Coefficient> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Polynomial<T>) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<T: Coefficient + fmt::Display> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<T: Coefficient + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero_coeff())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub type RationalPoly = Polynomial<Rational>;

impl RationalPoly {
    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        Polynomial::new(coeffs, Rational::zero())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_rationals(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    /// Integer polynomial with the same roots: scaled by the lcm of denominators
    /// and divided by the content.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &content).collect()
    }
}

/// Integer evaluation of sum c_i r^i s^(n-i) (the numerator of P(r/s) * s^n).
fn homogeneous_eval(ints: &[BigInt], r: &BigInt, s: &BigInt) -> BigInt {
    let n = ints.len() - 1;
    let mut acc = BigInt::zero();
    let mut s_pow = BigInt::one();
    // Horner in r with s powers folded in from the top
    let mut spows = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        spows.push(s_pow.clone());
        s_pow *= s;
    }
    for (i, c) in ints.iter().enumerate().rev() {
        acc = acc * r + c * &spows[n - i];
    }
    acc
}

fn fast_reject(ints: &[BigInt], r: &BigInt, s: &BigInt) -> bool {
    // cheap modular filter before the exact bigint evaluation
    for m in [1_000_003i64, 998_244_353] {
        let mb = BigInt::from(m);
        let rm = r.mod_floor(&mb);
        let sm = s.mod_floor(&mb);
        let reduced: Vec<BigInt> = ints.iter().map(|c| c.mod_floor(&mb)).collect();
        if !homogeneous_eval(&reduced, &rm, &sm).mod_floor(&mb).is_zero() {
            return true;
        }
    }
    false
}

/// Distinct rational roots, via the rational root theorem on the primitive
/// integer polynomial. Ascending order.
pub fn rational_roots(p: &RationalPoly) -> Result<Vec<Rational>, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let mut ints = p.primitive_integer_coeffs();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(Rational::zero());
        ints.drain(..low);
    }
    if ints.len() > 1 {
        let tops = divisors(ints.last().unwrap());
        let bottoms = divisors(&ints[0]);
        for s in &tops {
            for r in &bottoms {
                if !r.gcd(s).is_one() {
                    continue;
                }
                for r in [r.clone(), -r] {
                    if fast_reject(&ints, &r, s) {
                        continue;
                    }
                    if homogeneous_eval(&ints, &r, s).is_zero() {
                        roots.push(Rational::new(r, s.clone()));
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Number of distinct roots in the coefficient field, as deg gcd(P, x^q - x).
pub fn count_roots_in_field(p: &Polynomial<FqElement>) -> Result<usize, ArithError> {
    let lead = p.leading().ok_or(ArithError::ZeroPolynomial)?;
    let field = lead.field().clone();
    if p.degree() == Some(0) {
        return Ok(0);
    }
    let x = Polynomial::x(field.zero());
    let xq = x.pow_mod(field.order(), p)?;
    let g = p.gcd(&(&xq - &x));
    Ok(g.degree().unwrap_or(0))
}

/// Roots found by trying every element of the field.
pub fn roots_by_enumeration(p: &Polynomial<FqElement>) -> Result<Vec<FqElement>, ArithError> {
    let lead = p.leading().ok_or(ArithError::ZeroPolynomial)?;
    let field = lead.field().clone();
    Ok(field.elements().filter(|a| p.eval(a).is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fq::FqField;
    use crate::arith::rational::{rat, ratio};

    #[test]
    fn rational_root_examples() {
        assert_eq!(rational_roots(&RationalPoly::from_ints(&[-1, 0, 1])).unwrap(), vec![rat(-1), rat(1)]);
        assert_eq!(rational_roots(&RationalPoly::from_ints(&[-2, 3])).unwrap(), vec![ratio(2, 3)]);
        assert!(rational_roots(&RationalPoly::from_ints(&[1, 0, 1])).unwrap().is_empty());
        assert!(matches!(rational_roots(&RationalPoly::from_ints(&[])), Err(ArithError::ZeroPolynomial)));
        // repeated and zero roots listed once
        let p = RationalPoly::from_ints(&[0, 0, 4, -4, 1]);
        assert_eq!(rational_roots(&p).unwrap(), vec![rat(0), rat(2)]);
        let q = RationalPoly::from_rationals(vec![ratio(-1, 6), ratio(-1, 6), rat(1)]);
        assert_eq!(rational_roots(&q).unwrap(), vec![ratio(-1, 3), ratio(1, 2)]);
    }

    #[test]
    fn division_and_gcd() {
        let a = RationalPoly::from_ints(&[-1, 0, 0, 1]);
        let b = RationalPoly::from_ints(&[-1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, RationalPoly::from_ints(&[1, 1, 1]));
        assert!(r.is_zero());
        let g = a.gcd(&RationalPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(g, b);
    }

    #[test]
    fn root_count_matches_enumeration() {
        let field = FqField::new(3, 2).unwrap();
        let elems: Vec<FqElement> = field.elements().collect();
        for a in &elems {
            for b in &elems {
                let p = Polynomial::new(vec![b.clone(), a.clone(), field.zero(), field.one()], field.zero());
                assert_eq!(count_roots_in_field(&p).unwrap(), roots_by_enumeration(&p).unwrap().len());
            }
        }
    }
}
