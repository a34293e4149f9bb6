//! Finite fields F_q = F_l[x]/(modulus) with the modulus fixed as the
//! lexicographically smallest monic irreducible of the requested degree.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::primes::{is_prime, pow_mod};
use super::ArithError;

/// Dense polynomial over F_l as coefficient vector, low degree first, trimmed.
type PrimePoly = Vec<u64>;

fn trim(p: &mut PrimePoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn inv_mod(a: u64, l: u64) -> u64 {
    pow_mod(a, l - 2, l)
}

fn pp_sub(a: &PrimePoly, b: &PrimePoly, l: u64) -> PrimePoly {
    let n = a.len().max(b.len());
    let mut out: PrimePoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + l - y) % l
        })
        .collect();
    trim(&mut out);
    out
}

fn pp_rem(a: &PrimePoly, m: &PrimePoly, l: u64) -> PrimePoly {
    let mut r = a.clone();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], l);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u128 * lead_inv as u128 % l as u128) as u64;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u128 * mi as u128 % l as u128) as u64;
            r[shift + i] = (r[shift + i] + l - sub) % l;
        }
        trim(&mut r);
    }
    r
}

fn pp_mulmod(a: &PrimePoly, b: &PrimePoly, m: &PrimePoly, l: u64) -> PrimePoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % l as u128) as u64;
        }
    }
    pp_rem(&prod, m, l)
}

fn pp_gcd(a: &PrimePoly, b: &PrimePoly, l: u64) -> PrimePoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = pp_rem(&a, &b, l);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or: a monic g of degree d is irreducible iff gcd(x^(l^i) - x, g) = 1 for i <= d/2.
fn is_irreducible(g: &PrimePoly, l: u64) -> bool {
    let d = g.len() - 1;
    if d == 1 {
        return true;
    }
    if g[0] == 0 {
        return false;
    }
    let x: PrimePoly = vec![0, 1];
    let mut power = x.clone();
    for _ in 0..d / 2 {
        // power <- power^l mod g
        let mut acc: PrimePoly = vec![1];
        let mut base = power.clone();
        let mut e = l;
        while e > 0 {
            if e & 1 == 1 {
                acc = pp_mulmod(&acc, &base, g, l);
            }
            base = pp_mulmod(&base, &base, g, l);
            e >>= 1;
        }
        power = acc;
        let diff = pp_sub(&power, &x, l);
        if pp_gcd(g, &diff, l).len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `f` over F_l. Candidates
/// are ordered by the integer sum c_i l^i, so c_{f-1} is the most significant digit.
pub fn smallest_irreducible(l: u64, f: usize) -> PrimePoly {
    let mut tail = vec![0u64; f];
    loop {
        let mut g = tail.clone();
        g.push(1);
        if is_irreducible(&g, l) {
            return g;
        }
        let mut i = 0;
        loop {
            tail[i] += 1;
            if tail[i] < l {
                break;
            }
            tail[i] = 0;
            i += 1;
            assert!(i < f, "no irreducible polynomial found");
        }
    }
}

struct FqInner {
    ell: u64,
    degree: usize,
    modulus: PrimePoly,
    order: BigUint,
}

/// Residue field model; cheap to clone.
#[derive(Clone)]
pub struct FqField(Arc<FqInner>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ell == other.0.ell && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.ell, self.0.degree)
    }
}

impl FqField {
    pub fn new(ell: u64, degree: usize) -> Result<FqField, ArithError> {
        if !is_prime(ell) {
            return Err(ArithError::NotPrime(ell));
        }
        if degree < 1 {
            return Err(ArithError::BadDegree(degree));
        }
        if ell >= 1 << 32 {
            return Err(ArithError::CharacteristicTooLarge(ell));
        }
        let modulus = smallest_irreducible(ell, degree);
        let order = BigUint::from(ell).pow(degree as u32);
        Ok(FqField(Arc::new(FqInner { ell, degree, modulus, order })))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.ell
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Monic modulus, coefficients low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn order(&self) -> &BigUint {
        &self.0.order
    }

    /// `q` as u64 when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.0.order.to_u64()
    }

    pub fn zero(&self) -> FqElement {
        FqElement { field: self.clone(), c: vec![0; self.0.degree] }
    }

    pub fn one(&self) -> FqElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FqElement {
        let l = self.0.ell as i64;
        let mut e = self.zero();
        e.c[0] = n.rem_euclid(l) as u64;
        e
    }

    pub fn from_biguint_mod(&self, n: &BigUint) -> FqElement {
        let r = (n % self.0.ell).to_u64().unwrap();
        let mut e = self.zero();
        e.c[0] = r;
        e
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<FqElement, ArithError> {
        if coords.len() != self.0.degree || coords.iter().any(|&c| c >= self.0.ell) {
            return Err(ArithError::BadCoordinates);
        }
        Ok(FqElement { field: self.clone(), c: coords.to_vec() })
    }

    /// The class of the polynomial variable.
    pub fn generator(&self) -> FqElement {
        let mut e = self.zero();
        if self.0.degree == 1 {
            // modulus is x - c for f = 1; the class of x is then c
            e.c[0] = (self.0.ell - self.0.modulus[0]) % self.0.ell;
        } else {
            e.c[1] = 1;
        }
        e
    }

    /// Element whose base-l digits (low first) are the coordinates.
    pub fn element_from_index(&self, mut index: u64) -> FqElement {
        let mut e = self.zero();
        for slot in e.c.iter_mut() {
            *slot = index % self.0.ell;
            index /= self.0.ell;
        }
        e
    }

    /// Every element, in index order. Panics when q does not fit in u64.
    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        let q = self.order_u64().expect("field too large to enumerate");
        (0..q).map(move |i| self.element_from_index(i))
    }

    fn reduce_poly(&self, mut p: Vec<u64>) -> Vec<u64> {
        let f = self.0.degree;
        let l = self.0.ell;
        let m = &self.0.modulus;
        for i in (f..p.len()).rev() {
            let c = p[i];
            if c == 0 {
                continue;
            }
            p[i] = 0;
            for j in 0..f {
                let sub = (c as u128 * m[j] as u128 % l as u128) as u64;
                p[i - f + j] = (p[i - f + j] + l - sub) % l;
            }
        }
        p.truncate(f);
        p.resize(f, 0);
        p
    }
}

/// Element of an `FqField`, stored by its `f` coordinates in {0, ..., l-1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqElement {
    field: FqField,
    c: Vec<u64>,
}

impl std::hash::Hash for FqField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.ell.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.0.degree == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FqElement {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.c
    }

    pub fn index(&self) -> u64 {
        self.c.iter().rev().fold(0u64, |acc, &d| acc * self.field.0.ell + d)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&d| d == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&d| d == 0)
    }

    /// True when the element lies in the prime field.
    pub fn is_prime_field(&self) -> bool {
        self.c[1..].iter().all(|&d| d == 0)
    }

    pub fn pow(&self, exp: &BigUint) -> FqElement {
        let mut acc = self.field.one();
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = &acc * &acc;
            if exp.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    pub fn pow_u64(&self, exp: u64) -> FqElement {
        self.pow(&BigUint::from(exp))
    }

    pub fn inverse(&self) -> Option<FqElement> {
        if self.is_zero() {
            return None;
        }
        let q = self.field.order();
        Some(self.pow(&(q - 2u32)))
    }

    /// Zero counts as a square. Odd characteristic uses Euler's criterion;
    /// characteristic 2 finds the root explicitly.
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.field.0.ell == 2 {
            let root = self.nth_char_root();
            return &root * &root == *self;
        }
        let q = self.field.order();
        self.pow(&((q - 1u32) >> 1)).is_one()
    }

    /// The unique l-th root, x^(q/l), where l is the characteristic.
    pub fn nth_char_root(&self) -> FqElement {
        let q = self.field.order();
        self.pow(&(q / self.field.0.ell))
    }

    /// Absolute trace to the prime field.
    pub fn trace(&self) -> u64 {
        let mut acc = self.clone();
        let mut x = self.clone();
        for _ in 1..self.field.0.degree {
            x = x.pow_u64(self.field.0.ell);
            acc += &x;
        }
        acc.c[0]
    }

    fn binop(&self, other: &FqElement, op: impl Fn(u64, u64) -> u64) -> FqElement {
        debug_assert!(self.field == other.field, "mixed fields");
        FqElement {
            field: self.field.clone(),
            c: self.c.iter().zip(&other.c).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    fn mul_impl(&self, other: &FqElement) -> FqElement {
        debug_assert!(self.field == other.field, "mixed fields");
        let l = self.field.0.ell;
        let f = self.field.0.degree;
        if f == 1 {
            let v = (self.c[0] as u128 * other.c[0] as u128 % l as u128) as u64;
            return FqElement { field: self.field.clone(), c: vec![v] };
        }
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u128 + a as u128 * b as u128) % l as u128) as u64;
            }
        }
        FqElement { field: self.field.clone(), c: self.field.reduce_poly(prod) }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&FqElement> for &FqElement {
            type Output = FqElement;
            fn $method(self, rhs: &FqElement) -> FqElement {
                let f: fn(&FqElement, &FqElement) -> FqElement = $body;
                f(self, rhs)
            }
        }
        impl $tr<FqElement> for FqElement {
            type Output = FqElement;
            fn $method(self, rhs: FqElement) -> FqElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FqElement> for FqElement {
            type Output = FqElement;
            fn $method(self, rhs: &FqElement) -> FqElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<FqElement> for &FqElement {
            type Output = FqElement;
            fn $method(self, rhs: FqElement) -> FqElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let l = a.field.0.ell;
    a.binop(b, |x, y| (x + y) % l)
});
forward_binop!(Sub, sub, |a, b| {
    let l = a.field.0.ell;
    a.binop(b, |x, y| (x + l - y) % l)
});
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl AddAssign<&FqElement> for FqElement {
    fn add_assign(&mut self, rhs: &FqElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FqElement> for FqElement {
    fn sub_assign(&mut self, rhs: &FqElement) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FqElement> for FqElement {
    fn mul_assign(&mut self, rhs: &FqElement) {
        *self = &*self * rhs;
    }
}

impl Neg for &FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        let l = self.field.0.ell;
        FqElement { field: self.field.clone(), c: self.c.iter().map(|&x| (l - x) % l).collect() }
    }
}

impl Neg for FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        -&self
    }
}
