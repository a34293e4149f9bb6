//! Truncated arithmetic in finite extensions of Q_l: an unramified layer of
//! degree f with a totally ramified Eisenstein layer of degree e on top.
//!
//! An element is `pi^shift * s`, where `s = sum_{i<e} c_i pi^i` and each `c_i`
//! lies in the unramified ring `(Z/l^M)[t]/(h(t))`. The integral part `s` is
//! only known modulo `pi^prec`, so the element is known modulo
//! `pi^(shift + prec)`. Division by `pi` only moves `shift`, so it loses nothing.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::fq::{FqElement, FqField};
use crate::arith::poly::RationalPoly;
use crate::arith::primes::{euler_phi, is_prime};
use crate::arith::rational::{int_val, Rational, Valuation};
use crate::arith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalError {
    #[error("value is indistinguishable from zero at the working precision")]
    IndistinguishableFromZero,
    #[error("element is not integral")]
    NotIntegral,
    #[error("wildly ramified extension of degree {e} over Q_{ell} is only supported for cyclotomic fields")]
    WildNonCyclotomic { ell: u64, e: usize },
    #[error("degree {e} is not phi(l^a) for l = {ell}")]
    NotCyclotomicDegree { ell: u64, e: usize },
    #[error("invalid local field parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// How the totally ramified layer is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ramification {
    Unramified,
    /// pi^e = l, for e prime to l.
    Tame,
    /// pi = zeta - 1 with zeta a primitive l^level-th root of unity.
    Cyclotomic { level: u32 },
}

struct Inner {
    ell: u64,
    f: usize,
    e: usize,
    ramification: Ramification,
    residue: FqField,
    /// Monic lift of the residue modulus, low degree first (length f + 1).
    unram_modulus: Vec<BigInt>,
    /// g_0 .. g_{e-1} of the monic Eisenstein polynomial.
    eisenstein: Vec<BigInt>,
    precision: i64,
    /// Coefficients are stored modulo l^M.
    modulus: BigInt,
    cap: i64,
    /// eps with l = pi^e * eps^{-1}, i.e. eps = pi^e / l = -sum (g_j / l) pi^j.
    eps: Vec<Vec<BigInt>>,
    /// residue of l / pi^e
    rho: FqElement,
}

/// A finite extension of Q_l at a fixed working precision; cheap to clone.
#[derive(Clone)]
pub struct LocalField(Arc<Inner>);

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalField(Q_{}, f={}, e={}, {:?}, N={})", self.0.ell, self.0.f, self.0.e, self.0.ramification, self.0.precision)
    }
}

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ell == other.0.ell
                && self.0.f == other.0.f
                && self.0.e == other.0.e
                && self.0.ramification == other.0.ramification
                && self.0.precision == other.0.precision)
    }
}

/// Phi_{l^a}(1 + x), the Eisenstein polynomial of pi = zeta_{l^a} - 1.
fn cyclotomic_eisenstein(ell: u64, level: u32) -> Vec<BigInt> {
    let shifted_power = |n: u64| -> RationalPoly {
        // (1 + x)^n - 1
        let one_plus_x = RationalPoly::from_ints(&[1, 1]);
        &one_plus_x.pow(n as u32) - &RationalPoly::from_ints(&[1])
    };
    let top = shifted_power(ell.pow(level));
    let bottom = shifted_power(ell.pow(level - 1));
    let (q, r) = top.div_rem(&bottom).expect("nonzero divisor");
    debug_assert!(r.is_zero());
    q.coeffs().iter().map(|c| c.to_integer()).collect()
}

impl LocalField {
    /// `make_local_field`: residue degree `f`, ramification `e`, working
    /// precision `precision` in pi-adic digits. With `cyclotomic` set, e must be
    /// phi(l^a) and the field is Q_l(mu_{l^a}) composed with the unramified layer.
    pub fn new(ell: u64, f: usize, e: usize, precision: i64, cyclotomic: bool) -> Result<LocalField, LocalError> {
        if !is_prime(ell) {
            return Err(ArithError::NotPrime(ell).into());
        }
        if f < 1 || e < 1 || precision < 1 {
            return Err(LocalError::BadParameters(format!("f={f}, e={e}, N={precision}")));
        }
        let ramification = if e == 1 {
            Ramification::Unramified
        } else if cyclotomic {
            let level = (1..64u32)
                .take_while(|&a| ell.checked_pow(a).is_some())
                .find(|&a| euler_phi(ell.pow(a)) == e as u64)
                .ok_or(LocalError::NotCyclotomicDegree { ell, e })?;
            Ramification::Cyclotomic { level }
        } else if (e as u64) % ell != 0 {
            Ramification::Tame
        } else {
            return Err(LocalError::WildNonCyclotomic { ell, e });
        };
        Self::build(ell, f, e, ramification, precision)
    }

    pub fn unramified(ell: u64, f: usize, precision: i64) -> Result<LocalField, LocalError> {
        Self::new(ell, f, 1, precision, false)
    }

    /// Q_l(mu_{l^level}) with an unramified layer of degree f.
    pub fn cyclotomic(ell: u64, level: u32, f: usize, precision: i64) -> Result<LocalField, LocalError> {
        let e = euler_phi(ell.pow(level)) as usize;
        Self::new(ell, f, e, precision, true)
    }

    fn build(ell: u64, f: usize, e: usize, ramification: Ramification, precision: i64) -> Result<LocalField, LocalError> {
        let residue = FqField::new(ell, f)?;
        let unram_modulus: Vec<BigInt> = residue.modulus().iter().map(|&c| BigInt::from(c)).collect();
        let eisenstein: Vec<BigInt> = match ramification {
            Ramification::Unramified => vec![BigInt::from(-(ell as i64))],
            Ramification::Tame => {
                let mut g = vec![BigInt::zero(); e];
                g[0] = BigInt::from(-(ell as i64));
                g
            }
            Ramification::Cyclotomic { level } => {
                let mut g = cyclotomic_eisenstein(ell, level);
                assert_eq!(g.pop(), Some(BigInt::one()));
                g
            }
        };
        let lb = BigInt::from(ell);
        if e > 1 {
            let eisen_ok = int_val(&eisenstein[0], ell) == 1
                && eisenstein[1..].iter().all(|c| c.is_zero() || int_val(c, ell) >= 1);
            if !eisen_ok {
                return Err(LocalError::BadParameters("defining polynomial is not Eisenstein".into()));
            }
        }
        let ell_digits = (precision + e as i64 - 1) / e as i64 + 2;
        let modulus = lb.pow(ell_digits as u32);
        let cap = ell_digits * e as i64;
        let eps: Vec<Vec<BigInt>> = if e == 1 {
            // pi = l, eps = 1
            vec![unit_coords(f, BigInt::one())]
        } else {
            eisenstein
                .iter()
                .map(|g| unit_coords(f, (-(g / &lb)).mod_floor(&modulus)))
                .collect()
        };
        let g0_over_l = (-(&eisenstein[0] / &lb)).mod_floor(&lb);
        let rho = residue
            .from_int(g0_over_l.to_i64().unwrap())
            .inverse()
            .expect("Eisenstein constant term has valuation one");
        Ok(LocalField(Arc::new(Inner {
            ell,
            f,
            e,
            ramification,
            residue,
            unram_modulus,
            eisenstein,
            precision,
            modulus,
            cap,
            eps,
            rho,
        })))
    }

    /// Same field at a different working precision.
    pub fn with_precision(&self, precision: i64) -> Result<LocalField, LocalError> {
        Self::build(self.0.ell, self.0.f, self.0.e, self.0.ramification, precision)
    }

    pub fn residue_characteristic(&self) -> u64 {
        self.0.ell
    }

    pub fn residue_degree(&self) -> usize {
        self.0.f
    }

    pub fn ramification_index(&self) -> usize {
        self.0.e
    }

    pub fn ramification(&self) -> Ramification {
        self.0.ramification
    }

    pub fn precision(&self) -> i64 {
        self.0.precision
    }

    pub fn residue_field(&self) -> &FqField {
        &self.0.residue
    }

    /// Size of the residue field, l^f.
    pub fn residue_size(&self) -> BigInt {
        BigInt::from(self.0.ell).pow(self.0.f as u32)
    }

    /// Eisenstein polynomial coefficients g_0 .. g_{e-1} (monic term omitted).
    pub fn eisenstein_coefficients(&self) -> &[BigInt] {
        &self.0.eisenstein
    }

    fn zero_coords(&self) -> Vec<Vec<BigInt>> {
        vec![vec![BigInt::zero(); self.0.f]; self.0.e]
    }

    fn element(&self, s: Vec<Vec<BigInt>>, shift: i64, prec: i64) -> LocalElement {
        LocalElement { field: self.clone(), s, shift, prec: prec.min(self.0.cap) }
    }

    pub fn zero(&self) -> LocalElement {
        self.element(self.zero_coords(), 0, self.0.cap)
    }

    pub fn one(&self) -> LocalElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> LocalElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> LocalElement {
        let mut s = self.zero_coords();
        s[0][0] = n.mod_floor(&self.0.modulus);
        self.element(s, 0, self.0.cap)
    }

    pub fn uniformizer(&self) -> LocalElement {
        if self.0.e == 1 {
            return self.from_int(self.0.ell as i64);
        }
        let mut s = self.zero_coords();
        s[1][0] = BigInt::one();
        self.element(s, 0, self.0.cap)
    }

    /// Embeds a rational number; l-adic denominators become negative shifts.
    pub fn from_rational(&self, r: &Rational) -> LocalElement {
        if r.is_zero() {
            return self.zero();
        }
        let ell = self.0.ell;
        let k = int_val(r.numer(), ell) - int_val(r.denom(), ell);
        let lb = BigInt::from(ell);
        let unit_num = r.numer() / lb.pow(int_val(r.numer(), ell) as u32);
        let unit_den = r.denom() / lb.pow(int_val(r.denom(), ell) as u32);
        let den_inv = unit_den
            .extended_gcd(&self.0.modulus)
            .x
            .mod_floor(&self.0.modulus);
        let unit = self.from_bigint(&(unit_num * den_inv));
        if k >= 0 {
            return &unit * &self.from_bigint(&lb.pow(k as u32));
        }
        // l^{-1} = pi^{-e} eps
        let eps = self.element(self.0.eps.clone(), 0, self.0.cap);
        let mut out = unit;
        for _ in 0..(-k) {
            out = &out * &eps;
        }
        out.shift -= self.0.e as i64 * (-k);
        out
    }

    /// Least nonnegative lift of a residue-field element.
    pub fn lift(&self, x: &FqElement) -> LocalElement {
        let mut s = self.zero_coords();
        for (slot, &c) in s[0].iter_mut().zip(x.coords()) {
            *slot = BigInt::from(c);
        }
        self.element(s, 0, self.0.cap)
    }

    // unramified-ring helpers

    fn u_add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x + y).mod_floor(&self.0.modulus)).collect()
    }

    fn u_sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(&self.0.modulus)).collect()
    }

    fn u_scale(&self, a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        a.iter().map(|x| (x * k).mod_floor(&self.0.modulus)).collect()
    }

    fn u_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let f = self.0.f;
        if f == 1 {
            return vec![(&a[0] * &b[0]).mod_floor(&self.0.modulus)];
        }
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let h = &self.0.unram_modulus;
        for i in (f..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..f {
                let t = &c * &h[j];
                prod[i - f + j] -= t;
            }
        }
        prod.truncate(f);
        prod.into_iter().map(|x| x.mod_floor(&self.0.modulus)).collect()
    }

    /// v_l of an unramified coordinate vector, `None` when zero mod l^M.
    fn u_val(&self, a: &[BigInt]) -> Option<i64> {
        a.iter().filter(|x| !x.is_zero()).map(|x| int_val(x, self.0.ell)).min()
    }

    /// Product of integral parts, reduced by the Eisenstein relation.
    fn s_mul(&self, a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let e = self.0.e;
        let f = self.0.f;
        if e == 1 {
            return vec![self.u_mul(&a[0], &b[0])];
        }
        let mut prod = vec![vec![BigInt::zero(); f]; 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            if x.iter().all(|c| c.is_zero()) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.u_mul(x, y);
                prod[i + j] = self.u_add(&prod[i + j], &t);
            }
        }
        let g = &self.0.eisenstein;
        for i in (e..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[i], vec![BigInt::zero(); f]);
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            // pi^i = pi^{i-e} * (-sum g_j pi^j)
            for (j, gj) in g.iter().enumerate() {
                if gj.is_zero() {
                    continue;
                }
                let t = self.u_scale(&c, gj);
                prod[i - e + j] = self.u_sub(&prod[i - e + j], &t);
            }
        }
        prod.truncate(e);
        prod
    }

    /// Multiplies an integral part by pi^k, k >= 0.
    fn s_mul_pi_pow(&self, a: &[Vec<BigInt>], k: i64) -> Vec<Vec<BigInt>> {
        if k == 0 {
            return a.to_vec();
        }
        let pi_k = self.uniformizer().pow_u64(k as u64);
        debug_assert_eq!(pi_k.shift, 0);
        self.s_mul(a, &pi_k.s)
    }

    /// pi-adic valuation of an integral part from its coordinates: the terms
    /// c_i pi^i have distinct valuations e * v_l(c_i) + i.
    fn s_val(&self, a: &[Vec<BigInt>]) -> Option<(i64, usize)> {
        let e = self.0.e as i64;
        a.iter()
            .enumerate()
            .filter_map(|(i, c)| self.u_val(c).map(|v| (e * v + i as i64, i)))
            .min()
    }
}

fn unit_coords(f: usize, c: BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); f];
    v[0] = c;
    v
}

/// Element of a `LocalField`: `pi^shift * s`, known modulo `pi^(shift + prec)`.
#[derive(Clone)]
pub struct LocalElement {
    field: LocalField,
    s: Vec<Vec<BigInt>>,
    shift: i64,
    prec: i64,
}

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation() {
            Ok(v) => write!(f, "LocalElement(val {v}, known mod pi^{})", self.absolute_precision()),
            Err(_) => write!(f, "LocalElement(O(pi^{}))", self.absolute_precision()),
        }
    }
}

impl LocalElement {
    pub fn field(&self) -> &LocalField {
        &self.field
    }

    /// The element is known modulo pi^(this).
    pub fn absolute_precision(&self) -> i64 {
        self.shift + self.prec
    }

    fn raw_val(&self) -> Option<i64> {
        self.field.s_val(&self.s).map(|(v, _)| v).filter(|&v| v < self.prec)
    }

    /// pi-adic valuation; errors when every known digit vanishes.
    pub fn valuation(&self) -> Result<i64, LocalError> {
        self.raw_val()
            .map(|v| v + self.shift)
            .ok_or(LocalError::IndistinguishableFromZero)
    }

    /// Decides val >= k; only fails when the known digits cannot tell.
    pub fn val_at_least(&self, k: i64) -> Result<bool, LocalError> {
        match self.raw_val() {
            Some(v) => Ok(v + self.shift >= k),
            None if self.absolute_precision() >= k => Ok(true),
            None => Err(LocalError::IndistinguishableFromZero),
        }
    }

    /// True when pi divides the element.
    pub fn divisible_by_pi(&self) -> Result<bool, LocalError> {
        self.val_at_least(1)
    }

    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.raw_val().is_none()
    }

    /// Valuation and the residue of x * pi^(-val).
    pub fn val_residue(&self) -> Result<(i64, FqElement), LocalError> {
        let field = &self.field;
        let (v, i) = field.s_val(&self.s).filter(|&(v, _)| v < self.prec).ok_or(LocalError::IndistinguishableFromZero)?;
        let c = &self.s[i];
        let k = field.u_val(c).unwrap();
        let lk = BigInt::from(field.0.ell).pow(k as u32);
        let coords: Vec<u64> = c
            .iter()
            .map(|x| (x / &lk).mod_floor(&BigInt::from(field.0.ell)).to_u64().unwrap())
            .collect();
        let unit = field.0.residue.from_coords(&coords)?;
        let res = unit * field.0.rho.pow_u64(k as u64);
        Ok((v + self.shift, res))
    }

    /// Image in the residue field; requires an integral element.
    pub fn reduce(&self) -> Result<FqElement, LocalError> {
        match self.val_residue() {
            Ok((v, r)) if v == 0 => Ok(r),
            Ok((v, _)) if v > 0 => Ok(self.field.0.residue.zero()),
            Ok(_) => Err(LocalError::NotIntegral),
            Err(_) if self.absolute_precision() >= 1 => Ok(self.field.0.residue.zero()),
            Err(err) => Err(err),
        }
    }

    /// Multiplication by pi^(-k); exact.
    pub fn div_pi_pow(&self, k: i64) -> LocalElement {
        let mut out = self.clone();
        out.shift -= k;
        out
    }

    pub fn mul_pi_pow(&self, k: i64) -> LocalElement {
        self.div_pi_pow(-k)
    }

    pub fn pow_u64(&self, mut n: u64) -> LocalElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> LocalElement {
        self * &self.field.from_int(k)
    }

    /// Digits d_j (least nonnegative residue representatives) with
    /// x = sum d_j pi^j, for j from val(x) up to the known precision.
    pub fn digits(&self) -> Result<(i64, Vec<FqElement>), LocalError> {
        let start = match self.valuation() {
            Ok(v) => v,
            Err(_) => return Ok((self.absolute_precision(), Vec::new())),
        };
        let mut x = self.div_pi_pow(start);
        let mut out = Vec::new();
        while x.absolute_precision() > 0 {
            let d = x.reduce()?;
            x = (&x - &self.field.lift(&d)).div_pi_pow(1);
            out.push(d);
        }
        Ok((start, out))
    }

    fn aligned(&self, other: &LocalElement) -> (Vec<Vec<BigInt>>, i64, Vec<Vec<BigInt>>, i64, i64) {
        let shift = self.shift.min(other.shift);
        let a = self.field.s_mul_pi_pow(&self.s, self.shift - shift);
        let b = self.field.s_mul_pi_pow(&other.s, other.shift - shift);
        (a, self.prec + self.shift - shift, b, other.prec + other.shift - shift, shift)
    }
}

impl Add for &LocalElement {
    type Output = LocalElement;
    fn add(self, rhs: &LocalElement) -> LocalElement {
        let (a, pa, b, pb, shift) = self.aligned(rhs);
        let s = a.iter().zip(&b).map(|(x, y)| self.field.u_add(x, y)).collect();
        self.field.element(s, shift, pa.min(pb))
    }
}

impl Sub for &LocalElement {
    type Output = LocalElement;
    fn sub(self, rhs: &LocalElement) -> LocalElement {
        let (a, pa, b, pb, shift) = self.aligned(rhs);
        let s = a.iter().zip(&b).map(|(x, y)| self.field.u_sub(x, y)).collect();
        self.field.element(s, shift, pa.min(pb))
    }
}

impl Mul for &LocalElement {
    type Output = LocalElement;
    fn mul(self, rhs: &LocalElement) -> LocalElement {
        let va = self.raw_val().unwrap_or(self.prec);
        let vb = rhs.raw_val().unwrap_or(rhs.prec);
        let prec = (self.prec + vb).min(rhs.prec + va);
        let s = self.field.s_mul(&self.s, &rhs.s);
        self.field.element(s, self.shift + rhs.shift, prec)
    }
}

impl Neg for &LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        &self.field.zero().with_prec_of(self) - self
    }
}

impl LocalElement {
    fn with_prec_of(mut self, other: &LocalElement) -> LocalElement {
        self.shift = other.shift;
        self
    }
}

macro_rules! owned_local_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for LocalElement {
            type Output = LocalElement;
            fn $m(self, rhs: LocalElement) -> LocalElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LocalElement> for LocalElement {
            type Output = LocalElement;
            fn $m(self, rhs: &LocalElement) -> LocalElement {
                (&self).$m(rhs)
            }
        }
    };
}
owned_local_ops!(Add, add);
owned_local_ops!(Sub, sub);
owned_local_ops!(Mul, mul);

impl Neg for LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        -&self
    }
}

/// `local_val_residue`: pi-adic valuation with the residue of the unit part.
pub fn local_val_residue(x: &LocalElement) -> Result<(Valuation, FqElement), LocalError> {
    let (v, r) = x.val_residue()?;
    Ok((Valuation::Finite(v), r))
}

/// Default working precision N = e (v_l(Delta) + 12) + 24.
pub fn default_precision(e: usize, disc_valuation: i64) -> i64 {
    e as i64 * (disc_valuation.max(0) + 12) + 24
}
