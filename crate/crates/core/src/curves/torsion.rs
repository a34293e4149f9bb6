use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::count::{count_points, extension_count};
use super::division::division_polynomial;
use super::point::{CurvePoint, GroupLaw};
use super::{CurveError, WeierstrassModel};
use crate::arith::fq::FqField;
use crate::arith::poly::rational_roots;
use crate::arith::primes::is_prime;
use crate::arith::rational::{int_val, rational_sqrt_exact, Rational};
use crate::cyclotomic::splitting;

/// Bounds on #E(F)(p): `lower` is certified, `upper` is a divisibility bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionEstimate {
    pub p: u64,
    #[serde(with = "bigint_str")]
    pub lower: BigInt,
    #[serde(with = "bigint_str")]
    pub upper: BigInt,
    pub exact: bool,
    /// `lower` came from a user certificate rather than a rational point search.
    pub certified: bool,
    /// Primes whose reductions produced the upper bound.
    pub sampled_primes: Vec<u64>,
}

impl TorsionEstimate {
    pub fn lower_exponent(&self) -> i64 {
        int_val(&self.lower, self.p)
    }

    pub fn upper_exponent(&self) -> i64 {
        int_val(&self.upper, self.p)
    }
}

/// Rational points whose x-coordinate is a root of `psi` and which have order
/// exactly `n`.
fn points_of_order(model: &WeierstrassModel, n: usize) -> Result<Vec<CurvePoint<Rational>>, CurveError> {
    let psi = division_polynomial(model, n)?;
    let law = GroupLaw::new(model.coefficients());
    let [a1, a2, a3, a4, a6] = model.coefficients();
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let mut out = Vec::new();
    for x in rational_roots(&psi).map_err(CurveError::Arith)? {
        let b = a1 * &x + a3;
        let r = ((&x + a2) * &x + a4) * &x + a6;
        let disc = &b * &b + &four * &r;
        let Some(s) = rational_sqrt_exact(&disc) else { continue };
        let mut ys = vec![(-&b + &s) / &two];
        if s != Rational::from_integer(0.into()) {
            ys.push((-&b - &s) / &two);
        }
        for y in ys {
            let p = CurvePoint::Affine(x.clone(), y);
            if law.order(&p, n as u64) == Some(n as u64) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Order of the p-primary part of E(Q) for odd primes p.
///
/// E(Q)(p) is cyclic for odd p, and for p >= 5 it has order at most p, so the
/// search stops at p; for p = 3 it also looks for points of order 9.
pub fn rational_p_torsion_order(model: &WeierstrassModel, p: u64) -> Result<BigInt, CurveError> {
    if !is_prime(p) || p == 2 {
        return Err(CurveError::UnsupportedPrime(p));
    }
    let model = model.integral_model();
    let order_p = points_of_order(&model, p as usize)?;
    if order_p.is_empty() {
        return Ok(BigInt::one());
    }
    if p == 3 && !points_of_order(&model, 9)?.is_empty() {
        return Ok(BigInt::from(9));
    }
    Ok(BigInt::from(p))
}

/// Upper bound on #E(Q(mu_m))(p) from reductions at good primes l not dividing
/// p * Delta; torsion prime to l injects into E(k_w) with k_w = F_{l^f}.
pub fn torsion_bound_over_f(
    model: &WeierstrassModel,
    p: u64,
    m: u64,
    samples: usize,
    certificate: Option<&BigInt>,
) -> Result<TorsionEstimate, CurveError> {
    const PRIME_SEARCH_LIMIT: u64 = 1_000_000;
    if !is_prime(p) || p == 2 {
        return Err(CurveError::UnsupportedPrime(p));
    }
    let model = model.integral_model();
    let disc = model.discriminant().numer().clone();
    let mut exponent: Option<i64> = None;
    let mut used = Vec::new();
    let mut l = 1u64;
    while used.len() < samples {
        l += 1;
        if l > PRIME_SEARCH_LIMIT {
            return Err(CurveError::NotEnoughPrimes { wanted: samples, found: used.len() });
        }
        if !is_prime(l) || l == p || (&disc % l).to_u64() == Some(0) {
            continue;
        }
        let split = splitting(l, m).map_err(CurveError::Arith)?;
        let field = FqField::new(l, 1).map_err(CurveError::Arith)?;
        let n1 = count_points(&model.reduce(&field)?)?;
        let nf = extension_count(&BigInt::from(n1), &BigInt::from(l), split.f as u32)?;
        let v = int_val(&nf, p);
        exponent = Some(exponent.map_or(v, |e| e.min(v)));
        used.push(l);
    }
    let upper = BigInt::from(p).pow(exponent.unwrap_or(0) as u32);
    let (lower, certified) = match certificate {
        Some(c) => {
            if int_val(c, p) < 0 || c != &BigInt::from(p).pow(int_val(c, p) as u32) {
                return Err(CurveError::BadCertificate(c.to_string()));
            }
            (c.clone(), true)
        }
        None => (rational_p_torsion_order(&model, p)?, false),
    };
    if !upper.is_multiple_of(&lower) {
        return Err(CurveError::BadCertificate(format!(
            "torsion {lower} does not divide the reduction bound {upper}"
        )));
    }
    Ok(TorsionEstimate { p, exact: lower == upper, lower, upper, certified, sampled_primes: used })
}

pub(crate) mod bigint_str {
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }
}
