use num_bigint::BigInt;
use num_traits::Signed;

use super::{CurveError, FqModel};
use crate::arith::primes::pow_mod;

/// Largest field size counted by enumeration.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// #E(F_q) including the point at infinity, by enumerating x and solving the
/// quadratic in y over each fiber.
pub fn count_points(model: &FqModel) -> Result<u64, CurveError> {
    let field = model.field();
    let q = field.order_u64().filter(|&q| q <= ENUMERATION_CAP).ok_or(CurveError::FieldTooLarge)?;
    if !model.is_nonsingular() {
        return Err(CurveError::Singular);
    }
    let l = field.characteristic();
    if field.degree() == 1 {
        let a: Vec<u64> = model.a.iter().map(|c| c.coords()[0]).collect();
        return Ok(count_prime_field(l, [a[0], a[1], a[2], a[3], a[4]]));
    }
    let [a1, a2, a3, a4, a6] = &model.a;
    let four = field.from_int(4);
    let mut total = 1u64;
    for x in field.elements() {
        let b = a1 * &x + a3;
        let r = ((&x + a2) * &x + a4) * &x + a6;
        total += if l == 2 {
            // y^2 + b y = r: one root when b = 0, else two or none by the trace of r/b^2
            if b.is_zero() {
                1
            } else {
                let binv = b.inverse().unwrap();
                if (&r * &binv * &binv).trace() == 0 {
                    2
                } else {
                    0
                }
            }
        } else {
            let disc = &b * &b + &four * &r;
            if disc.is_zero() {
                1
            } else if disc.is_square() {
                2
            } else {
                0
            }
        };
    }
    debug_assert!(total <= q + 1 + 2 * (q as f64).sqrt() as u64 + 1);
    Ok(total)
}

fn count_prime_field(l: u64, a: [u64; 5]) -> u64 {
    let [a1, a2, a3, a4, a6] = a;
    let m = |x: u64, y: u64| (x as u128 * y as u128 % l as u128) as u64;
    let mut total = 1u64;
    if l == 2 {
        for x in 0..2 {
            for y in 0..2 {
                let lhs = (m(y, y) + m(m(a1, x), y) + m(a3, y)) % 2;
                let rhs = (m(m(x, x), x) + m(m(a2, x), x) + m(a4, x) + a6) % 2;
                total += (lhs == rhs) as u64;
            }
        }
        return total;
    }
    let half = (l - 1) / 2;
    for x in 0..l {
        let b = (m(a1, x) + a3) % l;
        let r = (m((m((x + a2) % l, x) + a4) % l, x) + a6) % l;
        let disc = (m(b, b) + m(4 % l, r)) % l;
        total += if disc == 0 {
            1
        } else if pow_mod(disc, half, l) == 1 {
            2
        } else {
            0
        };
    }
    total
}

/// #E(F_{q^k}) from N1 = #E(F_q), via a_k = a a_{k-1} - q a_{k-2}.
pub fn extension_count(n1: &BigInt, q: &BigInt, k: u32) -> Result<BigInt, CurveError> {
    if k < 1 {
        return Err(CurveError::BadBound);
    }
    let a: BigInt = q + 1 - n1;
    if &a * &a > q * 4 {
        return Err(CurveError::OutsideHasse);
    }
    let (mut prev, mut cur) = (BigInt::from(2), a.clone());
    for _ in 1..k {
        let next = &a * &cur - q * &prev;
        prev = cur;
        cur = next;
    }
    Ok(q.pow(k) + 1 - cur)
}

/// |q + 1 - N| <= 2 sqrt(q), tested exactly as (q + 1 - N)^2 <= 4q.
pub fn within_hasse(n: &BigInt, q: &BigInt) -> bool {
    let a: BigInt = q + 1 - n;
    !n.is_negative() && &a * &a <= q * 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fq::FqField;
    use crate::curves::WeierstrassModel;

    fn brute(model: &FqModel) -> u64 {
        let field = model.field();
        let [a1, a2, a3, a4, a6] = &model.a;
        let mut n = 1;
        for x in field.elements() {
            for y in field.elements() {
                let lhs = &y * &y + a1 * &x * &y + a3 * &y;
                let rhs = &x * &x * &x + a2 * &x * &x + a4 * &x + a6;
                n += (lhs == rhs) as u64;
            }
        }
        n
    }

    #[test]
    fn count_examples() {
        let e = WeierstrassModel::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(count_points(&e.reduce(&FqField::new(5, 1).unwrap()).unwrap()).unwrap(), 6);
        let ss = WeierstrassModel::from_ints([0, 0, 1, 0, 0]).unwrap();
        assert_eq!(count_points(&ss.reduce(&FqField::new(2, 1).unwrap()).unwrap()).unwrap(), 3);
    }

    #[test]
    fn generic_path_matches_brute_force() {
        let curves = [[1, 0, 0, -1, -1], [-1, 2, 2, 0, 0], [0, 0, 1, 0, 0], [1, 1, 1, 1, 1], [0, 0, 0, 1, 0]];
        for (l, f) in [(2, 2), (2, 3), (3, 2), (5, 2), (7, 2), (13, 2)] {
            let field = FqField::new(l, f).unwrap();
            for c in curves {
                let model = WeierstrassModel::from_ints(c).unwrap().reduce(&field).unwrap();
                if !model.is_nonsingular() {
                    continue;
                }
                assert_eq!(count_points(&model).unwrap(), brute(&model), "{c:?} over F_{l}^{f}");
            }
        }
    }

    #[test]
    fn extension_examples() {
        assert_eq!(extension_count(&14.into(), &13.into(), 2).unwrap(), BigInt::from(196));
        assert_eq!(extension_count(&14.into(), &13.into(), 1).unwrap(), BigInt::from(14));
        // a = 0: N_2 = q^2 + 1 + 2q
        assert_eq!(extension_count(&8.into(), &7.into(), 2).unwrap(), BigInt::from(64));
        assert!(matches!(extension_count(&30.into(), &13.into(), 2), Err(CurveError::OutsideHasse)));
    }

    #[test]
    fn singular_and_capped() {
        let e = WeierstrassModel::from_ints([1, 0, 0, -1, -1]).unwrap();
        let r = e.reduce(&FqField::new(7, 1).unwrap()).unwrap();
        assert!(matches!(count_points(&r), Err(CurveError::Singular)));
        let big = e.reduce(&FqField::new(5, 11).unwrap()).unwrap();
        assert!(matches!(count_points(&big), Err(CurveError::FieldTooLarge)));
    }
}
