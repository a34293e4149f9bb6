use std::collections::HashMap;

use super::{b_invariants, CurveError, WeierstrassModel};
use crate::arith::poly::RationalPoly;
use crate::arith::rational::Rational;

/// Builds the x-only division polynomials f_n, where f_n = psi_n for odd n and
/// f_n = psi_n / psi_2 for even n, so every f_n lies in Q[x].
struct DivisionTower {
    f: HashMap<usize, RationalPoly>,
    /// psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, squared.
    psi2_sq_sq: RationalPoly,
}

impl DivisionTower {
    fn new(model: &WeierstrassModel) -> Self {
        let [b2, b4, b6, b8] = b_invariants(model.coefficients());
        let r = |n: i64| Rational::from_integer(n.into());
        let psi2_sq = RationalPoly::from_rationals(vec![b6.clone(), r(2) * &b4, b2.clone(), r(4)]);
        let f3 = RationalPoly::from_rationals(vec![
            b8.clone(),
            r(3) * &b6,
            r(3) * &b4,
            b2.clone(),
            r(3),
        ]);
        let f4 = RationalPoly::from_rationals(vec![
            &b4 * &b8 - &b6 * &b6,
            &b2 * &b8 - &b4 * &b6,
            r(10) * &b8,
            r(10) * &b6,
            r(5) * &b4,
            b2.clone(),
            r(2),
        ]);
        let mut f = HashMap::new();
        f.insert(0, RationalPoly::from_ints(&[]));
        f.insert(1, RationalPoly::from_ints(&[1]));
        f.insert(2, RationalPoly::from_ints(&[1]));
        f.insert(3, f3);
        f.insert(4, f4);
        DivisionTower { f, psi2_sq_sq: &psi2_sq * &psi2_sq }
    }

    fn get(&mut self, n: usize) -> RationalPoly {
        if let Some(p) = self.f.get(&n) {
            return p.clone();
        }
        let m = n / 2;
        let out = if n % 2 == 1 {
            let (a, b) = (self.get(m + 2), self.get(m));
            let (c, d) = (self.get(m - 1), self.get(m + 1));
            let first = &a * &b.pow(3);
            let second = &c * &d.pow(3);
            if m % 2 == 0 {
                &(&self.psi2_sq_sq * &first) - &second
            } else {
                &first - &(&self.psi2_sq_sq * &second)
            }
        } else {
            let fm = self.get(m);
            let (a, b) = (self.get(m + 2), self.get(m - 1));
            let (c, d) = (self.get(m - 2), self.get(m + 1));
            &fm * &(&(&a * &b.pow(2)) - &(&c * &d.pow(2)))
        };
        self.f.insert(n, out.clone());
        out
    }
}

/// psi_n in Q[x] for odd n >= 1; degree (n^2 - 1)/2.
pub fn division_polynomial(model: &WeierstrassModel, n: usize) -> Result<RationalPoly, CurveError> {
    if n == 0 || n % 2 == 0 {
        return Err(CurveError::EvenDivisionIndex(n));
    }
    Ok(DivisionTower::new(model).get(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fq::FqField;
    use crate::arith::rational::rat;
    use crate::curves::point::{CurvePoint, GroupLaw};

    #[test]
    fn small_cases() {
        let e = WeierstrassModel::from_ints([0, 0, 0, 2, 3]).unwrap();
        assert_eq!(division_polynomial(&e, 1).unwrap(), RationalPoly::from_ints(&[1]));
        // 3x^4 + 6a x^2 + 12b x - a^2 with a = 2, b = 3
        assert_eq!(division_polynomial(&e, 3).unwrap(), RationalPoly::from_ints(&[-4, 36, 12, 0, 3]));
        let p7 = division_polynomial(&e, 7).unwrap();
        assert_eq!(p7.degree(), Some(24));
        assert!(matches!(division_polynomial(&e, 4), Err(CurveError::EvenDivisionIndex(4))));
    }

    #[test]
    fn degrees_up_to_thirteen() {
        let e = WeierstrassModel::from_ints([1, 0, 0, -1, -1]).unwrap();
        for n in (1..=13).step_by(2) {
            let p = division_polynomial(&e, n).unwrap();
            assert_eq!(p.degree(), Some((n * n - 1) / 2), "n = {n}");
            assert_eq!(p.leading(), Some(&rat(n as i64)));
        }
    }

    /// Independent check: over F_l, psi_n vanishes at x(P) exactly for the
    /// affine points P with nP = O, found by enumerating the curve.
    #[test]
    fn vanishes_on_torsion_by_enumeration() {
        let curves = [[1, 0, 0, -1, -1], [-1, 2, 2, 0, 0], [0, 0, 0, 0, 1], [0, 1, 1, -2, 5]];
        for c in curves {
            let e = WeierstrassModel::from_ints(c).unwrap();
            for n in [3usize, 5, 7] {
                let psi = division_polynomial(&e, n).unwrap();
                for l in [11u64, 17, 29, 43] {
                    let field = FqField::new(l, 1).unwrap();
                    let red = e.reduce(&field).unwrap();
                    if !red.is_nonsingular() {
                        continue;
                    }
                    let law = GroupLaw::new(&red.a);
                    let psi_mod: Vec<_> = psi
                        .coeffs()
                        .iter()
                        .map(|r| {
                            let num = field.from_int((r.numer() % l as i64).try_into().unwrap());
                            let den = field.from_int((r.denom() % l as i64).try_into().unwrap());
                            num * den.inverse().unwrap()
                        })
                        .collect();
                    for x in field.elements() {
                        for y in field.elements() {
                            let p = CurvePoint::Affine(x.clone(), y.clone());
                            if !law.contains(&p) {
                                continue;
                            }
                            let killed = law.mul(&p, n as u64) == CurvePoint::Infinity;
                            let value = psi_mod.iter().rev().fold(field.zero(), |acc, c| acc * &x + c);
                            assert_eq!(killed, value.is_zero(), "{c:?} n={n} l={l} x={x}");
                        }
                    }
                }
            }
        }
    }
}
