use serde::Serialize;

use super::{CurveError, WeierstrassModel};
use crate::arith::poly::Coefficient;
use crate::arith::rational::Rational;

/// The point at infinity or an affine point (x, y).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CurvePoint<T> {
    Infinity,
    Affine(T, T),
}

fn small<T: Coefficient>(like: &T, n: u32) -> T {
    let one = like.one_like();
    (0..n).fold(like.zero_like(), |acc, _| acc.add_ref(&one))
}

/// Chord-tangent group law on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
pub struct GroupLaw<'a, T: Coefficient> {
    a: &'a [T; 5],
}

impl<'a, T: Coefficient> GroupLaw<'a, T> {
    pub fn new(a: &'a [T; 5]) -> Self {
        GroupLaw { a }
    }

    pub fn contains(&self, p: &CurvePoint<T>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => {
                let [a1, a2, a3, a4, a6] = self.a;
                let lhs = y.mul_ref(y).add_ref(&a1.mul_ref(x).mul_ref(y)).add_ref(&a3.mul_ref(y));
                let rhs = x
                    .mul_ref(x)
                    .mul_ref(x)
                    .add_ref(&a2.mul_ref(x).mul_ref(x))
                    .add_ref(&a4.mul_ref(x))
                    .add_ref(a6);
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, p: &CurvePoint<T>) -> CurvePoint<T> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                let [a1, _, a3, _, _] = self.a;
                CurvePoint::Affine(x.clone(), y.neg_ref().sub_ref(&a1.mul_ref(x)).sub_ref(a3))
            }
        }
    }

    pub fn add(&self, p: &CurvePoint<T>, q: &CurvePoint<T>) -> CurvePoint<T> {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = self.a;
        if x1 == x2 && y1.add_ref(y2).add_ref(&a1.mul_ref(x2)).add_ref(a3).is_zero_coeff() {
            return CurvePoint::Infinity;
        }
        let (lambda, nu) = if x1 != x2 {
            let dx = x2.sub_ref(x1).inv().expect("distinct x");
            let lambda = y2.sub_ref(y1).mul_ref(&dx);
            let nu = y1.mul_ref(x2).sub_ref(&y2.mul_ref(x1)).mul_ref(&dx);
            (lambda, nu)
        } else {
            let denom = small(x1, 2).mul_ref(y1).add_ref(&a1.mul_ref(x1)).add_ref(a3);
            let inv = denom.inv().expect("non-2-torsion doubling");
            let x1sq = x1.mul_ref(x1);
            let lambda = small(x1, 3)
                .mul_ref(&x1sq)
                .add_ref(&small(x1, 2).mul_ref(a2).mul_ref(x1))
                .add_ref(a4)
                .sub_ref(&a1.mul_ref(y1))
                .mul_ref(&inv);
            let nu = x1sq
                .mul_ref(x1)
                .neg_ref()
                .add_ref(&a4.mul_ref(x1))
                .add_ref(&small(x1, 2).mul_ref(a6))
                .sub_ref(&a3.mul_ref(y1))
                .mul_ref(&inv);
            (lambda, nu)
        };
        let x3 = lambda.mul_ref(&lambda).add_ref(&a1.mul_ref(&lambda)).sub_ref(a2).sub_ref(x1).sub_ref(x2);
        let y3 = lambda.add_ref(a1).mul_ref(&x3).neg_ref().sub_ref(&nu).sub_ref(a3);
        CurvePoint::Affine(x3, y3)
    }

    pub fn mul(&self, p: &CurvePoint<T>, mut n: u64) -> CurvePoint<T> {
        let mut acc = CurvePoint::Infinity;
        let mut base = p.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Smallest n <= bound with nP = O, by repeated addition.
    pub fn order(&self, p: &CurvePoint<T>, bound: u64) -> Option<u64> {
        let mut q = p.clone();
        for n in 1..=bound {
            if q == CurvePoint::Infinity {
                return Some(n);
            }
            q = self.add(&q, p);
        }
        None
    }
}

/// Order of a rational point, if at most `bound`.
pub fn point_order(model: &WeierstrassModel, p: &CurvePoint<Rational>, bound: u64) -> Result<Option<u64>, CurveError> {
    if bound < 1 {
        return Err(CurveError::BadBound);
    }
    let law = GroupLaw::new(model.coefficients());
    if !law.contains(p) {
        return Err(CurveError::NotOnCurve);
    }
    Ok(law.order(p, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn order_examples() {
        let e2 = WeierstrassModel::from_ints([-1, 2, 2, 0, 0]).unwrap();
        let origin = CurvePoint::Affine(rat(0), rat(0));
        assert_eq!(point_order(&e2, &origin, 12).unwrap(), Some(7));
        assert_eq!(point_order(&e2, &CurvePoint::Infinity, 12).unwrap(), Some(1));
        let e = WeierstrassModel::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(point_order(&e, &CurvePoint::Affine(rat(2), rat(3)), 12).unwrap(), Some(6));
        assert_eq!(point_order(&e, &CurvePoint::Affine(rat(2), rat(3)), 5).unwrap(), None);
        assert!(matches!(point_order(&e, &CurvePoint::Affine(rat(1), rat(1)), 12), Err(CurveError::NotOnCurve)));
    }

    #[test]
    fn multiples_match_repeated_addition() {
        let e2 = WeierstrassModel::from_ints([-1, 2, 2, 0, 0]).unwrap();
        let law = GroupLaw::new(e2.coefficients());
        let p = CurvePoint::Affine(rat(0), rat(0));
        let mut q = CurvePoint::Infinity;
        for n in 0..10 {
            assert_eq!(law.mul(&p, n), q);
            assert!(law.contains(&q));
            q = law.add(&q, &p);
        }
        assert_eq!(law.add(&p, &law.neg(&p)), CurvePoint::Infinity);
    }
}
