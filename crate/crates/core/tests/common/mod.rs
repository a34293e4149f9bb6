#![allow(dead_code)]

use euler_selmer::arith::rational::{vp, Rational, Valuation};
use euler_selmer::curves::{FqModel, WeierstrassModel};
use euler_selmer::local::Ramification;
use euler_selmer::tate::{KodairaType, LocalReductionData, PlaceDescriptor};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Nonsingular integral model with coefficients in [-bound, bound].
pub fn random_curve(rng: &mut StdRng, bound: i64) -> WeierstrassModel {
    loop {
        let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        if let Ok(m) = WeierstrassModel::from_ints(a) {
            return m;
        }
    }
}

fn val(r: &Rational, l: u64) -> Option<i64> {
    match vp(r, l).unwrap() {
        Valuation::Finite(v) => Some(v),
        Valuation::PlusInfinity => None,
    }
}

/// Reduction type over a tamely ramified extension of degree e of an
/// unramified extension of Q_l, l >= 5, from valuations of c4, c6 and the
/// discriminant alone. Returns (type, minimal v(disc), conductor exponent).
pub fn tame_oracle(model: &WeierstrassModel, l: u64, e: i64) -> (KodairaType, i64, i64) {
    assert!(l >= 5);
    let inv = model.invariants();
    let mut v4 = val(&inv.c4, l).map(|v| v * e);
    let mut v6 = val(&inv.c6, l).map(|v| v * e);
    let mut vd = val(&inv.discriminant, l).unwrap() * e;
    let big = |v: Option<i64>, k: i64| v.map_or(true, |v| v >= k);
    while big(v4, 4) && big(v6, 6) && vd >= 12 {
        v4 = v4.map(|v| v - 4);
        v6 = v6.map(|v| v - 6);
        vd -= 12;
    }
    // v(j) = 3 v(c4) - v(disc)
    let pot_good = v4.map_or(true, |v| 3 * v >= vd);
    if vd == 0 {
        return (KodairaType::I(0), 0, 0);
    }
    if v4 == Some(0) {
        return (KodairaType::I(vd as u32), vd, 1);
    }
    let t = if pot_good {
        match vd {
            2 => KodairaType::II,
            3 => KodairaType::III,
            4 => KodairaType::IV,
            6 => KodairaType::IStar(0),
            8 => KodairaType::IVStar,
            9 => KodairaType::IIIStar,
            10 => KodairaType::IIStar,
            other => panic!("impossible minimal valuation {other}"),
        }
    } else {
        KodairaType::IStar((vd - 6) as u32)
    };
    (t, vd, 2)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn place(ell: u64, e: usize, f: usize, ramification: Ramification) -> PlaceDescriptor {
    PlaceDescriptor { ell, e, f, ramification }
}

pub fn unram(ell: u64, f: usize) -> PlaceDescriptor {
    place(ell, 1, f, Ramification::Unramified)
}

pub fn cyclo(ell: u64, level: u32, e: usize) -> PlaceDescriptor {
    place(ell, e, 1, Ramification::Cyclotomic { level })
}

pub fn same_reduction(a: &LocalReductionData, b: &LocalReductionData) -> bool {
    a.kodaira == b.kodaira
        && a.c_v == b.c_v
        && a.v_min_delta == b.v_min_delta
        && a.conductor_exponent == b.conductor_exponent
        && a.reduction_class == b.reduction_class
        && a.n_v == b.n_v
        && a.l_at_1 == b.l_at_1
        && a.potentially_good == b.potentially_good
}

/// Projective point count by enumerating every affine pair.
pub fn naive_count(model: &FqModel) -> u64 {
    let k = model.field();
    let [a1, a2, a3, a4, a6] = &model.a;
    let mut n = 1;
    for x in k.elements() {
        let rhs = &(&(&(&x + a2) * &x) + a4) * &x + a6;
        for y in k.elements() {
            let lhs = &(&y + &(a1 * &x)) * &y + &(a3 * &y);
            if lhs == rhs {
                n += 1;
            }
        }
    }
    n
}
