mod common;

use euler_selmer::arith::fq::FqField;
use euler_selmer::arith::poly::{rational_roots, RationalPoly};
use euler_selmer::arith::rational::{ratio, vp, Rational, Valuation};
use euler_selmer::curves::{count_points, extension_count, rational_p_torsion_order, within_hasse, WeierstrassModel};
use euler_selmer::cyclotomic::{field_degree, splitting};
use euler_selmer::local::LocalField;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn nonzero_ratio() -> impl Strategy<Value = Rational> {
    (-5000i64..5000, 1i64..5000).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| ratio(n, d)))
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
}

fn model_strategy(bound: i64) -> impl Strategy<Value = WeierstrassModel> {
    prop::array::uniform5(-bound..=bound).prop_filter_map("nonsingular", |a| WeierstrassModel::from_ints(a).ok())
}

fn fin(v: Valuation) -> i64 {
    match v {
        Valuation::Finite(v) => v,
        Valuation::PlusInfinity => panic!("unexpected infinity"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn vp_is_a_valuation(x in nonzero_ratio(), y in nonzero_ratio(), p in small_prime()) {
        prop_assert_eq!(fin(vp(&(&x * &y), p).unwrap()), fin(vp(&x, p).unwrap()) + fin(vp(&y, p).unwrap()));
        let s = &x + &y;
        let m = fin(vp(&x, p).unwrap()).min(fin(vp(&y, p).unwrap()));
        match vp(&s, p).unwrap() {
            Valuation::Finite(v) => prop_assert!(v >= m),
            Valuation::PlusInfinity => prop_assert!(s.is_zero()),
        }
    }

    #[test]
    fn discriminant_identity(a in prop::array::uniform5(-1000i64..=1000)) {
        // independent recomputation from the defining formulas
        let a: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        let b2 = &a[0] * &a[0] + BigInt::from(4) * &a[1];
        let b4 = BigInt::from(2) * &a[3] + &a[0] * &a[2];
        let b6 = &a[2] * &a[2] + BigInt::from(4) * &a[4];
        let b8 = &a[0] * &a[0] * &a[4] + BigInt::from(4) * &a[1] * &a[4] - &a[0] * &a[2] * &a[3] + &a[1] * &a[2] * &a[2] - &a[3] * &a[3];
        let c4 = &b2 * &b2 - BigInt::from(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - BigInt::from(216) * &b6;
        let disc = -(&b2 * &b2 * &b8) - BigInt::from(8) * &b4 * &b4 * &b4 - BigInt::from(27) * &b6 * &b6 + BigInt::from(9) * &b2 * &b4 * &b6;
        prop_assert_eq!(BigInt::from(1728) * &disc, &c4 * &c4 * &c4 - &c6 * &c6);
        let ints: [i64; 5] = std::array::from_fn(|i| i64::try_from(&a[i]).unwrap());
        match WeierstrassModel::from_ints(ints) {
            Ok(m) => {
                let inv = m.invariants();
                prop_assert_eq!(inv.discriminant.clone(), Rational::from_integer(disc.clone()));
                prop_assert_eq!(inv.c4.clone(), Rational::from_integer(c4.clone()));
                prop_assert_eq!(Rational::from_integer(1728.into()) * &inv.discriminant, &inv.c4 * &inv.c4 * &inv.c4 - &inv.c6 * &inv.c6);
            }
            Err(_) => prop_assert!(disc.is_zero()),
        }
    }

    #[test]
    fn counts_obey_hasse(m in model_strategy(60), l in small_prime(), k in 1u32..=4) {
        let field = FqField::new(l, 1).unwrap();
        if let Ok(red) = m.integral_model().reduce(&field) {
            if red.is_nonsingular() {
                let n = BigInt::from(count_points(&red).unwrap());
                let q = BigInt::from(l);
                prop_assert!(within_hasse(&n, &q));
                let nk = extension_count(&n, &q, k).unwrap();
                prop_assert!(within_hasse(&nk, &q.pow(k)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn extension_count_matches_direct_count(m in model_strategy(20), lk in prop::sample::select(vec![(2u64, 2usize), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (11, 2), (13, 2), (17, 2)])) {
        let (l, k) = lk;
        let base = FqField::new(l, 1).unwrap();
        let ext = FqField::new(l, k).unwrap();
        let model = m.integral_model();
        if let (Ok(r1), Ok(rk)) = (model.reduce(&base), model.reduce(&ext)) {
            if r1.is_nonsingular() {
                let n1 = count_points(&r1).unwrap();
                let direct = count_points(&rk).unwrap();
                prop_assert_eq!(extension_count(&n1.into(), &l.into(), k as u32).unwrap(), BigInt::from(direct));
            }
        }
    }

    #[test]
    fn rational_roots_are_exactly_the_zeros(roots in prop::collection::vec((-12i64..12, 1i64..6), 0..4), extra in prop::collection::vec(-9i64..9, 1..4)) {
        // prod (d x - n) times an irreducible-ish factor
        let mut p = RationalPoly::from_ints(&[1]);
        for &(n, d) in &roots {
            p = &p * &RationalPoly::from_ints(&[-n, d]);
        }
        let mut tail = extra.clone();
        tail.push(1);
        tail[0] = tail[0] * 2 + 1;
        p = &p * &RationalPoly::from_ints(&tail);
        let found = rational_roots(&p).unwrap();
        for r in &found {
            prop_assert!(p.eval(r).is_zero());
        }
        for &(n, d) in &roots {
            prop_assert!(found.contains(&ratio(n, d)));
        }
        // every candidate n/d with small n, d that is a zero was found
        for n in -30i64..=30 {
            for d in 1i64..=6 {
                let r = ratio(n, d);
                if p.eval(&r).is_zero() {
                    prop_assert!(found.contains(&r));
                }
            }
        }
    }
}

fn local_fields() -> Vec<LocalField> {
    vec![
        LocalField::new(7, 1, 6, 40, true).unwrap(),
        LocalField::new(2, 3, 1, 40, false).unwrap(),
        LocalField::new(5, 2, 2, 40, false).unwrap(),
        LocalField::new(3, 1, 2, 40, true).unwrap(),
        LocalField::new(2, 1, 2, 40, true).unwrap(),
    ]
}

fn element(k: &LocalField, coeffs: &[(i64, i64)]) -> euler_selmer::local::LocalElement {
    let pi = k.uniformizer();
    let mut x = k.zero();
    for (i, &(n, d)) in coeffs.iter().enumerate() {
        let term = &k.from_rational(&ratio(n, d)) * &pi.pow_u64(i as u64);
        x = &x + &term;
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn local_valuation_is_a_valuation(
        xs in prop::collection::vec((-400i64..400, 1i64..50), 1..5),
        ys in prop::collection::vec((-400i64..400, 1i64..50), 1..5),
    ) {
        for k in local_fields() {
            let x = element(&k, &xs);
            let y = element(&k, &ys);
            if let (Ok(vx), Ok(vy)) = (x.valuation(), y.valuation()) {
                prop_assert_eq!((&x * &y).valuation().unwrap(), vx + vy);
                let s = &x + &y;
                match s.valuation() {
                    Ok(v) => prop_assert!(v >= vx.min(vy)),
                    Err(_) => prop_assert!(s.absolute_precision() >= vx.min(vy)),
                }
            }
        }
    }

    #[test]
    fn embedding_commutes_with_vp(n in -100_000i64..100_000, d in 1i64..100_000) {
        prop_assume!(n != 0);
        let r = ratio(n, d);
        for k in local_fields() {
            let l = k.residue_characteristic();
            let e = k.ramification_index() as i64;
            prop_assert_eq!(k.from_rational(&r).valuation().unwrap(), e * fin(vp(&r, l).unwrap()));
        }
    }
}

#[test]
fn splitting_degrees_multiply_out() {
    let primes: Vec<u64> = (2..1000u64).filter(|&n| euler_selmer::arith::primes::is_prime(n)).collect();
    for m in 1..1000u64 {
        let phi = field_degree(m);
        for &l in &primes {
            let s = splitting(l, m).unwrap();
            assert_eq!(s.e * s.f * s.g, phi, "l = {l}, m = {m}");
            let divides = m % l == 0 && !(l == 2 && m % 4 == 2);
            assert_eq!(s.e > 1, divides, "l = {l}, m = {m}");
        }
    }
}

/// Curves with a rational point of order 5 or 7 (Tate normal form), and the
/// primes of good reduction where the torsion must inject.
#[test]
fn torsion_divides_reduction_counts() {
    let mut pairs = 0;
    let mut families: Vec<(WeierstrassModel, u64, bool)> = Vec::new();
    for t in [2i64, 3, 4, 5, -2, -3, 6, 7, -4, -5] {
        let t5 = ratio(t, 1);
        // order 5: b = c = t
        let a5 = [Rational::from_integer(1.into()) - &t5, -&t5.clone(), -&t5.clone(), Rational::zero(), Rational::zero()];
        if let Ok(m) = WeierstrassModel::new([a5[0].clone(), a5[1].clone(), a5[2].clone(), a5[3].clone(), a5[4].clone()]) {
            families.push((m, 5, true));
        }
        // order 7: b = t^3 - t^2, c = t^2 - t
        let c = &t5 * &t5 - &t5;
        let b = &t5 * &t5 * &t5 - &t5 * &t5;
        if let Ok(m) = WeierstrassModel::new([Rational::from_integer(1.into()) - &c, -b.clone(), -b, Rational::zero(), Rational::zero()]) {
            families.push((m, 7, true));
        }
    }
    let mut rng = common::rng(3);
    while families.len() < 50 {
        families.push((common::random_curve(&mut rng, 30), [5u64, 7][families.len() % 2], false));
    }
    for (model, p, known) in &families {
        let model = model.integral_model();
        let tors = rational_p_torsion_order(&model, *p).unwrap();
        if *known {
            assert_eq!(tors, BigInt::from(*p), "{model}");
        }
        let disc = model.discriminant().numer().clone();
        let mut used = 0;
        for l in (3u64..).filter(|&l| euler_selmer::arith::primes::is_prime(l)) {
            if used == 20 {
                break;
            }
            if l == *p || (&disc % l).is_zero() {
                continue;
            }
            let n = count_points(&model.reduce(&FqField::new(l, 1).unwrap()).unwrap()).unwrap();
            assert!((BigInt::from(n) % &tors).is_zero(), "{model}: torsion {tors} vs #E(F_{l}) = {n}");
            used += 1;
            pairs += 1;
        }
    }
    assert_eq!(pairs, 1000);
}
