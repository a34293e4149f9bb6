//! Primality and factorization of machine and big integers.
//!
//! Miller-Rabin with a fixed witness set is deterministic below 2^64; larger
//! inputs fall back to trial division plus Pollard's rho on the cofactor.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn big_is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// Prime factorization of |n| as sorted (prime, exponent) pairs; n = 0 yields nothing.
pub fn factorize(n: &BigInt) -> Vec<(BigUint, u32)> {
    let mut rest = n.magnitude().clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if rest.is_zero() {
        return out;
    }
    let push = |out: &mut Vec<(BigUint, u32)>, p: BigUint| match out.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += 1,
        None => out.push((p, 1)),
    };
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            push(&mut out, bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = Vec::new();
    if rest > BigUint::one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if big_is_probable_prime(&m) {
            push(&mut out, m);
        } else {
            let d = pollard_rho(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    out.sort();
    out
}

pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    factorize(n)
        .into_iter()
        .map(|(p, _)| p.to_u64().expect("prime factor exceeds u64"))
        .collect()
}

/// All positive divisors of |n| (n nonzero), unsorted.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, k) in factorize(n) {
        let p = BigInt::from(p);
        let len = out.len();
        let mut pk = BigInt::one();
        for _ in 0..k {
            pk *= &p;
            for i in 0..len {
                out.push(&out[i] * &pk);
            }
        }
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(&BigInt::from(n))
        .into_iter()
        .fold(n, |acc, (p, _)| {
            let p = p.to_u64().unwrap();
            acc / p * (p - 1)
        })
}

/// Multiplicative order of `a` modulo `n`; requires gcd(a, n) = 1.
pub fn multiplicative_order(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let phi = euler_phi(n);
    let mut order = phi;
    for (p, _) in factorize(&BigInt::from(phi)) {
        let p = p.to_u64().unwrap();
        while order % p == 0 && pow_mod(a, order / p, n) == 1 {
            order /= p;
        }
    }
    order
}

pub fn primes_up_to(bound: u64) -> impl Iterator<Item = u64> {
    (2..=bound).filter(|&n| is_prime(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn factorize_small_and_large() {
        let f = factorize(&BigInt::from(-294));
        let got: Vec<(u64, u32)> = f.into_iter().map(|(p, k)| (p.to_u64().unwrap(), k)).collect();
        assert_eq!(got, vec![(2, 1), (3, 1), (7, 2)]);
        let n = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64) * 12;
        let primes = prime_divisors(&n);
        assert_eq!(primes, vec![2, 3, 998_244_353, 1_000_000_007]);
    }

    #[test]
    fn orders_and_phi() {
        assert_eq!(multiplicative_order(2, 7), 3);
        assert_eq!(multiplicative_order(3, 7), 6);
        assert_eq!(multiplicative_order(13, 7), 2);
        assert_eq!(euler_phi(7), 6);
        assert_eq!(euler_phi(12), 4);
        let mut d = divisors(&BigInt::from(12));
        d.sort();
        assert_eq!(d, [1, 2, 3, 4, 6, 12].map(BigInt::from).to_vec());
    }
}
