//! Decomposition of rational primes in F = Q(mu_m).

use serde::{Deserialize, Serialize};

use crate::arith::primes::{euler_phi, is_prime, multiplicative_order};
use crate::arith::ArithError;

/// Splitting of l in Q(mu_m): e * f * g = phi(m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicSplitting {
    pub m: u64,
    pub ell: u64,
    /// Ramification index phi(l^a), where l^a exactly divides m.
    pub e: u64,
    /// Residue degree: order of l modulo m / l^a.
    pub f: u64,
    /// Number of places above l.
    pub g: u64,
    /// Exponent a of l in m.
    pub level: u32,
}

impl CyclotomicSplitting {
    pub fn local_degree(&self) -> u64 {
        self.e * self.f
    }

    pub fn is_ramified(&self) -> bool {
        self.e > 1
    }
}

/// [Q(mu_m) : Q].
pub fn field_degree(m: u64) -> u64 {
    euler_phi(m)
}

pub fn splitting(ell: u64, m: u64) -> Result<CyclotomicSplitting, ArithError> {
    if !is_prime(ell) {
        return Err(ArithError::NotPrime(ell));
    }
    if m == 0 {
        return Err(ArithError::BadDegree(0));
    }
    let mut rest = m;
    let mut level = 0;
    while rest % ell == 0 {
        rest /= ell;
        level += 1;
    }
    let e = if level == 0 { 1 } else { euler_phi(ell.pow(level)) };
    let f = multiplicative_order(ell % rest.max(1), rest);
    let g = euler_phi(m) / (e * f);
    Ok(CyclotomicSplitting { m, ell, e, f, g, level })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes::primes_up_to;

    fn efg(l: u64, m: u64) -> (u64, u64, u64) {
        let s = splitting(l, m).unwrap();
        (s.e, s.f, s.g)
    }

    #[test]
    fn examples() {
        assert_eq!(efg(2, 7), (1, 3, 2));
        assert_eq!(efg(7, 7), (6, 1, 1));
        assert_eq!(efg(3, 7), (1, 6, 1));
        assert_eq!(efg(13, 7), (1, 2, 3));
        assert_eq!(efg(5, 1), (1, 1, 1));
        assert_eq!(efg(2, 6), (1, 2, 1));
        assert!(splitting(4, 7).is_err());
    }

    #[test]
    fn ramified_iff_divides_conductor() {
        for l in primes_up_to(100) {
            for m in 1..200u64 {
                let s = splitting(l, m).unwrap();
                // Q(mu_m) = Q(mu_{m/2}) for m = 2 mod 4, so 2 is unramified there
                let divides = m % l == 0 && !(l == 2 && m % 4 == 2);
                assert_eq!(s.is_ramified(), divides, "l={l} m={m}");
            }
        }
    }
}
