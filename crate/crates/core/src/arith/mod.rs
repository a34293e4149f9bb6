//! Exact arithmetic kernels: rationals and valuations, primes, finite fields
//! and dense polynomials.

pub mod fq;
pub mod poly;
pub mod primes;
pub mod rational;

pub use fq::{FqElement, FqField};
pub use poly::{count_roots_in_field, rational_roots, roots_by_enumeration, Polynomial, RationalPoly};
pub use primes::{euler_phi, factorize, is_prime, multiplicative_order, prime_divisors};
pub use rational::{parse_rational, rat, ratio, vp, Rational, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field degree must be at least 1, got {0}")]
    BadDegree(usize),
    #[error("characteristic {0} is too large for the finite-field kernel")]
    CharacteristicTooLarge(u64),
    #[error("coordinates do not describe an element of this field")]
    BadCoordinates,
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
}
