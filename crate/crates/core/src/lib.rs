//! Euler characteristics of Selmer groups of elliptic curves over the
//! p-adic Lie extensions F(A[p^inf]) of cyclotomic fields F = Q(mu_m).
//!
//! The crate computes every arithmetic ingredient of the formula
//!
//! ```text
//! chi(Sigma, Sel(E/F_inf)) = rho_p(E/F) * | prod_{v in M} L_v(E, 1) |_p
//! ```
//!
//! from first principles: Tate's algorithm over local fields (including the
//! ramified places of Q(mu_p)), point counts over residue fields, torsion
//! bounds, splitting of primes in cyclotomic fields, and the audit of the
//! hypotheses under which the formula applies.

pub mod arith;
pub mod curves;
pub mod cyclotomic;
pub mod local;
pub mod tate;
pub mod selmer;
pub mod request;
pub mod render;
