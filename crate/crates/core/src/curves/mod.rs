//! Weierstrass models, the group law, point counts over finite fields,
//! division polynomials and p-torsion bounds.

pub mod count;
pub mod division;
pub mod model;
pub mod point;
pub mod torsion;

pub use count::{count_points, extension_count, within_hasse, ENUMERATION_CAP};
pub use division::division_polynomial;
pub use model::{b_invariants, discriminant, CurveInvariants, FqModel, WeierstrassModel};
pub use point::{point_order, CurvePoint, GroupLaw};
pub use torsion::{rational_p_torsion_order, torsion_bound_over_f, TorsionEstimate};

use crate::arith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("singular Weierstrass model (discriminant 0)")]
    Singular,
    #[error("expected 5 coefficients, got {0}")]
    CoefficientCount(usize),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("bound must be at least 1")]
    BadBound,
    #[error("field too large to enumerate (cap {cap})", cap = ENUMERATION_CAP)]
    FieldTooLarge,
    #[error("point count lies outside the Hasse window")]
    OutsideHasse,
    #[error("model is not integral at {0}")]
    NotIntegralAt(u64),
    #[error("division polynomials are only built for odd n >= 1, got {0}")]
    EvenDivisionIndex(usize),
    #[error("prime {0} not supported for torsion search")]
    UnsupportedPrime(u64),
    #[error("only {found} usable primes found, {wanted} requested")]
    NotEnoughPrimes { wanted: usize, found: usize },
    #[error("inconsistent torsion certificate: {0}")]
    BadCertificate(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
