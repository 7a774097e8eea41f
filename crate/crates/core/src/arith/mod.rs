//! Exact scalars: arbitrary-precision rationals and elements of cyclotomic
//! fields `Q(zeta_m)`.

mod cyclo;
mod poly;

pub use cyclo::{cyclo_root, cyclotomic_polynomial, euler_phi, CycloElem, CycloField};

use num_bigint::BigInt;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
