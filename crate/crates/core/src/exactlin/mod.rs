//! Exact rational sparse linear and tensor algebra.
//!
//! Every value here is immutable once built and kept in canonical form:
//! sorted keys, merged duplicates, no zero coefficients. Nothing in the
//! engine touches floating point.

mod label;
mod linalg;
mod tensor;
mod vector;

pub use label::{parse_label_ref, BasisLabel, FamilyId, Parity};
pub use linalg::{extract_components, is_linearly_independent, membership, EchelonBasis, Side};
pub use tensor::FormalTensor;
pub use vector::FormalVector;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact element of the ground field Q.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-3/2"`, `" 7 / 4 "`.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match cleaned.split_once('/') {
        Some((a, b)) => (a.parse::<BigInt>().ok()?, b.parse::<BigInt>().ok()?),
        None => (cleaned.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if num_traits::Zero::is_zero(&den) {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Canonical text form: `"3"`, `"-3/2"`.
pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_parse_and_format() {
        assert_eq!(parse_scalar("6/4"), Some(rat(3, 2)));
        assert_eq!(parse_scalar("-7"), Some(int(-7)));
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("x"), None);
        assert_eq!(format_scalar(&rat(-6, 4)), "-3/2");
        assert_eq!(format_scalar(&int(5)), "5");
        // lowest terms, positive denominator
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
    }
}
