//! Exact rational scalars. `Scalar` is an arbitrary-precision fraction kept
//! in lowest terms with positive denominator; every operation is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact rational from a string like `"3"`, `"-2/7"`.
pub fn parse_scalar(s: &str) -> Result<Scalar, AlgebraError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(AlgebraError::Parse("empty rational".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("bad numerator in {t:?}")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("bad denominator in {t:?}")))?;
        if den.is_zero() {
            return Err(AlgebraError::Parse(format!("zero denominator in {t:?}")));
        }
        Ok(BigRational::new(num, den))
    } else {
        let num: BigInt = t
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("bad rational {t:?}")))?;
        Ok(BigRational::from_integer(num))
    }
}

pub fn is_one(s: &Scalar) -> bool {
    s.is_one()
}

pub fn is_neg(s: &Scalar) -> bool {
    s.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        assert_eq!(parse_scalar("4/6").unwrap(), frac(2, 3));
        assert_eq!(parse_scalar("-3").unwrap(), int(-3));
        assert_eq!(parse_scalar(" 7 / -14 ").unwrap(), frac(-1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn denominator_stays_positive() {
        let s = frac(3, -9);
        assert_eq!(s, frac(-1, 3));
        assert!(s.denom() > &BigInt::from(0));
    }
}
