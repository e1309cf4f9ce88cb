//! Exact scalar fields.
//!
//! Everything above this module is generic over [`Field`]. Only exact
//! rational types implement it: zero tests drive every echelon form and
//! identity check, so a rounding scalar would silently break them.

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Num, ToPrimitive, Zero};

pub trait Field:
    Num + Clone + Debug + Display + PartialOrd + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Parses `"p/q"` or `"p"`; the result is reduced.
    fn parse_exact(s: &str) -> Option<Self>;

    fn numer_denom(&self) -> (BigInt, BigInt);

    /// `None` when the value is not representable in this field.
    fn from_bigints(num: BigInt, den: BigInt) -> Option<Self>;

    fn as_i64(&self) -> Option<i64> {
        let (n, d) = self.numer_denom();
        if d == BigInt::from(1) {
            n.to_i64()
        } else {
            None
        }
    }
}

impl Field for Ratio<BigInt> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let r = Ratio::<BigInt>::from_str(s.trim()).ok()?;
        Some(r)
    }

    fn numer_denom(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }

    fn from_bigints(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Ratio::new(num, den))
    }
}

impl Field for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn parse_exact(s: &str) -> Option<Self> {
        Ratio::<i64>::from_str(s.trim()).ok()
    }

    fn numer_denom(&self) -> (BigInt, BigInt) {
        (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_bigints(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let r = Ratio::new(num, den);
        Some(Ratio::new(r.numer().to_i64()?, r.denom().to_i64()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn parse_and_reduce() {
        let x = BigRational::parse_exact("6/4").unwrap();
        assert_eq!(x, BigRational::from_ratio(3, 2));
        assert_eq!(x.to_string(), "3/2");
        assert_eq!(BigRational::parse_exact(" -2 ").unwrap().as_i64(), Some(-2));
        assert!(BigRational::parse_exact("1/0").is_none());
        assert!(BigRational::parse_exact("abc").is_none());
        assert_eq!(BigRational::from_ratio(1, 2).as_i64(), None);
    }

    #[test]
    fn small_rationals_agree_with_big() {
        let a = Ratio::<i64>::from_ratio(-7, 21);
        let (n, d) = a.numer_denom();
        assert_eq!((n, d), (BigInt::from(-1), BigInt::from(3)));
        let b = Ratio::<i64>::from_bigints(BigInt::from(10), BigInt::from(-4)).unwrap();
        assert_eq!(b, Ratio::new(-5, 2));
    }
}
