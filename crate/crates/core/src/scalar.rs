//! Scalar abstractions shared by the exact and the learned halves of the crate.
//!
//! Polynomials and the simplex solver are generic over [`Scalar`], which is
//! implemented for exact rationals and for IEEE floats. The Q-network is
//! generic over [`NetFloat`].

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Coefficient field for polynomials and linear programs.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static
{
    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    /// Zero test used for pivoting decisions. Exact types answer `is_zero`.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Nearest `f64`.
    fn to_f64_lossy(&self) -> f64;

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn div_ref(&self, other: &Self) -> Self {
        self.clone() / other.clone()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    /// Strictly below zero, beyond the pivoting tolerance.
    fn is_clearly_negative(&self) -> bool {
        self.is_negative() && !self.is_negligible()
    }

    /// Strictly above zero, beyond the pivoting tolerance.
    fn is_clearly_positive(&self) -> bool {
        self.is_positive() && !self.is_negligible()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn to_f64_lossy(&self) -> f64 {
        // num-rational rounds to nearest here
        self.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn is_negligible(&self) -> bool {
                self.abs() <= $tol
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

/// Floating point type usable for network parameters.
pub trait NetFloat:
    num_traits::Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl NetFloat for f32 {}
impl NetFloat for f64 {}

/// Parses `"a/b"`, `"a"` or `"-a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Machine form `"num/den"`, denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Human form: integers without a denominator.
pub fn display_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shorthand for building exact constants in code and tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Serde adapter storing rationals as `"num/den"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3, 1));
        assert_eq!(parse_rational(" 2/-4 ").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(3, 1)), "3/1");
        assert_eq!(display_rational(&rat(3, 1)), "3");
        assert_eq!(display_rational(&rat(-2, 5)), "-2/5");
    }

    #[test]
    fn rational_to_float_rounds_to_nearest() {
        assert_eq!(rat(1, 3).to_f64_lossy(), 1.0 / 3.0);
        assert_eq!(rat(-15, 2).to_f64_lossy(), -7.5);
    }
}
