use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
///
/// Serializes as the string `"p/q"`, or `"p"` when the denominator is one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "rational with zero denominator");
        Rational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(value: BigRational) -> Self {
        Rational(value)
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Nearest integer, ties rounded towards +infinity.
    pub fn round_half_up(&self) -> BigInt {
        let twice = &self.0 * BigRational::from_integer(BigInt::from(2));
        let shifted = twice + BigRational::one();
        shifted.numer().div_floor(&(shifted.denom() * BigInt::from(2)))
    }

    pub fn to_f64(&self) -> f64 {
        // Dividing the BigInts separately overflows for huge parts; scale first.
        match (self.0.numer().to_f64(), self.0.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                let shift = self.0.denom().bits().max(self.0.numer().bits()) as i64 - 60;
                let (n, d) = if shift > 0 {
                    (self.0.numer() >> shift as usize, self.0.denom() >> shift as usize)
                } else {
                    (self.0.numer().clone(), self.0.denom().clone())
                };
                n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Returns `Some(q)` with `q * q == self` when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = self.0.numer().sqrt();
        let d = self.0.denom().sqrt();
        if &n * &n == *self.0.numer() && &d * &d == *self.0.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    /// Exact integer n-th root when one exists.
    pub fn nth_root_exact(&self, n: u32) -> Option<Rational> {
        if n == 0 {
            return None;
        }
        if self.is_negative() && n % 2 == 0 {
            return None;
        }
        let num = self.0.numer().nth_root(n);
        let den = self.0.denom().nth_root(n);
        if num.pow(n) == *self.0.numer() && den.pow(n) == *self.0.denom() {
            Some(Rational::new(num, den))
        } else {
            None
        }
    }

    /// Decimal rendering with `digits` digits after the point (truncated
    /// towards zero).
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_from_parts(self.0.numer(), self.0.denom(), digits)
    }
}

/// Formats `numer / denom` with `digits` fractional digits, truncating.
pub(crate) fn decimal_from_parts(numer: &BigInt, denom: &BigInt, digits: usize) -> String {
    let negative = numer.is_negative() != denom.is_negative() && !numer.is_zero();
    let numer = numer.abs();
    let denom = denom.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (numer * scale) / denom;
    let mut text = scaled.to_string();
    if text.len() <= digits {
        text = format!("{}{}", "0".repeat(digits + 1 - text.len()), text);
    }
    let split = text.len() - digits;
    let (int_part, frac_part) = text.split_at(split);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExactError::Parse(s.to_string());
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(p, q))
            }
            None => {
                let p: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational::from_integer(p))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(i) => Ok(Rational::from(i)),
        }
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<i32> for Rational {
    fn from(value: i32) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_integer(value)
    }
}

impl From<(i64, i64)> for Rational {
    fn from((p, q): (i64, i64)) -> Self {
        Rational::new(p, q)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $assign_trait<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                self.0.$assign_method(rhs.0);
            }
        }
        impl<'a> $assign_trait<&'a Rational> for Rational {
            fn $assign_method(&mut self, rhs: &'a Rational) {
                self.0.$assign_method(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(0, -7), Rational::zero());
        assert_eq!(Rational::zero().to_string(), "0");
        assert_eq!(Rational::new(8, 4).to_string(), "2");
    }

    #[test]
    fn parse_round_trip() {
        for text in ["1/12", "-7", "0", "207049815983/4287303820800"] {
            let r: Rational = text.parse().unwrap();
            assert_eq!(r.to_string(), text);
        }
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
    }

    #[test]
    fn json_is_string() {
        let r = Rational::new(10, 9);
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"10/9\"");
        let back: Rational = serde_json::from_str("\"10/9\"").unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn roots_and_rounding() {
        assert_eq!(Rational::new(9, 4).sqrt_exact(), Some(Rational::new(3, 2)));
        assert_eq!(Rational::new(1, 2).sqrt_exact(), None);
        assert_eq!(Rational::new(1, 65536).nth_root_exact(16), Some(Rational::new(1, 2)));
        assert_eq!(Rational::new(1, 256).nth_root_exact(16), None);
        assert_eq!(Rational::new(1, 65536).nth_root_exact(8), Some(Rational::new(1, 4)));
        assert_eq!(Rational::new(1, 2).round_half_up(), BigInt::from(1));
        assert_eq!(Rational::new(-1, 2).round_half_up(), BigInt::from(0));
        assert_eq!(Rational::new(-3, 5).round_half_up(), BigInt::from(-1));
    }

    #[test]
    fn decimal() {
        assert_eq!(Rational::new(1, 12).to_decimal(5), "0.08333");
        assert_eq!(Rational::new(-1, 8).to_decimal(3), "-0.125");
        assert_eq!(Rational::from(3).to_decimal(0), "3");
    }
}
