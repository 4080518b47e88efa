//! Exact rational numbers.
//!
//! Every proportion computed by this crate (derangement proportions, eigenvalue-1
//! proportions, threshold functions) is an [`ExactRatio`]. Floating point only
//! appears in explicitly statistical checks and in human-facing summaries.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRatio(BigRational);

impl ExactRatio {
    /// Builds `num / den`. Panics when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        ExactRatio(BigRational::new(num.into(), den))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRatio(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRatio(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRatio(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        ExactRatio(self.0.recip())
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRatio {
    fn from(r: BigRational) -> Self {
        ExactRatio(r)
    }
}

impl From<i64> for ExactRatio {
    fn from(n: i64) -> Self {
        ExactRatio::from_integer(n)
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatioError(String);

impl fmt::Display for ParseRatioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational `{}`", self.0)
    }
}

impl std::error::Error for ParseRatioError {}

impl FromStr for ExactRatio {
    type Err = ParseRatioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRatioError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(ExactRatio::new(n, d))
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRatio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRatio {
            type Output = ExactRatio;
            fn $m(self, rhs: ExactRatio) -> ExactRatio {
                ExactRatio(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRatio> for &'a ExactRatio {
            type Output = ExactRatio;
            fn $m(self, rhs: &'a ExactRatio) -> ExactRatio {
                ExactRatio((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRatio> for ExactRatio {
            type Output = ExactRatio;
            fn $m(self, rhs: &'a ExactRatio) -> ExactRatio {
                ExactRatio(self.0.$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRatio {
    type Output = ExactRatio;
    fn neg(self) -> ExactRatio {
        ExactRatio(-self.0)
    }
}

/// Comparison relation used when recording an inequality or identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &ExactRatio, rhs: &ExactRatio) -> bool {
        let ord = lhs.cmp(rhs);
        match self {
            Relation::Eq => ord == Ordering::Equal,
            Relation::Le => ord != Ordering::Greater,
            Relation::Lt => ord == Ordering::Less,
            Relation::Ge => ord != Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms() {
        let r = ExactRatio::new(6, -30);
        assert_eq!(r.to_string(), "-1/5");
        assert_eq!(r.denom(), &BigInt::from(5));
    }

    #[test]
    fn parse_round_trip() {
        let r: ExactRatio = "5/32".parse().unwrap();
        assert_eq!(r, ExactRatio::new(5, 32));
        assert_eq!("7".parse::<ExactRatio>().unwrap(), ExactRatio::from_integer(7));
        assert!("1/0".parse::<ExactRatio>().is_err());
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"5/32\"");
        assert_eq!(serde_json::from_str::<ExactRatio>(&json).unwrap(), r);
    }

    fn small() -> impl Strategy<Value = ExactRatio> {
        (-40i64..40, 1i64..40).prop_map(|(n, d)| ExactRatio::new(n, d))
    }

    proptest! {
        #[test]
        fn field_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!(a.denom() > &BigInt::zero());
        }
    }
}
