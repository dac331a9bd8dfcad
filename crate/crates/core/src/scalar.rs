//! Coefficient backends.
//!
//! Jets are generic over a [`Field`]: either exact rationals ([`Rational`],
//! always in lowest terms with positive denominator) or `f64`. The dynamic
//! [`Scalar`] value carries its backend tag and is used at I/O boundaries and
//! in report payloads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Coefficient field of a jet.
pub trait Field:
    Clone + fmt::Debug + PartialEq + Send + Sync + 'static + Num + Signed
{
    /// Backend name used in error messages.
    const BACKEND: &'static str;
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact value. For floats this is the binary value of the float.
    fn to_rational(&self) -> Option<Rational>;
    /// Square root, when it exists in the field.
    fn sqrt(&self) -> Option<Self>;
    fn to_scalar(&self) -> Scalar;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn from_frac(p: i64, q: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Value of a tagged scalar of the same backend.
    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Exact(r) if Self::EXACT => Ok(Self::from_rational(r)),
            Scalar::Float(x) if !Self::EXACT => {
                let r = Rational::from_f64(*x).ok_or(Error::NonFinite)?;
                Ok(Self::from_rational(&r))
            }
            _ => Err(Error::BackendMismatch(Self::BACKEND, s.backend())),
        }
    }

    /// Three-way zero test. Exact backends ignore `scale` and `tol`.
    fn decide(&self, scale: f64, tol: &Tolerances) -> Decision {
        if self.is_zero() {
            return Decision::Zero;
        }
        if Self::EXACT {
            return Decision::NonZero;
        }
        let a = self.to_f64().abs();
        if a < tol.zero * scale {
            Decision::Zero
        } else if a > tol.nonzero * scale {
            Decision::NonZero
        } else if tol.zero >= tol.nonzero {
            Decision::Zero
        } else {
            Decision::Uncertain
        }
    }
}

impl Field for Rational {
    const BACKEND: &'static str = "exact";
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
}

impl Field for f64 {
    const BACKEND: &'static str = "float";
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        Rational::from_f64(*self)
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
}

/// Outcome of a zero test with a dead zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Zero,
    NonZero,
    Uncertain,
}

/// Dead-zone thresholds for numeric zero tests, relative to a natural scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub zero: f64,
    pub nonzero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: 1e-9,
            nonzero: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn new(zero: f64, nonzero: f64) -> Result<Self> {
        if !(zero > 0.0 && nonzero > 0.0 && zero.is_finite() && nonzero.is_finite()) {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        if zero >= nonzero {
            return Err(Error::Invalid(format!(
                "zero tolerance {zero} must be below nonzero tolerance {nonzero}"
            )));
        }
        Ok(Self { zero, nonzero })
    }

    /// Tolerances without a dead zone.
    pub fn sharp(tol: f64) -> Self {
        Self {
            zero: tol,
            nonzero: tol,
        }
    }
}

/// A coefficient tagged with its backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn backend(&self) -> &'static str {
        match self {
            Scalar::Exact(_) => Rational::BACKEND,
            Scalar::Float(_) => f64::BACKEND,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => Field::to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn integer(n: i64) -> Self {
        Scalar::Exact(Rational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Scalar {
    /// Rationals print as `p/q` (or `p`), floats as the shortest decimal that
    /// round-trips and always contains `.` or an exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Decimal notation (a `.` or an exponent) selects the float backend,
    /// `p/q` or a bare integer the exact one.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::MalformedNumber(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        let is_decimal = t.contains(['.', 'e', 'E']) || t.chars().any(|c| c.is_ascii_alphabetic());
        if is_decimal {
            let x: f64 = t.parse().map_err(|_| bad())?;
            if !x.is_finite() {
                return Err(Error::NonFinite);
            }
            return Ok(Scalar::Float(x));
        }
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n = BigInt::from_str(n).map_err(|_| bad())?;
        let d = BigInt::from_str(d).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Scalar::Exact(Rational::new(n, d)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let r: Scalar = "6/-4".parse().unwrap();
        assert_eq!(r, Scalar::Exact(rational(-3, 2)));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!("7".parse::<Scalar>().unwrap().to_string(), "7");
        let x: Scalar = "1.0".parse().unwrap();
        assert_eq!(x, Scalar::Float(1.0));
        assert_eq!(x.to_string(), "1.0");
        assert_eq!(Scalar::Float(1e-10).to_string(), "1e-10");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("inf".parse::<Scalar>().is_err());
    }

    #[test]
    fn rational_sqrt() {
        assert_eq!(Field::sqrt(&rational(9, 4)), Some(rational(3, 2)));
        assert_eq!(Field::sqrt(&rational(2, 1)), None);
        assert_eq!(Field::sqrt(&rational(-1, 1)), None);
    }

    #[test]
    fn dead_zone() {
        let tol = Tolerances::default();
        assert_eq!(1e-12f64.decide(1.0, &tol), Decision::Zero);
        assert_eq!(1e-7f64.decide(1.0, &tol), Decision::Uncertain);
        assert_eq!(1e-3f64.decide(1.0, &tol), Decision::NonZero);
        assert_eq!(rational(1, 1_000_000_000).decide(1.0, &tol), Decision::NonZero);
        assert!(Tolerances::new(1e-6, 1e-9).is_err());
    }
}
