use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::LcError;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Which coefficient ring a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// A single series coefficient. Mixing the two tags in arithmetic is an
/// error, never a silent promotion.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(Rational),
    Float(f64),
}

/// Build a rational from an integer pair. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Shortest round-trip decimal; always contains `.` or `e` so that the text
/// form can tell float coefficients from exact ones.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator and denominator may each overflow f64 while the ratio does not
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Coefficient {
    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coefficient::Exact(Rational::zero()),
            Mode::Float => Coefficient::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coefficient::Exact(Rational::one()),
            Mode::Float => Coefficient::Float(1.0),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Coefficient::Exact(_) => Mode::Exact,
            Coefficient::Float(_) => Mode::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(q) => q.is_zero(),
            Coefficient::Float(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coefficient::Exact(q) => q.is_negative(),
            Coefficient::Float(x) => *x < 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Exact(q) => rational_to_f64(q),
            Coefficient::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coefficient::Exact(q) => Some(q),
            Coefficient::Float(_) => None,
        }
    }

    /// Re-express in another mode. Exact → Float rounds; Float → Exact is
    /// only possible for finite values and yields the exact binary value.
    pub fn convert(&self, mode: Mode) -> Result<Coefficient, LcError> {
        match (self, mode) {
            (Coefficient::Exact(_), Mode::Exact) | (Coefficient::Float(_), Mode::Float) => {
                Ok(self.clone())
            }
            (Coefficient::Exact(q), Mode::Float) => Ok(Coefficient::Float(rational_to_f64(q))),
            (Coefficient::Float(x), Mode::Exact) => Rational::from_float(*x)
                .map(Coefficient::Exact)
                .ok_or(LcError::NonFinite),
        }
    }

    fn binary(
        &self,
        other: &Coefficient,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Result<Coefficient, LcError> {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Ok(Coefficient::Exact(exact(a, b))),
            (Coefficient::Float(a), Coefficient::Float(b)) => Ok(Coefficient::Float(float(*a, *b))),
            _ => Err(LcError::ModeMismatch),
        }
    }

    pub fn try_add(&self, other: &Coefficient) -> Result<Coefficient, LcError> {
        self.binary(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Coefficient) -> Result<Coefficient, LcError> {
        self.binary(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Coefficient) -> Result<Coefficient, LcError> {
        self.binary(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn try_div(&self, other: &Coefficient) -> Result<Coefficient, LcError> {
        if other.is_zero() {
            return Err(LcError::DivisionByZero);
        }
        self.binary(other, |a, b| a / b, |a, b| a / b)
    }

    pub fn neg(&self) -> Coefficient {
        match self {
            Coefficient::Exact(q) => Coefficient::Exact(-q),
            Coefficient::Float(x) => Coefficient::Float(-x),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(q) => f.write_str(&format_rational(q)),
            Coefficient::Float(x) => f.write_str(&format_float(*x)),
        }
    }
}

impl From<Rational> for Coefficient {
    fn from(q: Rational) -> Self {
        Coefficient::Exact(q)
    }
}

impl From<f64> for Coefficient {
    fn from(x: f64) -> Self {
        Coefficient::Float(x)
    }
}

/// Exact coefficients serialize as rational text, floats as JSON numbers.
impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Coefficient::Exact(q) => serializer.serialize_str(&format_rational(q)),
            Coefficient::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

/// The arithmetic the series kernel needs from a coefficient ring.
pub(crate) trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl Scalar for Rational {}

impl Scalar for f64 {}
