//! Scalar fields the engine computes over.
//!
//! Three concrete fields implement [`Field`]:
//!
//! * [`Rational`]: arbitrary-precision rationals, always reduced.
//! * [`Quadratic`]: elements `a + b√d` of a quadratic extension of the rationals.
//! * [`Float`]: binary floating point with [`FLOAT_PRECISION`] bits.
//!
//! [`CFloat`] is the complex counterpart of [`Float`] and is used by the Bethe
//! root finder. Exact fields compare with literal equality; the float types
//! compare with a relative tolerance of [`FLOAT_TOLERANCE`].

mod float;
mod quadratic;
mod rational;

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use float::{CFloat, Float, FLOAT_PRECISION, FLOAT_TOLERANCE};
pub use quadratic::Quadratic;
pub use rational::{limit_denominator, Rational};

/// Commutative ring element. Constants are produced from an existing element
/// because some rings (truncated polynomials) carry their truncation context.
pub trait RingElement:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
}

/// A field of scalars.
pub trait Field:
    RingElement + Display + Div<Output = Self> + for<'a> Div<&'a Self, Output = Self> + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()))
    }

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Square root inside this field. Quadratic mode adjoins the root of a
    /// rational non-square; the other modes return `None` when no root exists.
    fn sqrt(&self) -> Option<Self>;

    fn mode(&self) -> FieldMode;

    /// True for the exact fields.
    fn is_exact() -> bool;

    /// Treated as zero when testing for poles. Exact zero in exact modes.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Equality in exact modes, relative closeness in float modes.
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Absolute value (modulus for complex elements) as an `f64`.
    fn magnitude(&self) -> f64;

    fn parse(s: &str) -> Result<Self>;

    /// Division reporting a pole named `factor` when the divisor vanishes.
    fn checked_div(&self, divisor: &Self, factor: &str) -> Result<Self> {
        if divisor.is_negligible() {
            return Err(Error::Pole(factor.to_string()));
        }
        Ok(self.clone() / divisor)
    }

    fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need an invertible base.
    fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            self.inv().map(|x| x.pow((-e) as u32))
        }
    }
}

/// Which field a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    Rational,
    Quadratic { d: i64 },
    Float { bits: usize },
}

impl FieldMode {
    pub fn name(&self) -> &'static str {
        match self {
            FieldMode::Rational => "rational",
            FieldMode::Quadratic { .. } => "quadratic",
            FieldMode::Float { .. } => "float",
        }
    }
}

impl Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Rational => write!(f, "rational"),
            FieldMode::Quadratic { d } => write!(f, "quadratic(d={d})"),
            FieldMode::Float { bits } => write!(f, "float({bits} bits)"),
        }
    }
}

/// `x - 1/x`, the building block of every chain quantity.
pub fn w<F: Field>(x: &F) -> Result<F> {
    let inv = x.inv().ok_or_else(|| Error::Pole("argument of w".into()))?;
    Ok(x.clone() - inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_examples() {
        assert_eq!(w(&Rational::from_i64(1)).unwrap(), Rational::zero());
        assert_eq!(w(&Rational::from_i64(-1)).unwrap(), Rational::zero());
        assert_eq!(w(&Rational::from_i64(2)).unwrap(), Rational::from_ratio(3, 2));
        assert!(w(&Rational::zero()).is_err());
    }

    #[test]
    fn pow_and_powi() {
        let x = Rational::from_ratio(2, 3);
        assert_eq!(x.pow(3), Rational::from_ratio(8, 27));
        assert_eq!(x.powi(-2).unwrap(), Rational::from_ratio(9, 4));
        assert_eq!(x.pow(0), Rational::one());
        assert!(Rational::zero().powi(-1).is_none());
    }
}
