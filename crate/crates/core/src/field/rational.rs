use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::{Field, FieldMode, RingElement};
use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Rational = BigRational;

impl RingElement for BigRational {
    fn zero_like(&self) -> Self {
        <BigRational as Zero>::zero()
    }

    fn one_like(&self) -> Self {
        <BigRational as One>::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as One>::one()
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(BigRational::new(n, d))
    }

    fn mode(&self) -> FieldMode {
        FieldMode::Rational
    }

    fn is_exact() -> bool {
        true
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

/// Parses `p`, `p/q`, or a finite decimal such as `-0.125` into an exact rational.
pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if Zero::is_zero(&d) {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(BigRational::from_integer(n))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions.
pub fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let a = n.div_floor_big(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let rem = &n - &a * &d;
        n = std::mem::replace(&mut d, rem);
        if Zero::is_zero(&d) {
            break;
        }
    }
    let k = (max_den - &q0) / &q1;
    let b1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = BigRational::new(p1, q1);
    if (&b2 - x).abs() <= (&b1 - x).abs() {
        b2
    } else {
        b1
    }
}

trait DivFloor {
    fn div_floor_big(&self, other: &Self) -> Self;
}

impl DivFloor for BigInt {
    fn div_floor_big(&self, other: &Self) -> Self {
        num::Integer::div_floor(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), r(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), r(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert_eq!(parse_rational("-0.125").unwrap(), r(-1, 8));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn sqrt_of_squares_only() {
        assert_eq!(Field::sqrt(&r(9, 4)), Some(r(3, 2)));
        assert_eq!(Field::sqrt(&r(2, 1)), None);
        assert_eq!(Field::sqrt(&r(-1, 1)), None);
    }

    #[test]
    fn continued_fraction_limit() {
        let pi = r(314159265, 100000000);
        assert_eq!(limit_denominator(&pi, &BigInt::from(10)), r(22, 7));
        assert_eq!(limit_denominator(&pi, &BigInt::from(200)), r(355, 113));
        assert_eq!(limit_denominator(&r(1, 3), &BigInt::from(5)), r(1, 3));
    }
}
