use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num::{BigInt, BigRational, Num};

use super::rational::parse_rational;
use super::{Field, FieldMode, RingElement};
use crate::error::{Error, Result};

/// Working precision of [`Float`] in bits.
pub const FLOAT_PRECISION: usize = 192;

/// Relative tolerance used by [`Field::approx_eq`] in float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-20;

/// Absolute threshold below which a float counts as zero for pole detection.
const NEGLIGIBLE_EXP2: isize = -133; // about 1e-40

type Big = FBig<HalfEven, 2>;

/// Binary floating point number with [`FLOAT_PRECISION`] bits.
#[derive(Clone, Debug)]
pub struct Float(Big);

fn ibig_from(n: &BigInt) -> IBig {
    IBig::from_str_radix(&n.to_str_radix(16), 16).expect("hex digits")
}

fn bigint_from(n: &IBig) -> BigInt {
    BigInt::from_str_radix(&n.in_radix(16).to_string(), 16).expect("hex digits")
}

impl Float {
    fn wrap(x: Big) -> Self {
        Float(x.with_precision(FLOAT_PRECISION).value())
    }

    pub fn from_f64(x: f64) -> Self {
        Float::wrap(Big::try_from(x).expect("finite f64"))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn abs(&self) -> Float {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.sign() == dashu_int::Sign::Negative && !self.0.repr().significand().is_zero()
    }

    /// `self · 2^e`, exactly.
    pub fn mul_pow2(&self, e: isize) -> Float {
        let r = self.0.repr();
        Float::wrap(Big::from_parts(r.significand().clone(), r.exponent() + e))
    }

    /// The exact rational value of this binary float.
    pub fn to_rational(&self) -> BigRational {
        let r = self.0.repr();
        let sig = bigint_from(r.significand());
        let e = r.exponent();
        let two = BigInt::from(2);
        if e >= 0 {
            BigRational::from_integer(sig * num::pow(two, e as usize))
        } else {
            BigRational::new(sig, num::pow(two, (-e) as usize))
        }
    }

    /// Upper bound on log2 of the magnitude, `None` for zero.
    fn log2_ub(&self) -> Option<isize> {
        let r = self.0.repr();
        if r.significand().is_zero() {
            return None;
        }
        Some(r.exponent() + r.digits() as isize)
    }

    pub fn exp(&self) -> Float {
        Float::wrap(self.0.exp())
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Float {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! float_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<'a> $tr<&'a Float> for Float {
            type Output = Float;
            fn $m(self, rhs: &'a Float) -> Float {
                Float::wrap($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Float> for Float {
            type Output = Float;
            fn $m(self, rhs: Float) -> Float {
                Float::wrap($tr::$m(&self.0, &rhs.0))
            }
        }
    )*};
}
float_ops!(Add add, Sub sub, Mul mul);

impl<'a> Div<&'a Float> for Float {
    type Output = Float;
    fn div(self, rhs: &'a Float) -> Float {
        assert!(!rhs.0.repr().significand().is_zero(), "float division by zero");
        Float::wrap(&self.0 / &rhs.0)
    }
}

impl Div<Float> for Float {
    type Output = Float;
    fn div(self, rhs: Float) -> Float {
        self / &rhs
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.repr().significand().is_zero() {
            return write!(f, "0");
        }
        let dec = self.0.clone().with_base_and_precision::<10>(50).value();
        write!(f, "{dec}")
    }
}

impl RingElement for Float {
    fn zero_like(&self) -> Self {
        Float::zero()
    }

    fn one_like(&self) -> Self {
        Float::one()
    }

    fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }
}

impl Field for Float {
    fn zero() -> Self {
        Float::wrap(Big::ZERO)
    }

    fn one() -> Self {
        Float::wrap(Big::ONE)
    }

    fn from_rational(r: &BigRational) -> Self {
        let n = Float::wrap(Big::from(ibig_from(r.numer())));
        let d = Float::wrap(Big::from(ibig_from(r.denom())));
        n / &d
    }

    fn inv(&self) -> Option<Self> {
        if RingElement::is_zero(self) {
            None
        } else {
            Some(Float::one() / self)
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            None
        } else if RingElement::is_zero(self) {
            Some(Float::zero())
        } else {
            Some(Float::wrap(self.0.sqrt()))
        }
    }

    fn mode(&self) -> FieldMode {
        FieldMode::Float { bits: FLOAT_PRECISION }
    }

    fn is_exact() -> bool {
        false
    }

    fn is_negligible(&self) -> bool {
        match self.log2_ub() {
            None => true,
            Some(l) => l <= NEGLIGIBLE_EXP2,
        }
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let diff = (self.clone() - other).abs();
        if diff.is_negligible() {
            return true;
        }
        let scale = if self.abs() > other.abs() { self.abs() } else { other.abs() };
        diff <= scale * &Float::from_f64(FLOAT_TOLERANCE)
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Accepts `p/q`, plain decimals, and scientific notation such as `1.5e-3`.
    fn parse(s: &str) -> Result<Self> {
        parse_scientific(s).map(|r| Float::from_rational(&r))
    }
}

/// Exact rational value of a decimal literal, with an optional exponent.
pub(crate) fn parse_scientific(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some((mant, exp)) = t.split_once(['e', 'E']) {
        let m = parse_rational(mant)?;
        let e: i32 = exp
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
        let ten = BigRational::from_integer(10.into());
        let p = num::pow(ten, e.unsigned_abs() as usize);
        return Ok(if e >= 0 { m * p } else { m / p });
    }
    parse_rational(t)
}

/// Complex number with [`Float`] components.
#[derive(Clone, Debug, PartialEq)]
pub struct CFloat {
    pub re: Float,
    pub im: Float,
}

impl CFloat {
    pub fn new(re: Float, im: Float) -> Self {
        CFloat { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        CFloat::new(Float::from_f64(re), Float::from_f64(im))
    }

    pub fn from_real(re: Float) -> Self {
        CFloat::new(re, Float::zero())
    }

    /// The unit complex number `i`.
    pub fn i() -> Self {
        CFloat::new(Float::zero(), Float::one())
    }

    pub fn conj(&self) -> Self {
        CFloat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt().expect("nonnegative")
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `e^{iθ}` for an `f64` angle, refined to full precision as a root of
    /// `z^n = target` when `n > 0` (so roots of unity are exact to working precision).
    pub fn unit_root(theta: f64, n: u32) -> Self {
        let mut z = CFloat::from_f64(theta.cos(), theta.sin());
        if n == 0 {
            return z;
        }
        let target = CFloat::from_f64((theta * n as f64).cos(), (theta * n as f64).sin());
        let target = CFloat::new(
            Float::from_f64(target.re.to_f64().round()),
            Float::from_f64(target.im.to_f64().round()),
        );
        let nn = CFloat::from_real(Float::from_i64(n as i64));
        for _ in 0..6 {
            let zn1 = z.pow(n - 1);
            let f = zn1.clone() * &z - &target;
            z = z.clone() - f / (nn.clone() * &zn1);
        }
        z
    }
}

impl<'a> Add<&'a CFloat> for CFloat {
    type Output = CFloat;
    fn add(self, rhs: &'a CFloat) -> CFloat {
        CFloat::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a CFloat> for CFloat {
    type Output = CFloat;
    fn sub(self, rhs: &'a CFloat) -> CFloat {
        CFloat::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a CFloat> for CFloat {
    type Output = CFloat;
    fn mul(self, rhs: &'a CFloat) -> CFloat {
        let re = self.re.clone() * &rhs.re - self.im.clone() * &rhs.im;
        let im = self.re * &rhs.im + self.im * &rhs.re;
        CFloat::new(re, im)
    }
}

impl<'a> Div<&'a CFloat> for CFloat {
    type Output = CFloat;
    fn div(self, rhs: &'a CFloat) -> CFloat {
        let inv = rhs.inv().expect("complex division by zero");
        self * &inv
    }
}

macro_rules! cfloat_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<CFloat> for CFloat {
            type Output = CFloat;
            fn $m(self, rhs: CFloat) -> CFloat {
                $tr::$m(self, &rhs)
            }
        }
    )*};
}
cfloat_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for CFloat {
    type Output = CFloat;
    fn neg(self) -> CFloat {
        CFloat::new(-self.re, -self.im)
    }
}

impl fmt::Display for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.re, self.im)
    }
}

impl RingElement for CFloat {
    fn zero_like(&self) -> Self {
        CFloat::zero()
    }

    fn one_like(&self) -> Self {
        CFloat::one()
    }

    fn is_zero(&self) -> bool {
        RingElement::is_zero(&self.re) && RingElement::is_zero(&self.im)
    }
}

impl Field for CFloat {
    fn zero() -> Self {
        CFloat::from_real(Float::zero())
    }

    fn one() -> Self {
        CFloat::from_real(Float::one())
    }

    fn from_rational(r: &BigRational) -> Self {
        CFloat::from_real(Float::from_rational(r))
    }

    fn inv(&self) -> Option<Self> {
        if RingElement::is_zero(self) {
            return None;
        }
        let n = self.norm_sqr();
        Some(CFloat::new(self.re.clone() / &n, -(self.im.clone() / &n)))
    }

    /// Principal square root.
    fn sqrt(&self) -> Option<Self> {
        let r = self.abs();
        let two = Float::from_i64(2);
        let re = ((r.clone() + &self.re) / &two).sqrt().unwrap_or_else(Float::zero);
        let mut im = ((r - &self.re) / &two).sqrt().unwrap_or_else(Float::zero);
        if self.im.is_negative() {
            im = -im;
        }
        Some(CFloat::new(re, im))
    }

    fn mode(&self) -> FieldMode {
        FieldMode::Float { bits: FLOAT_PRECISION }
    }

    fn is_exact() -> bool {
        false
    }

    fn is_negligible(&self) -> bool {
        self.re.is_negligible() && self.im.is_negligible()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let diff = (self.clone() - other).abs();
        if diff.is_negligible() {
            return true;
        }
        let (a, b) = (self.abs(), other.abs());
        let scale = if a > b { a } else { b };
        diff <= scale * &Float::from_f64(FLOAT_TOLERANCE)
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64()
    }

    /// Accepts `(re,im)` or a real literal.
    fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            let (re, im) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected (re,im), got {s:?}")))?;
            return Ok(CFloat::new(Float::parse(re)?, Float::parse(im)?));
        }
        Float::parse(t).map(CFloat::from_real)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip_is_exact() {
        let x = Float::from_ratio(3, 8);
        assert_eq!(x.to_rational(), BigRational::new(3.into(), 8.into()));
        let third = Float::from_ratio(1, 3);
        let back = Float::from_rational(&third.to_rational());
        assert_eq!(back, third);
    }

    #[test]
    fn precision_is_well_beyond_f64() {
        let third = Float::from_ratio(1, 3);
        let err = third.clone() * &Float::from_i64(3) - &Float::one();
        assert!(err.is_negligible());
        let tiny = Float::from_rational(&BigRational::new(1.into(), num::pow(BigInt::from(10), 30)));
        assert!(!tiny.is_negligible());
        assert!(!(Float::one() + &tiny).approx_eq(&Float::one()) || tiny.to_f64() < 1e-20);
    }

    #[test]
    fn approx_eq_tolerance() {
        let a = Float::from_i64(1);
        let b = a.clone() + &Float::parse("1e-25").unwrap();
        let c = a.clone() + &Float::parse("1e-15").unwrap();
        assert!(a.approx_eq(&b));
        assert!(!a.approx_eq(&c));
    }

    #[test]
    fn parse_scientific_forms() {
        assert_eq!(parse_scientific("1.5e2").unwrap(), BigRational::from_integer(150.into()));
        assert_eq!(parse_scientific("-2e-1").unwrap(), BigRational::new((-1).into(), 5.into()));
        assert!(Float::parse("x").is_err());
    }

    #[test]
    fn complex_sqrt_and_inverse() {
        let z = CFloat::from_f64(-4.0, 0.0);
        let s = z.sqrt().unwrap();
        assert!(s.approx_eq(&CFloat::from_f64(0.0, 2.0)));
        let w = CFloat::from_f64(1.0, -2.0);
        assert!((w.clone() * w.inv().unwrap()).approx_eq(&CFloat::one()));
        let r = w.sqrt().unwrap();
        assert!((r.clone() * &r).approx_eq(&w));
    }

    #[test]
    fn unit_roots_are_refined() {
        let z = CFloat::unit_root(std::f64::consts::PI / 3.0, 6);
        assert!((z.pow(6) - &CFloat::one()).is_negligible());
    }

    #[test]
    fn display_is_decimal() {
        assert_eq!(Float::from_i64(0).to_string(), "0");
        assert!(Float::from_ratio(1, 4).to_string().starts_with("0.25"));
    }
}
