use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, Signed, ToPrimitive};

use super::rational::parse_rational;
use super::{Field, FieldMode, RingElement};
use crate::error::{Error, Result};

/// An element `a + b√d` of a quadratic extension of the rationals.
///
/// Elements with `b = 0` are stored with `d = 0` so that rationals are
/// shared by every extension. Combining two irrational elements with
/// different radicands is a programming error and panics: a computation
/// adjoins a single square root.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quadratic {
    a: BigRational,
    b: BigRational,
    d: i64,
}

impl Quadratic {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Self {
        if b.is_zero() || d == 0 {
            return Quadratic { a, b: BigRational::zero(), d: 0 };
        }
        let (sq, free) = squarefree_split(d);
        let b = b * BigRational::from_integer(sq.into());
        if free == 1 {
            return Quadratic { a: a + b, b: BigRational::zero(), d: 0 };
        }
        Quadratic { a, b, d: free }
    }

    pub fn rational(a: BigRational) -> Self {
        Quadratic { a, b: BigRational::zero(), d: 0 }
    }

    /// `√d` itself.
    pub fn root(d: i64) -> Self {
        Quadratic::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// Radicand, or 0 for a rational element.
    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The Galois conjugate `a - b√d`.
    pub fn conj(&self) -> Self {
        Quadratic { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// `a² - d b²`, rational.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(self.d.into());
        &self.a * &self.a - d * &self.b * &self.b
    }

    fn common_d(&self, other: &Self) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (x, y) if x == y => x,
            (x, y) => panic!("mixing quadratic extensions with radicands {x} and {y}"),
        }
    }

    fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).abs().sqrt()
    }
}

/// Writes `d = s² f` with `f` squarefree (sign kept in `f`).
fn squarefree_split(d: i64) -> (i64, i64) {
    let sign = d.signum();
    let mut n = d.unsigned_abs();
    let mut s: u64 = 1;
    let mut f: u64 = 1;
    let mut p: u64 = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    f *= n;
    (s as i64, sign * f as i64)
}

fn combine(a: BigRational, b: BigRational, d: i64) -> Quadratic {
    if b.is_zero() {
        Quadratic::rational(a)
    } else {
        Quadratic { a, b, d }
    }
}

impl<'a> Add<&'a Quadratic> for Quadratic {
    type Output = Quadratic;
    fn add(self, rhs: &'a Quadratic) -> Quadratic {
        let d = self.common_d(rhs);
        combine(self.a + &rhs.a, self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a Quadratic> for Quadratic {
    type Output = Quadratic;
    fn sub(self, rhs: &'a Quadratic) -> Quadratic {
        let d = self.common_d(rhs);
        combine(self.a - &rhs.a, self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a Quadratic> for Quadratic {
    type Output = Quadratic;
    fn mul(self, rhs: &'a Quadratic) -> Quadratic {
        let d = self.common_d(rhs);
        let dq = BigRational::from_integer(d.into());
        let a = &self.a * &rhs.a + dq * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        combine(a, b, d)
    }
}

impl<'a> Div<&'a Quadratic> for Quadratic {
    type Output = Quadratic;
    fn div(self, rhs: &'a Quadratic) -> Quadratic {
        let inv = rhs.inv().expect("division by zero in quadratic field");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Quadratic> for Quadratic {
            type Output = Quadratic;
            fn $m(self, rhs: Quadratic) -> Quadratic {
                $tr::$m(self, &rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Quadratic {
    type Output = Quadratic;
    fn neg(self) -> Quadratic {
        Quadratic { a: -self.a, b: -self.b, d: self.d }
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "({},{}|{})", self.a, self.b, self.d)
        }
    }
}

impl RingElement for Quadratic {
    fn zero_like(&self) -> Self {
        Quadratic::zero()
    }

    fn one_like(&self) -> Self {
        Quadratic::one()
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl Field for Quadratic {
    fn zero() -> Self {
        Quadratic::rational(BigRational::zero())
    }

    fn one() -> Self {
        Quadratic::rational(BigRational::one())
    }

    fn from_rational(r: &BigRational) -> Self {
        Quadratic::rational(r.clone())
    }

    fn inv(&self) -> Option<Self> {
        if RingElement::is_zero(self) {
            return None;
        }
        // d is squarefree and not 1, so the norm of a nonzero element is nonzero.
        let n = self.norm();
        Some(combine(&self.a / &n, -(&self.b / &n), self.d))
    }

    fn sqrt(&self) -> Option<Self> {
        if !self.is_rational() {
            // Roots of irrational elements would leave the single extension.
            return None;
        }
        let r = &self.a;
        if r.is_zero() {
            return Some(Quadratic::zero());
        }
        if let Some(s) = Field::sqrt(r) {
            return Some(Quadratic::rational(s));
        }
        // √(p/q) = √(p q) / q.
        let pq = r.numer() * r.denom();
        let pq = pq.to_i64()?;
        let (s, free) = squarefree_split(pq);
        let coeff = BigRational::new(BigInt::from(s), r.denom().clone());
        Some(Quadratic { a: BigRational::zero(), b: coeff, d: free })
    }

    fn mode(&self) -> FieldMode {
        FieldMode::Quadratic { d: self.d }
    }

    fn is_exact() -> bool {
        true
    }

    fn magnitude(&self) -> f64 {
        if self.d < 0 {
            let a = self.a.to_f64().unwrap_or(f64::NAN);
            let b = self.b.to_f64().unwrap_or(f64::NAN);
            return (a * a + b * b * (-self.d) as f64).sqrt();
        }
        self.to_f64().abs()
    }

    /// Accepts a rational (`p/q`, decimal) or `(a,b|d)`.
    fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            let (ab, d) = inner
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("expected (a,b|d), got {s:?}")))?;
            let (a, b) = ab
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected (a,b|d), got {s:?}")))?;
            let d: i64 = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
            return Ok(Quadratic::new(parse_rational(a)?, parse_rational(b)?, d));
        }
        parse_rational(t).map(Quadratic::rational)
    }
}

impl Quadratic {
    /// Sign of a real element (`d > 0` or rational), computed exactly.
    pub fn signum_real(&self) -> i32 {
        assert!(self.d >= 0, "sign of a non-real quadratic element");
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        // a and b√d have opposite signs; compare a² with d b².
        let d = BigRational::from_integer(self.d.into());
        let a2 = &self.a * &self.a;
        let b2d = d * &self.b * &self.b;
        if a2 > b2d {
            sa
        } else if a2 < b2d {
            sb
        } else {
            0
        }
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: i64) -> Quadratic {
        Quadratic::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()), d)
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(q(1, 1, 4), q(3, 0, 0));
        assert_eq!(q(0, 1, 8), q(0, 2, 2));
        assert_eq!(q(2, 0, 5).radicand(), 0);
        assert_eq!(q(1, 2, 3).to_string(), "(1,2|3)");
        assert_eq!(q(5, 0, 3).to_string(), "5");
    }

    #[test]
    fn root_squares_to_radicand() {
        let r = Quadratic::root(377);
        assert_eq!(r.clone() * &r, Quadratic::from_i64(377));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = q(3, -2, 7);
        assert_eq!(x.clone() * x.inv().unwrap(), Quadratic::one());
        assert!(Quadratic::zero().inv().is_none());
    }

    #[test]
    fn sqrt_adjoins() {
        let half = Quadratic::from_ratio(1, 2);
        let s = half.sqrt().unwrap();
        assert_eq!(s.clone() * &s, half);
        assert_eq!(s.radicand(), 2);
        let m = Quadratic::from_i64(-1).sqrt().unwrap();
        assert_eq!(m.clone() * &m, Quadratic::from_i64(-1));
    }

    #[test]
    fn parse_roundtrip() {
        let x = q(-1, 3, 5) / q(2, 1, 5);
        assert_eq!(Quadratic::parse(&x.to_string()).unwrap(), x);
        assert_eq!(Quadratic::parse("3/4").unwrap(), Quadratic::from_ratio(3, 4));
    }

    #[test]
    fn exact_sign() {
        assert_eq!(q(-21, 1, 377).signum_real(), -1);
        assert_eq!(q(20, -1, 377).signum_real(), 1);
        assert_eq!(q(0, -1, 2).signum_real(), -1);
    }

    #[test]
    #[should_panic]
    fn mixed_radicands_panic() {
        let _ = q(0, 1, 2) + &q(0, 1, 3);
    }
}
