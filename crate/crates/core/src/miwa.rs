//! Polynomials in the Miwa times `t₁, t₂, …` truncated by weighted degree,
//! where `t_k` has weight `k`.
//!
//! JSON layout:
//!
//! ```json
//! {"maxtime": 8, "cutoff": 8, "terms": [[[0, 1], "3/2"], [[2], "-1"]]}
//! ```
//!
//! Each term is `[exponents, coefficient]` where `exponents[k-1]` is the power
//! of `t_k` (trailing zeros omitted, so `[]` is the constant monomial).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, RingElement};

/// Default number of Miwa times.
pub const DEFAULT_MAXTIME: usize = 8;
/// Default weighted-degree cutoff.
pub const DEFAULT_CUTOFF: u32 = 8;

/// Exponent vector of a monomial `t₁^{e₁} t₂^{e₂} …`, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// The monomial `t_k` (1-based).
    pub fn time(k: usize) -> Self {
        assert!(k >= 1, "Miwa times are numbered from 1");
        let mut e = vec![0; k];
        e[k - 1] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Power of `t_k` (1-based).
    pub fn exp(&self, k: usize) -> u32 {
        self.0.get(k - 1).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum()
    }

    /// Highest time index present, 0 for the constant monomial.
    pub fn max_time(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let e = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        Monomial(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, e) in self.0.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "t{}", i + 1)?;
            } else {
                write!(f, "t{}^{e}", i + 1)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MiwaPolynomial<F> {
    maxtime: usize,
    cutoff: u32,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> MiwaPolynomial<F> {
    pub fn zero(maxtime: usize, cutoff: u32) -> Self {
        MiwaPolynomial { maxtime, cutoff, terms: BTreeMap::new() }
    }

    pub fn constant(c: F, maxtime: usize, cutoff: u32) -> Self {
        let mut p = Self::zero(maxtime, cutoff);
        p.add_term(Monomial::one(), c);
        p
    }

    /// The polynomial `t_k`; zero when `k` exceeds the maximal time or the
    /// cutoff.
    pub fn time(k: usize, maxtime: usize, cutoff: u32) -> Self {
        let mut p = Self::zero(maxtime, cutoff);
        p.add_term(Monomial::time(k), F::one());
        p
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (Monomial, F)>,
        maxtime: usize,
        cutoff: u32,
    ) -> Self {
        let mut p = Self::zero(maxtime, cutoff);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c·m`, silently dropping monomials outside the truncation.
    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() || m.weight() > self.cutoff || m.max_time() > self.maxtime {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn maxtime(&self) -> usize {
        self.maxtime
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every monomial of weight `≤ w` has zero coefficient.
    pub fn vanishes_up_to(&self, w: u32) -> bool {
        self.terms.keys().all(|m| m.weight() > w)
    }

    /// Largest coefficient magnitude among monomials of weight `≤ w`.
    pub fn max_magnitude_up_to(&self, w: u32) -> f64 {
        self.terms
            .iter()
            .filter(|(m, _)| m.weight() <= w)
            .map(|(_, c)| c.magnitude())
            .fold(0.0, f64::max)
    }

    /// Lowers the cutoff, dropping heavier monomials.
    pub fn truncate(&self, cutoff: u32) -> Self {
        let cutoff = cutoff.min(self.cutoff);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.weight() <= cutoff)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MiwaPolynomial { maxtime: self.maxtime, cutoff, terms }
    }

    pub fn scale(&self, k: &F) -> Self {
        let mut p = Self::zero(self.maxtime, self.cutoff);
        for (m, c) in self.terms() {
            p.add_term(m.clone(), c.clone() * k);
        }
        p
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let mut p = Self::zero(self.maxtime.max(other.maxtime), self.cutoff.min(other.cutoff));
        for (m, c) in self.terms() {
            p.add_term(m.clone(), c.clone());
        }
        for (m, c) in other.terms() {
            let c = if negate { -c.clone() } else { c.clone() };
            p.add_term(m.clone(), c);
        }
        p
    }

    fn product(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.maxtime.max(other.maxtime), self.cutoff.min(other.cutoff));
        for (m1, c1) in self.terms() {
            let w1 = m1.weight();
            if w1 > p.cutoff {
                continue;
            }
            for (m2, c2) in other.terms() {
                if w1 + m2.weight() <= p.cutoff {
                    p.add_term(m1.mul(m2), c1.clone() * c2);
                }
            }
        }
        p
    }

    /// `∂/∂t_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut p = Self::zero(self.maxtime, self.cutoff);
        for (m, c) in self.terms() {
            let e = m.exp(k);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[k - 1] -= 1;
            p.add_term(Monomial::new(exps), c.clone() * F::from_i64(e as i64));
        }
        p
    }

    /// Repeated partial derivative `Π_k ∂_{t_k}^{orders[k-1]}`.
    pub fn derivative_multi(&self, orders: &[u32]) -> Self {
        let mut p = self.clone();
        for (i, &o) in orders.iter().enumerate() {
            for _ in 0..o {
                p = p.derivative(i + 1);
            }
        }
        p
    }

    pub fn eval(&self, t: &MiwaTimes<F>) -> F {
        let mut acc = F::zero();
        for (m, c) in self.terms() {
            let mut term = c.clone();
            for (i, e) in m.exponents().iter().enumerate() {
                if *e > 0 {
                    term = term * t.get(i + 1).pow(*e);
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Substitutes `t_p → t_p + sign·x^p/p` for every `p`, truncating at the cutoff.
    pub fn shift(&self, x: &F, sign: i32) -> Self {
        assert!(sign == 1 || sign == -1, "shift sign must be ±1");
        let (k, d) = (self.maxtime, self.cutoff);
        // Cache of (t_p + c_p)^e for each p and e.
        let mut powers: BTreeMap<(usize, u32), Self> = BTreeMap::new();
        let mut out = Self::zero(k, d);
        for (m, c) in self.terms() {
            let mut term = Self::constant(c.clone(), k, d);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = i + 1;
                let factor = powers
                    .entry((p, e))
                    .or_insert_with(|| {
                        let shift = x.pow(p as u32) * F::from_ratio(sign as i64, p as i64);
                        let base = Self::time(p, k, d) + Self::constant(shift, k, d);
                        let mut acc = Self::constant(F::one(), k, d);
                        for _ in 0..e {
                            acc = acc * &base;
                        }
                        acc
                    })
                    .clone();
                term = term * factor;
            }
            out = out + term;
        }
        out
    }

    /// Multiplicative inverse as a formal power series; needs a nonzero
    /// constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0
            .inv()
            .ok_or_else(|| Error::InvalidSeries("constant term vanishes, cannot invert".into()))?;
        let (k, d) = (self.maxtime, self.cutoff);
        // 1/f = c0⁻¹ Σ_n (-g)^n with g = f/c0 - 1 of weight ≥ 1.
        let g = self.scale(&c0_inv) - Self::constant(F::one(), k, d);
        let neg_g = -g;
        let mut sum = Self::constant(F::one(), k, d);
        let mut power = Self::constant(F::one(), k, d);
        for _ in 0..d {
            power = power * &neg_g;
            if power.is_empty() {
                break;
            }
            sum = sum + &power;
        }
        Ok(sum.scale(&c0_inv))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms().map(|(m, c)| json!([m.exponents(), c.to_string()])).collect();
        json!({ "maxtime": self.maxtime, "cutoff": self.cutoff, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("Miwa polynomial JSON: {m}"));
        let maxtime = v["maxtime"].as_u64().ok_or_else(|| bad("missing maxtime"))? as usize;
        let cutoff = v["cutoff"].as_u64().ok_or_else(|| bad("missing cutoff"))? as u32;
        let list = v["terms"].as_array().ok_or_else(|| bad("missing terms"))?;
        let mut p = Self::zero(maxtime, cutoff);
        for item in list {
            let exps = item[0]
                .as_array()
                .ok_or_else(|| bad("exponents must be a list"))?
                .iter()
                .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| bad("exponent must be a non-negative integer")))
                .collect::<Result<Vec<_>>>()?;
            let c = item[1].as_str().ok_or_else(|| bad("coefficient must be a string"))?;
            let m = Monomial::new(exps);
            if m.weight() > cutoff || m.max_time() > maxtime {
                return Err(bad("monomial outside the truncation"));
            }
            p.add_term(m, F::parse(c)?);
        }
        Ok(p)
    }
}

impl<F: Field> fmt::Display for MiwaPolynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(m, c)| format!("{c}·{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a, F: Field> Add<&'a MiwaPolynomial<F>> for MiwaPolynomial<F> {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        self.combine(rhs, false)
    }
}

impl<'a, F: Field> Sub<&'a MiwaPolynomial<F>> for MiwaPolynomial<F> {
    type Output = Self;
    fn sub(self, rhs: &'a Self) -> Self {
        self.combine(rhs, true)
    }
}

impl<'a, F: Field> Mul<&'a MiwaPolynomial<F>> for MiwaPolynomial<F> {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        self.product(rhs)
    }
}

impl<F: Field> Add for MiwaPolynomial<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(&rhs, false)
    }
}

impl<F: Field> Sub for MiwaPolynomial<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&rhs, true)
    }
}

impl<F: Field> Mul for MiwaPolynomial<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.product(&rhs)
    }
}

impl<F: Field> Neg for MiwaPolynomial<F> {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(m, c)| (m, -c)).collect();
        MiwaPolynomial { maxtime: self.maxtime, cutoff: self.cutoff, terms }
    }
}

impl<F: Field> RingElement for MiwaPolynomial<F> {
    fn zero_like(&self) -> Self {
        Self::zero(self.maxtime, self.cutoff)
    }

    fn one_like(&self) -> Self {
        Self::constant(F::one(), self.maxtime, self.cutoff)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Values of the Miwa times `t₁ … t_K`.
#[derive(Clone, Debug, PartialEq)]
pub struct MiwaTimes<F> {
    t: Vec<F>,
}

impl<F: Field> MiwaTimes<F> {
    pub fn new(t: Vec<F>) -> Self {
        MiwaTimes { t }
    }

    pub fn zero(k: usize) -> Self {
        MiwaTimes { t: vec![F::zero(); k] }
    }

    /// `t_m = (1/m) Σᵢ xᵢ^m` for `m = 1 … k`.
    pub fn from_points(points: &[F], k: usize) -> Self {
        let t = (1..=k)
            .map(|m| {
                let s = points.iter().fold(F::zero(), |acc, x| acc + x.pow(m as u32));
                s * F::from_ratio(1, m as i64)
            })
            .collect();
        MiwaTimes { t }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `t_k` (1-based); zero beyond the stored range.
    pub fn get(&self, k: usize) -> F {
        self.t.get(k - 1).cloned().unwrap_or_else(F::zero)
    }

    pub fn values(&self) -> &[F] {
        &self.t
    }

    /// `t ± [x]`: adds `sign·x^p/p` to every `t_p`.
    pub fn shift(&self, x: &F, sign: i32) -> Self {
        let t = self
            .t
            .iter()
            .enumerate()
            .map(|(i, tp)| {
                let p = i as i64 + 1;
                tp.clone() + x.pow(p as u32) * F::from_ratio(sign as i64, p)
            })
            .collect();
        MiwaTimes { t }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type P = MiwaPolynomial<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn t(k: usize) -> P {
        P::time(k, DEFAULT_MAXTIME, DEFAULT_CUTOFF)
    }

    fn c(x: Rational) -> P {
        P::constant(x, DEFAULT_MAXTIME, DEFAULT_CUTOFF)
    }

    #[test]
    fn weights_and_truncation() {
        assert_eq!(Monomial::new(vec![2, 0, 1]).weight(), 5);
        let p = t(4) * t(4) * t(1);
        assert!(p.is_empty());
        let q = t(4) * t(4);
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn miwa_map_examples() {
        let m = MiwaTimes::from_points(&[r(2, 1)], 3);
        assert_eq!(m.values(), &[r(2, 1), r(2, 1), r(8, 3)]);
        let m = MiwaTimes::from_points(&[r(2, 1), r(3, 1)], 2);
        assert_eq!(m.values(), &[r(5, 1), r(13, 2)]);
        let m = MiwaTimes::<Rational>::from_points(&[], 4);
        assert!(m.values().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn linear_shift() {
        let x = r(3, 2);
        assert_eq!(t(1).shift(&x, -1), t(1) - c(x));
    }

    #[test]
    fn shift_removes_a_point() {
        let pts = [r(2, 1), r(3, 1)];
        let full = MiwaTimes::from_points(&pts, 8);
        let fewer = MiwaTimes::from_points(&pts[..1], 8);
        assert_eq!(full.shift(&pts[1], -1), fewer);
        // Same identity through a polynomial: f(t - [3]) at t(X) equals f at t(X \ {3}).
        let f = t(1) * t(2) + t(3) * c(r(5, 1)) + t(1) * t(1) * t(1);
        assert_eq!(f.shift(&pts[1], -1).eval(&full), f.eval(&fewer));
    }

    #[test]
    fn shift_roundtrip() {
        let f = t(1) * t(1) + t(2) * t(3) - t(5);
        let x = r(-2, 3);
        assert_eq!(f.shift(&x, 1).shift(&x, -1), f);
    }

    #[test]
    fn inverse_of_one_plus_t1() {
        let f = c(r(1, 1)) + t(1);
        let g = f.invert().unwrap();
        assert_eq!(f * g, c(r(1, 1)));
    }

    #[test]
    fn derivative_rules() {
        let f = t(1) * t(1) * t(2);
        assert_eq!(f.derivative(1), t(1) * t(2) * c(r(2, 1)));
        assert_eq!(f.derivative(3), P::zero(DEFAULT_MAXTIME, DEFAULT_CUTOFF));
    }

    #[test]
    fn json_roundtrip() {
        let f = t(1) * t(1) * c(r(3, 2)) - t(2) + c(r(7, 1));
        assert_eq!(P::from_json(&f.to_json()).unwrap(), f);
    }
}
