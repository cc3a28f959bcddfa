//! Truncated Laurent series in one variable.
//!
//! A series knows its coefficients exactly up to and including the exponent
//! `trunc`; everything above is unknown. Laurent polynomials that are known
//! exactly carry `trunc = EXACT`. Arithmetic propagates the truncation order
//! so a result never claims more precision than its inputs support.
//!
//! JSON layout:
//!
//! ```json
//! {"var": "z", "trunc": 6, "coeffs": [[-2, "1/3"], [0, "5"], [4, "-7/2"]]}
//! ```
//!
//! `coeffs` lists nonzero coefficients in increasing exponent order; each
//! coefficient is the field's string form. An exact polynomial serializes
//! `trunc` as `null`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;

/// Truncation marker for series known to all orders.
pub const EXACT: i32 = i32::MAX / 4;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<F> {
    var: String,
    coeffs: BTreeMap<i32, F>,
    trunc: i32,
}

fn clamp(t: i32) -> i32 {
    t.min(EXACT)
}

impl<F: Field> LaurentSeries<F> {
    pub fn zero(var: &str, trunc: i32) -> Self {
        LaurentSeries { var: var.to_string(), coeffs: BTreeMap::new(), trunc: clamp(trunc) }
    }

    /// Builds a series from `(exponent, coefficient)` pairs, summing repeats
    /// and dropping anything above `trunc`.
    pub fn from_terms(var: &str, terms: impl IntoIterator<Item = (i32, F)>, trunc: i32) -> Self {
        let mut s = Self::zero(var, trunc);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// The exact monomial `c·var^e`.
    pub fn monomial(var: &str, c: F, e: i32) -> Self {
        Self::from_terms(var, [(e, c)], EXACT)
    }

    pub fn constant(var: &str, c: F) -> Self {
        Self::monomial(var, c, 0)
    }

    /// The exact Laurent polynomial `α·var^k + β·var^{-k}`.
    pub fn binomial(var: &str, alpha: F, k: i32, beta: F) -> Self {
        Self::from_terms(var, [(k, alpha), (-k, beta)], EXACT)
    }

    fn add_term(&mut self, e: i32, c: F) {
        if e > self.trunc || c.is_zero() {
            return;
        }
        match self.coeffs.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.coeffs.insert(e, s);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc >= EXACT
    }

    pub fn coeff(&self, e: i32) -> F {
        self.coeffs.get(&e).cloned().unwrap_or_else(F::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &F)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Lowest exponent with a nonzero coefficient, or `trunc + 1` when every
    /// known coefficient vanishes.
    pub fn valuation(&self) -> i32 {
        self.coeffs.keys().next().copied().unwrap_or(self.trunc.saturating_add(1))
    }

    pub fn leading(&self) -> Option<(i32, &F)> {
        self.coeffs.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn truncate(&self, trunc: i32) -> Self {
        let trunc = trunc.min(self.trunc);
        let coeffs = self.coeffs.range(..=trunc).map(|(e, c)| (*e, c.clone())).collect();
        LaurentSeries { var: self.var.clone(), coeffs, trunc }
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::InvalidSeries(format!(
                "variables differ: {} vs {}",
                self.var, other.var
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let mut out = Self::zero(&self.var, self.trunc.min(other.trunc));
        for (e, c) in self.terms().chain(other.terms()) {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect();
        LaurentSeries { var: self.var.clone(), coeffs, trunc: self.trunc }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &F) -> Self {
        let mut out = Self::zero(&self.var, self.trunc);
        for (e, c) in self.terms() {
            out.add_term(e, c.clone() * k);
        }
        out
    }

    /// Multiplies by `var^k` exactly.
    pub fn shift(&self, k: i32) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect();
        LaurentSeries { var: self.var.clone(), coeffs, trunc: clamp(self.trunc.saturating_add(k)) }
    }

    /// Product; known to exponent `min(t₁ + v₂, t₂ + v₁)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let t = clamp(
            self.trunc
                .saturating_add(other.valuation())
                .min(other.trunc.saturating_add(self.valuation())),
        );
        let mut out = Self::zero(&self.var, t);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e = e1 + e2;
                if e > t {
                    break;
                }
                out.add_term(e, c1.clone() * c2);
            }
        }
        Ok(out)
    }

    /// Reciprocal series. For `s = c·z^v + …` known to `trunc = t`, the result
    /// starts at `z^{-v}` and is known to `t - 2v`.
    pub fn invert(&self) -> Result<Self> {
        if self.is_exact() && self.coeffs.len() > 1 {
            return Err(Error::InvalidSeries(
                "inverting an exact polynomial needs a truncation order".into(),
            ));
        }
        let (v, lead) = self
            .leading()
            .ok_or_else(|| Error::InvalidSeries("cannot invert a series with no known nonzero term".into()))?;
        let lead_inv = lead.inv().expect("leading coefficient is nonzero");
        if self.is_exact() {
            return Ok(Self::monomial(&self.var, lead_inv, -v));
        }
        let n_terms = (self.trunc - v) as usize;
        let a: Vec<F> = (0..=n_terms).map(|k| self.coeff(v + k as i32)).collect();
        let mut b: Vec<F> = Vec::with_capacity(n_terms + 1);
        b.push(lead_inv.clone());
        for n in 1..=n_terms {
            let mut acc = F::zero();
            for k in 1..=n {
                if !a[k].is_zero() {
                    acc = acc + a[k].clone() * &b[n - k];
                }
            }
            b.push(-(acc * &lead_inv));
        }
        let terms = b.into_iter().enumerate().map(|(n, c)| (n as i32 - v, c));
        Ok(Self::from_terms(&self.var, terms, self.trunc - 2 * v))
    }

    /// `self / other`, expanding an exact denominator as needed so the
    /// quotient is known to at least `trunc` when possible.
    pub fn div_to(&self, other: &Self, trunc: i32) -> Result<Self> {
        let v = other.valuation();
        let denom = if other.is_exact() {
            let mut d = other.clone();
            // Quotient known to t_d - 2v_d + v_self; choose t_d so that reaches trunc.
            d.trunc = clamp(trunc.saturating_add(2 * v).saturating_sub(self.valuation().min(trunc)));
            d.trunc = d.trunc.max(v);
            d
        } else {
            other.clone()
        };
        let q = self.mul(&denom.invert()?)?;
        Ok(q.truncate(trunc))
    }

    pub fn has_only_even_exponents(&self) -> bool {
        self.coeffs.keys().all(|e| e % 2 == 0)
    }

    /// Relabels `z^{2n}` as `y^n`. Odd exponents are rejected.
    pub fn even_to_y(&self, var: &str) -> Result<Self> {
        if let Some(e) = self.coeffs.keys().find(|e| *e % 2 != 0) {
            return Err(Error::InvalidSeries(format!("odd exponent {e} present")));
        }
        let terms = self.coeffs.iter().map(|(e, c)| (e / 2, c.clone()));
        let trunc = if self.is_exact() { EXACT } else { self.trunc.div_euclid(2) };
        Ok(Self::from_terms(var, terms, trunc))
    }

    /// Evaluates the known part at `x`.
    pub fn eval_truncated(&self, x: &F) -> Result<F> {
        let mut acc = F::zero();
        for (e, c) in self.terms() {
            let p = x.powi(e as i64).ok_or_else(|| Error::Pole(format!("{}^{e} at 0", self.var)))?;
            acc = acc + c.clone() * &p;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.terms().map(|(e, c)| json!([e, c.to_string()])).collect();
        let trunc = if self.is_exact() { Value::Null } else { json!(self.trunc) };
        json!({ "var": self.var, "trunc": trunc, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("series JSON: {m}"));
        let var = v["var"].as_str().ok_or_else(|| bad("missing var"))?;
        let trunc = match &v["trunc"] {
            Value::Null => EXACT,
            t => t.as_i64().ok_or_else(|| bad("trunc must be an integer"))? as i32,
        };
        let list = v["coeffs"].as_array().ok_or_else(|| bad("missing coeffs"))?;
        let mut terms = Vec::with_capacity(list.len());
        for item in list {
            let e = item[0].as_i64().ok_or_else(|| bad("exponent must be an integer"))? as i32;
            let c = item[1].as_str().ok_or_else(|| bad("coefficient must be a string"))?;
            if e > trunc {
                return Err(bad("exponent above trunc"));
            }
            terms.push((e, F::parse(c)?));
        }
        Ok(Self::from_terms(var, terms, trunc))
    }
}

impl<F: Field> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·{}", self.var)?,
                _ => write!(f, "{c}·{}^{e}", self.var)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            write!(f, " + O({}^{})", self.var, self.trunc + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn series(terms: &[(i32, i64)], trunc: i32) -> LaurentSeries<Rational> {
        LaurentSeries::from_terms("z", terms.iter().map(|&(e, c)| (e, r(c, 1))), trunc)
    }

    #[test]
    fn geometric_inverse() {
        let s = series(&[(0, 1), (1, -1)], 3);
        let t = s.invert().unwrap();
        assert_eq!(t, series(&[(0, 1), (1, 1), (2, 1), (3, 1)], 3));
    }

    #[test]
    fn monomial_inverse() {
        let s = series(&[(2, 1)], 4);
        let t = s.invert().unwrap();
        assert_eq!(t.valuation(), -2);
        assert_eq!(t.trunc(), 0);
        assert_eq!(t.terms().count(), 1);
    }

    #[test]
    fn product_of_geometric_factors() {
        let (a, b) = (r(3, 2), r(-5, 7));
        let fa = LaurentSeries::from_terms("z", [(0, r(1, 1)), (2, -a.clone())], 8);
        let fb = LaurentSeries::from_terms("z", [(0, r(1, 1)), (2, -b.clone())], 8);
        let inv = fa.mul(&fb).unwrap().invert().unwrap();
        assert_eq!(inv.coeff(2), a + b);
    }

    #[test]
    fn invert_rejects_zero() {
        assert!(LaurentSeries::<Rational>::zero("z", 5).invert().is_err());
    }

    #[test]
    fn product_truncation_rule() {
        let a = series(&[(-2, 1), (0, 3)], 4);
        let b = series(&[(1, 2)], 5);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.trunc(), 3.min(5 - 2));
        assert_eq!(p.coeff(-1), r(2, 1));
    }

    #[test]
    fn division_of_exact_polynomials() {
        // 1 / (1 - z²) to order 6.
        let one = LaurentSeries::constant("z", r(1, 1));
        let den = LaurentSeries::from_terms("z", [(0, r(1, 1)), (2, r(-1, 1))], EXACT);
        let q = one.div_to(&den, 6).unwrap();
        assert_eq!(q, series(&[(0, 1), (2, 1), (4, 1), (6, 1)], 6));
    }

    #[test]
    fn even_relabeling() {
        let s = LaurentSeries::from_terms("z", [(2, r(2, 1)), (4, r(5, 1))], 9);
        let y = s.even_to_y("y").unwrap();
        assert_eq!(y.coeff(1), r(2, 1));
        assert_eq!(y.coeff(2), r(5, 1));
        assert_eq!(y.trunc(), 4);
        assert!(series(&[(1, 1)], 4).even_to_y("y").is_err());
    }

    #[test]
    fn json_roundtrip() {
        let s = LaurentSeries::from_terms("z", [(-2, r(1, 3)), (4, r(-7, 2))], 6);
        let back = LaurentSeries::<Rational>::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let e = LaurentSeries::binomial("z", r(2, 1), 1, r(-1, 2));
        assert_eq!(LaurentSeries::<Rational>::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn mismatched_variables_rejected() {
        let a = series(&[(0, 1)], 3);
        let b = LaurentSeries::from_terms("y", [(0, r(1, 1))], 3);
        assert!(a.add(&b).is_err());
    }
}
