//! Polynomials in a fixed number of variables, truncated by total degree.
//! Used to move between the Miwa-time picture and Schur expansions in `M`
//! points, where the Schur functions of at most `M` rows form a basis.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, RingElement};
use crate::matrix::SquareMatrix;
use crate::miwa::MiwaPolynomial;

use super::partition::Partition;

#[derive(Clone, Debug, PartialEq)]
pub struct SymPoly<F> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> SymPoly<F> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        SymPoly { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: F, nvars: usize, degree: u32) -> Self {
        let mut p = Self::zero(nvars, degree);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `w_i` (0-based).
    pub fn var(i: usize, nvars: usize, degree: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars, degree);
        p.add_term(e, F::one());
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: F) {
        if c.is_zero() || e.iter().sum::<u32>() > self.degree {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn scale(&self, k: &F) -> Self {
        let mut p = Self::zero(self.nvars, self.degree);
        for (e, c) in self.terms() {
            p.add_term(e.clone(), c.clone() * k);
        }
        p
    }

    pub fn eval(&self, w: &[F]) -> F {
        let mut acc = F::zero();
        for (e, c) in self.terms() {
            let mut term = c.clone();
            for (x, k) in w.iter().zip(e) {
                if *k > 0 {
                    term = term * x.pow(*k);
                }
            }
            acc = acc + term;
        }
        acc
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut p = Self::zero(self.nvars, self.degree.min(other.degree));
        for (e, c) in self.terms() {
            p.add_term(e.clone(), c.clone());
        }
        for (e, c) in other.terms() {
            p.add_term(e.clone(), if negate { -c.clone() } else { c.clone() });
        }
        p
    }

    fn product(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut p = Self::zero(self.nvars, self.degree.min(other.degree));
        for (e1, c1) in self.terms() {
            let d1: u32 = e1.iter().sum();
            for (e2, c2) in other.terms() {
                if d1 + e2.iter().sum::<u32>() > p.degree {
                    continue;
                }
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2);
            }
        }
        p
    }
}

impl<'a, F: Field> Add<&'a SymPoly<F>> for SymPoly<F> {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        self.combine(rhs, false)
    }
}

impl<'a, F: Field> Sub<&'a SymPoly<F>> for SymPoly<F> {
    type Output = Self;
    fn sub(self, rhs: &'a Self) -> Self {
        self.combine(rhs, true)
    }
}

impl<'a, F: Field> Mul<&'a SymPoly<F>> for SymPoly<F> {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        self.product(rhs)
    }
}

impl<F: Field> Add for SymPoly<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(&rhs, false)
    }
}

impl<F: Field> Sub for SymPoly<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&rhs, true)
    }
}

impl<F: Field> Mul for SymPoly<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.product(&rhs)
    }
}

impl<F: Field> Neg for SymPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(e, c)| (e, -c)).collect();
        SymPoly { nvars: self.nvars, degree: self.degree, terms }
    }
}

impl<F: Field> RingElement for SymPoly<F> {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.degree)
    }

    fn one_like(&self) -> Self {
        Self::constant(F::one(), self.nvars, self.degree)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Schur polynomials in a fixed number of variables, with cached complete
/// homogeneous polynomials and power sums.
pub struct SchurBasis<F> {
    nvars: usize,
    degree: u32,
    h: Vec<SymPoly<F>>,
    power_sums: Vec<SymPoly<F>>,
    cache: HashMap<Partition, SymPoly<F>>,
}

impl<F: Field> SchurBasis<F> {
    pub fn new(nvars: usize, degree: u32) -> Self {
        assert!(nvars >= 1, "need at least one variable");
        // h_k(w_1..w_i) = h_k(w_1..w_{i-1}) + w_i h_{k-1}(w_1..w_i).
        let d = degree as usize;
        let mut h: Vec<SymPoly<F>> = (0..=d)
            .map(|k| if k == 0 { SymPoly::constant(F::one(), nvars, degree) } else { SymPoly::zero(nvars, degree) })
            .collect();
        for i in 0..nvars {
            let wi = SymPoly::var(i, nvars, degree);
            for k in 1..=d {
                let add = wi.clone() * &h[k - 1];
                h[k] = h[k].clone() + add;
            }
        }
        let power_sums = (0..=d)
            .map(|k| {
                if k == 0 {
                    return SymPoly::constant(F::from_i64(nvars as i64), nvars, degree);
                }
                let mut p = SymPoly::zero(nvars, degree);
                for i in 0..nvars {
                    let mut e = vec![0; nvars];
                    e[i] = k as u32;
                    p.add_term(e, F::one());
                }
                p
            })
            .collect();
        SchurBasis { nvars, degree, h, power_sums, cache: HashMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn h(&self, k: i64) -> SymPoly<F> {
        if k < 0 || k > self.degree as i64 {
            SymPoly::zero(self.nvars, self.degree)
        } else {
            self.h[k as usize].clone()
        }
    }

    /// `s_λ(w₁ … w_M)` by Jacobi-Trudi; zero when `λ` has more than `M` rows.
    pub fn schur(&mut self, lambda: &Partition) -> SymPoly<F> {
        if let Some(s) = self.cache.get(lambda) {
            return s.clone();
        }
        let s = if lambda.len() > self.nvars || lambda.size() > self.degree {
            SymPoly::zero(self.nvars, self.degree)
        } else if lambda.is_empty() {
            SymPoly::constant(F::one(), self.nvars, self.degree)
        } else {
            let l = lambda.len();
            let m = SquareMatrix::from_fn(l, |i, j| {
                self.h(lambda.part(i + 1) as i64 - i as i64 + j as i64)
            });
            m.det_ring()
        };
        self.cache.insert(lambda.clone(), s.clone());
        s
    }

    /// Substitutes `t_k = p_k(w)/k` into a Miwa polynomial.
    pub fn from_miwa(&self, f: &MiwaPolynomial<F>) -> SymPoly<F> {
        let mut out = SymPoly::zero(self.nvars, self.degree);
        let mut powers: HashMap<(usize, u32), SymPoly<F>> = HashMap::new();
        for (m, c) in f.terms() {
            if m.weight() > self.degree {
                continue;
            }
            let mut term = SymPoly::constant(c.clone(), self.nvars, self.degree);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let k = i + 1;
                let factor = powers.entry((k, e)).or_insert_with(|| {
                    let tk = self.power_sums[k].scale(&F::from_ratio(1, k as i64));
                    let mut acc = SymPoly::constant(F::one(), self.nvars, self.degree);
                    for _ in 0..e {
                        acc = acc * &tk;
                    }
                    acc
                });
                term = term * &*factor;
            }
            out = out + term;
        }
        out
    }

    /// Writes a symmetric polynomial as `Σ a_λ s_λ(w)` by repeatedly removing
    /// the lexicographically leading monomial, which for a symmetric
    /// polynomial is `w^λ` for a partition `λ`.
    pub fn decompose(&mut self, f: &SymPoly<F>) -> Result<BTreeMap<Partition, F>> {
        let mut rest = f.clone();
        let mut out = BTreeMap::new();
        while let Some((lead, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let lambda = Partition::new(lead.clone()).map_err(|_| {
                Error::Domain(format!("polynomial is not symmetric: leading monomial {lead:?}"))
            })?;
            let s = self.schur(&lambda).scale(&c);
            rest = rest - s;
            out.insert(lambda, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::miwa::MiwaPolynomial;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn schur_in_two_variables() {
        let mut b = SchurBasis::<Rational>::new(2, 6);
        let w = [Rational::from_i64(2), Rational::from_i64(3)];
        assert_eq!(b.schur(&p(&[1])).eval(&w), Rational::from_i64(5));
        // s_(2,1)(x,y) = x²y + xy² = 12 + 18.
        assert_eq!(b.schur(&p(&[2, 1])).eval(&w), Rational::from_i64(30));
        assert!(b.schur(&p(&[1, 1, 1])).is_zero());
    }

    #[test]
    fn decomposition_of_products() {
        let mut b = SchurBasis::<Rational>::new(3, 6);
        // s_1 · s_1 = s_2 + s_11.
        let s1 = b.schur(&p(&[1]));
        let d = b.decompose(&(s1.clone() * &s1)).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&p(&[2])], Rational::from_i64(1));
        assert_eq!(d[&p(&[1, 1])], Rational::from_i64(1));
        // s_1 · s_21 = s_31 + s_22 + s_211.
        let s21 = b.schur(&p(&[2, 1]));
        let d = b.decompose(&(s1 * &s21)).unwrap();
        assert_eq!(d.keys().cloned().collect::<Vec<_>>(), vec![p(&[2, 1, 1]), p(&[2, 2]), p(&[3, 1])]);
    }

    #[test]
    fn rejects_non_symmetric() {
        let mut b = SchurBasis::<Rational>::new(2, 3);
        let x = SymPoly::var(1, 2, 3);
        assert!(b.decompose(&x).is_err());
    }

    #[test]
    fn miwa_substitution() {
        let b = SchurBasis::<Rational>::new(2, 4);
        let t2 = MiwaPolynomial::<Rational>::time(2, 4, 4);
        let w = [Rational::from_i64(2), Rational::from_i64(3)];
        assert_eq!(b.from_miwa(&t2).eval(&w), Rational::from_ratio(13, 2));
    }
}
