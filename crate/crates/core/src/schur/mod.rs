//! Schur functions, the Cauchy-Binet expansion of the chain's tau functions
//! and the Schur form of the normalized Slavnov product.
//!
//! Throughout, `w = v²` and the tau functions are
//! `τ̃⁽ᵃ⁾(w) = det φ⁽ᵃ⁾ⱼ(wᵢ) / Δ(w)` with `φ⁽¹⁾ = w^{N−1} F⁽¹⁾` and
//! `φ⁽²⁾ = F⁽²⁾ / w`, so that `kernel = Πⱼ wⱼ^{−N} · τ̃⁽¹⁾/τ̃⁽²⁾`.

mod partition;
mod sympoly;

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::chain::{f_eval, f_series, ChainParams, Family};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{check_distinct, vandermonde, SquareMatrix};
use crate::miwa::{MiwaPolynomial, Monomial};

pub use partition::{Frobenius, Partition};
pub use sympoly::{SchurBasis, SymPoly};

/// Default bound on `|λ|`.
pub const DEFAULT_SCHUR_CUTOFF: u32 = 8;

/// `s_λ(v₁ … v_M) = det(vᵢ^{λⱼ−j+M}) / Δ(v)`; zero when `λ` has more than `M` rows.
pub fn schur_points<F: Field>(lambda: &Partition, points: &[F]) -> Result<F> {
    check_distinct(points)?;
    let m = points.len();
    let Some(ell) = lambda.shifted(m) else {
        return Ok(F::zero());
    };
    let num = SquareMatrix::from_fn(m, |i, j| points[i].pow(ell[j])).det();
    Ok(num / vandermonde(points))
}

/// Complete homogeneous `h₀ … h_D` in the Miwa times, from
/// `j h_j = Σ_k k t_k h_{j−k}`.
pub fn h_polynomials<F: Field>(cutoff: u32) -> Vec<MiwaPolynomial<F>> {
    newton_recursion(cutoff, false)
}

/// Elementary `e₀ … e_D`, from `j e_j = Σ_k (−1)^{k−1} k t_k e_{j−k}`.
pub fn e_polynomials<F: Field>(cutoff: u32) -> Vec<MiwaPolynomial<F>> {
    newton_recursion(cutoff, true)
}

fn newton_recursion<F: Field>(cutoff: u32, alternate: bool) -> Vec<MiwaPolynomial<F>> {
    let d = cutoff as usize;
    let mut out = vec![MiwaPolynomial::constant(F::one(), d, cutoff)];
    for j in 1..=d {
        let mut acc = MiwaPolynomial::zero(d, cutoff);
        for k in 1..=j {
            let sign = if alternate && k % 2 == 0 { -1 } else { 1 };
            let tk = MiwaPolynomial::time(k, d, cutoff).scale(&F::from_i64(sign * k as i64));
            acc = acc + tk * &out[j - k];
        }
        out.push(acc.scale(&F::from_ratio(1, j as i64)));
    }
    out
}

/// `s_λ(t)` as a polynomial in the Miwa times, by Jacobi-Trudi in whichever
/// of `h` (length of `λ`) or `e` (length of `λ'`) gives the smaller matrix.
pub fn schur_miwa<F: Field>(lambda: &Partition, cutoff: u32) -> Result<MiwaPolynomial<F>> {
    if lambda.size() > cutoff {
        return Err(Error::Domain(format!("|{lambda}| exceeds the cutoff {cutoff}")));
    }
    let conj = lambda.conjugate();
    let (shape, gen) = if conj.len() < lambda.len() {
        (conj, e_polynomials::<F>(cutoff))
    } else {
        (lambda.clone(), h_polynomials::<F>(cutoff))
    };
    Ok(jacobi_trudi(&shape, &gen, cutoff))
}

fn jacobi_trudi<F: Field>(shape: &Partition, gen: &[MiwaPolynomial<F>], cutoff: u32) -> MiwaPolynomial<F> {
    let d = cutoff as usize;
    if shape.is_empty() {
        return MiwaPolynomial::constant(F::one(), d, cutoff);
    }
    let at = |k: i64| {
        if k < 0 || k as usize >= gen.len() {
            MiwaPolynomial::zero(d, cutoff)
        } else {
            gen[k as usize].clone()
        }
    };
    let l = shape.len();
    SquareMatrix::from_fn(l, |i, j| at(shape.part(i + 1) as i64 - i as i64 + j as i64)).det_ring()
}

/// Coefficients `c_λ` of an expansion `Σ c_λ s_λ`, restricted to
/// `|λ| ≤ cutoff` and at most `max_len` rows. Zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurCoeffMap<F> {
    max_len: usize,
    cutoff: u32,
    entries: BTreeMap<Partition, F>,
}

impl<F: Field> SchurCoeffMap<F> {
    pub fn new(max_len: usize, cutoff: u32) -> Self {
        SchurCoeffMap { max_len, cutoff, entries: BTreeMap::new() }
    }

    pub fn from_entries(
        max_len: usize,
        cutoff: u32,
        entries: impl IntoIterator<Item = (Partition, F)>,
    ) -> Result<Self> {
        let mut map = Self::new(max_len, cutoff);
        for (lambda, c) in entries {
            map.insert(lambda, c)?;
        }
        Ok(map)
    }

    pub fn insert(&mut self, lambda: Partition, c: F) -> Result<()> {
        if lambda.len() > self.max_len || lambda.size() > self.cutoff {
            return Err(Error::Domain(format!(
                "{lambda} outside |λ| ≤ {}, ℓ(λ) ≤ {}",
                self.cutoff, self.max_len
            )));
        }
        if c.is_zero() {
            self.entries.remove(&lambda);
        } else {
            self.entries.insert(lambda, c);
        }
        Ok(())
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn get(&self, lambda: &Partition) -> F {
        self.entries.get(lambda).cloned().unwrap_or_else(F::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Partition, &F)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ c_λ s_λ(points)`.
    pub fn eval_points(&self, points: &[F]) -> Result<F> {
        let mut acc = F::zero();
        for (lambda, c) in self.entries() {
            acc = acc + schur_points(lambda, points)? * c;
        }
        Ok(acc)
    }

    /// `Σ c_λ s_λ(t)` truncated at weight `cutoff`.
    pub fn to_miwa(&self, cutoff: u32) -> MiwaPolynomial<F> {
        let h = h_polynomials::<F>(cutoff);
        let e = e_polynomials::<F>(cutoff);
        let mut out = MiwaPolynomial::zero(cutoff as usize, cutoff);
        for (lambda, c) in self.entries() {
            if lambda.size() > cutoff {
                continue;
            }
            let conj = lambda.conjugate();
            let s = if conj.len() < lambda.len() {
                jacobi_trudi(&conj, &e, cutoff)
            } else {
                jacobi_trudi(lambda, &h, cutoff)
            };
            out = out + s.scale(c);
        }
        out
    }

    /// `Σ c_λ s_λ(w)` as a polynomial in the `basis` variables.
    pub fn to_sympoly(&self, basis: &mut SchurBasis<F>) -> SymPoly<F> {
        let mut out = SymPoly::zero(basis.nvars(), basis.degree());
        for (lambda, c) in self.entries() {
            out = out + basis.schur(lambda).scale(c);
        }
        out
    }

    fn from_decomposition(max_len: usize, cutoff: u32, d: BTreeMap<Partition, F>) -> Result<Self> {
        Self::from_entries(max_len, cutoff, d)
    }

    /// JSON list of `{partition, coeff}` with exact coefficient strings.
    pub fn to_json(&self) -> Value {
        let list: Vec<Value> = self
            .entries()
            .map(|(l, c)| json!({ "partition": l.parts(), "coeff": c.to_string() }))
            .collect();
        Value::Array(list)
    }

    pub fn from_json(v: &Value, max_len: usize, cutoff: u32) -> Result<Self> {
        let bad = || Error::Parse("expected a list of {partition, coeff}".into());
        let mut map = Self::new(max_len, cutoff);
        for item in v.as_array().ok_or_else(bad)? {
            let parts: Vec<u32> = serde_json::from_value(item.get("partition").cloned().ok_or_else(bad)?)
                .map_err(|e| Error::Parse(e.to_string()))?;
            let coeff = F::parse(item.get("coeff").and_then(Value::as_str).ok_or_else(bad)?)?;
            map.insert(Partition::new(parts)?, coeff)?;
        }
        Ok(map)
    }
}

/// The table `f̂⁽ᵃ⁾_{i,n}`, `n = 0 … max_index`, of the series
/// `φ⁽ᵃ⁾ᵢ(w) = Σ_n f̂_{i,n} wⁿ`.
pub fn coefficient_table<F: Field>(
    p: &ChainParams<F>,
    family: Family,
    u: &[F],
    max_index: u32,
) -> Result<Vec<Vec<F>>> {
    let n = p.n() as i32;
    let top = max_index as i32;
    // Exponent of y holding f̂_{i,n} is n + offset.
    let offset = match family {
        Family::One => 1 - n,
        Family::Two => 1,
    };
    let order = 2 * (top + offset);
    (0..u.len())
        .map(|i| {
            let y = f_series(p, family, i, u, order)?.even_to_y("y")?;
            Ok((0..=top).map(|k| y.coeff(k + offset)).collect())
        })
        .collect()
}

/// `c⁽ᵃ⁾_λ = det f̂⁽ᵃ⁾_{i, λⱼ−j+M}`, the Plücker coordinates of the tau function
/// `τ̃⁽ᵃ⁾(w) = Σ_λ c_λ s_λ(w)`, for `|λ| ≤ cutoff` and `ℓ(λ) ≤ M`.
pub fn cauchy_binet_coeffs<F: Field>(
    p: &ChainParams<F>,
    family: Family,
    u: &[F],
    cutoff: u32,
) -> Result<SchurCoeffMap<F>> {
    let m = u.len();
    let table = coefficient_table(p, family, u, cutoff + m.saturating_sub(1) as u32)?;
    minors(&table, m, cutoff)
}

/// The same minors taken in `z` rather than `y`: rows are the coefficients of
/// `z^{2N−2} F⁽¹⁾ᵢ(z)` or `F⁽²⁾ᵢ(z)`. Only even shifted parts can contribute.
pub fn cauchy_binet_coeffs_z<F: Field>(
    p: &ChainParams<F>,
    family: Family,
    u: &[F],
    cutoff: u32,
) -> Result<SchurCoeffMap<F>> {
    let m = u.len();
    let top = (cutoff + m.saturating_sub(1) as u32) as i32;
    let shift = match family {
        Family::One => 2 * p.n() as i32 - 2,
        Family::Two => 0,
    };
    let table = (0..m)
        .map(|i| {
            let s = f_series(p, family, i, u, top - shift)?;
            Ok((0..=top).map(|k| s.coeff(k - shift)).collect())
        })
        .collect::<Result<Vec<Vec<F>>>>()?;
    minors(&table, m, cutoff)
}

fn minors<F: Field>(table: &[Vec<F>], m: usize, cutoff: u32) -> Result<SchurCoeffMap<F>> {
    let mut map = SchurCoeffMap::new(m, cutoff);
    for lambda in Partition::all_up_to(cutoff, m) {
        let ell = lambda.shifted(m).expect("length bounded by enumeration");
        let c = SquareMatrix::from_fn(m, |i, j| table[i][ell[j] as usize].clone()).det();
        map.insert(lambda, c)?;
    }
    Ok(map)
}

/// `τ̃⁽ᵃ⁾` evaluated directly at `w = v²` for the given `v`.
pub fn tau_tilde<F: Field>(p: &ChainParams<F>, family: Family, u: &[F], v: &[F]) -> Result<F> {
    let m = u.len();
    if v.len() != m {
        return Err(Error::Dimension(format!("{} points for M = {m}", v.len())));
    }
    let w: Vec<F> = v.iter().map(|x| x.clone() * x).collect();
    check_distinct(&w)?;
    let n = p.n() as i64;
    let mat = SquareMatrix::try_from_fn(m, |i, j| {
        let f = f_eval(p, family, j, &v[i], u)?;
        let scale = match family {
            Family::One => w[i].powi(n - 1),
            Family::Two => w[i].inv(),
        };
        Ok(f * scale.ok_or_else(|| Error::Pole(format!("w{} = 0", i + 1)))?)
    })?;
    Ok(mat.det() / vandermonde(&w))
}

/// The reciprocal of `Σ c_λ s_λ(w)` in `M = c.max_len()` variables, expanded
/// back in Schur functions up to weight `cutoff`.
pub fn schur_series_invert<F: Field>(c: &SchurCoeffMap<F>, cutoff: u32) -> Result<SchurCoeffMap<F>> {
    let mut basis = SchurBasis::new(c.max_len().max(1), cutoff);
    let inv = invert_sympoly(&c.to_sympoly(&mut basis))?;
    SchurCoeffMap::from_decomposition(c.max_len(), cutoff, basis.decompose(&inv)?)
}

/// Product of two Schur expansions, re-expanded.
pub fn schur_product<F: Field>(
    a: &SchurCoeffMap<F>,
    b: &SchurCoeffMap<F>,
    cutoff: u32,
) -> Result<SchurCoeffMap<F>> {
    let m = a.max_len().max(b.max_len()).max(1);
    let mut basis = SchurBasis::new(m, cutoff);
    let prod = a.to_sympoly(&mut basis) * b.to_sympoly(&mut basis);
    SchurCoeffMap::from_decomposition(m, cutoff, basis.decompose(&prod)?)
}

fn invert_sympoly<F: Field>(f: &SymPoly<F>) -> Result<SymPoly<F>> {
    let zero = vec![0; f.nvars()];
    let c0 = f
        .terms()
        .find(|(e, _)| **e == zero)
        .map(|(_, c)| c.clone())
        .ok_or_else(|| Error::InvalidSeries("constant Schur coefficient vanishes, cannot invert".into()))?;
    let c0_inv = c0.inv().expect("nonzero constant");
    let one = SymPoly::constant(F::one(), f.nvars(), f.degree());
    let neg_g = one.clone() - f.scale(&c0_inv);
    let mut sum = one.clone();
    let mut power = one;
    for _ in 0..f.degree() {
        power = power * &neg_g;
        if power.terms().next().is_none() {
            break;
        }
        sum = sum + &power;
    }
    Ok(sum.scale(&c0_inv))
}

/// `A_λ` with `kernel(u, v) = Πⱼ wⱼ^{−N} Σ_λ A_λ s_λ(w)` up to `|λ| ≤ cutoff`.
pub fn slavnov_schur_coeffs<F: Field>(p: &ChainParams<F>, u: &[F], cutoff: u32) -> Result<SchurCoeffMap<F>> {
    let c1 = cauchy_binet_coeffs(p, Family::One, u, cutoff)?;
    let c2 = cauchy_binet_coeffs(p, Family::Two, u, cutoff)?;
    schur_product(&c1, &schur_series_invert(&c2, cutoff)?, cutoff)
}

/// `Π wⱼ^{−N} Σ A_λ s_λ(w)` at `w = v²`.
pub fn kernel_from_schur<F: Field>(p: &ChainParams<F>, a: &SchurCoeffMap<F>, v: &[F]) -> Result<F> {
    let w: Vec<F> = v.iter().map(|x| x.clone() * x).collect();
    let mut pref = F::one();
    for x in &w {
        pref = pref * x.powi(-(p.n() as i64)).ok_or_else(|| Error::Pole("w = 0".into()))?;
    }
    Ok(pref * a.eval_points(&w)?)
}

/// A Miwa monomial's weight, re-exported for callers that iterate over
/// Schur-expanded tau polynomials.
pub fn monomial_weight(m: &Monomial) -> u32 {
    m.weight()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::kernel;
    use crate::field::Rational;
    use crate::miwa::MiwaTimes;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn low_schur_polynomials() {
        let h = h_polynomials::<Rational>(4);
        let t1 = MiwaPolynomial::<Rational>::time(1, 4, 4);
        let t2 = MiwaPolynomial::<Rational>::time(2, 4, 4);
        assert_eq!(h[1], t1.clone());
        let h2 = (t1.clone() * &t1).scale(&r(1, 2)) + &t2;
        assert_eq!(h[2], h2);
        let s11 = schur_miwa::<Rational>(&p(&[1, 1]), 4).unwrap();
        assert_eq!(s11, (t1.clone() * &t1).scale(&r(1, 2)) - &t2);
        assert_eq!(schur_miwa::<Rational>(&p(&[1]), 4).unwrap(), t1);
    }

    #[test]
    fn bialternant_matches_miwa() {
        let pts = [r(2, 1), r(-1, 3), r(5, 7)];
        for lambda in Partition::all_up_to(5, 3) {
            let a = schur_points(&lambda, &pts).unwrap();
            let b = schur_miwa::<Rational>(&lambda, 5).unwrap().eval(&MiwaTimes::from_points(&pts, 5));
            assert_eq!(a, b, "{lambda}");
        }
        assert_eq!(schur_points(&Partition::empty(), &pts).unwrap(), r(1, 1));
        assert_eq!(schur_points(&p(&[1]), &[r(2, 1), r(3, 1)]).unwrap(), r(5, 1));
        assert!(schur_points(&p(&[1]), &[r(2, 1), r(2, 1)]).is_err());
    }

    #[test]
    fn inversion_small_cases() {
        let one = SchurCoeffMap::from_entries(2, 4, [(Partition::empty(), r(1, 1))]).unwrap();
        assert_eq!(schur_series_invert(&one, 4).unwrap(), one);
        let a = r(3, 5);
        let c = SchurCoeffMap::from_entries(2, 4, [(Partition::empty(), r(1, 1)), (p(&[1]), a.clone())]).unwrap();
        let inv = schur_series_invert(&c, 4).unwrap();
        assert_eq!(inv.get(&p(&[1])), -a);
        assert_eq!(schur_product(&c, &inv, 4).unwrap(), one);
        let zero_const = SchurCoeffMap::from_entries(1, 3, [(p(&[1]), r(1, 1))]).unwrap();
        assert!(schur_series_invert(&zero_const, 3).is_err());
    }

    #[test]
    fn one_row_coefficients_are_table_entries() {
        let params = ChainParams::spin_half(2, 1, r(2, 1)).unwrap();
        let u = [r(1, 3)];
        let table = coefficient_table(&params, Family::Two, &u, 4).unwrap();
        let c = cauchy_binet_coeffs(&params, Family::Two, &u, 4).unwrap();
        for n in 0..=4u32 {
            assert_eq!(c.get(&p(&[n])), table[0][n as usize]);
        }
    }

    #[test]
    fn constant_of_normalized_product() {
        let params = ChainParams::spin_half(2, 2, r(3, 2)).unwrap();
        let u = [r(1, 3), r(2, 5)];
        let a = slavnov_schur_coeffs(&params, &u, 3).unwrap();
        let c1 = cauchy_binet_coeffs(&params, Family::One, &u, 0).unwrap();
        let c2 = cauchy_binet_coeffs(&params, Family::Two, &u, 0).unwrap();
        assert_eq!(a.get(&Partition::empty()), c1.get(&Partition::empty()) / c2.get(&Partition::empty()));
    }

    #[test]
    fn tau_tilde_quotient_is_kernel() {
        let params = ChainParams::spin_half(3, 2, r(2, 1)).unwrap();
        let u = [r(1, 3), r(-2, 5)];
        let v = [r(3, 7), r(5, 11)];
        let t1 = tau_tilde(&params, Family::One, &u, &v).unwrap();
        let t2 = tau_tilde(&params, Family::Two, &u, &v).unwrap();
        let w: Vec<Rational> = v.iter().map(|x| x.clone() * x).collect();
        let pref = w.iter().fold(r(1, 1), |acc, x| acc * x.powi(-3).unwrap());
        assert_eq!(pref * t1 / t2, kernel(&params, &u, &v).unwrap());
    }

    #[test]
    fn json_shape() {
        let c = SchurCoeffMap::from_entries(2, 3, [(p(&[2, 1]), r(-1, 2))]).unwrap();
        let j = c.to_json();
        assert_eq!(j, serde_json::json!([{ "partition": [2, 1], "coeff": "-1/2" }]));
        assert_eq!(SchurCoeffMap::<Rational>::from_json(&j, 2, 3).unwrap(), c);
        assert!(SchurCoeffMap::from_entries(1, 3, [(p(&[1, 1]), r(1, 1))]).is_err());
    }
}
