//! Tau functions built from the chain's generating families and the bilinear
//! identities they satisfy.

use std::collections::BTreeMap;
use std::fmt;

use crate::chain::{family_det, ChainParams, Family};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{check_distinct, vandermonde, SquareMatrix};
use crate::miwa::{MiwaPolynomial, MiwaTimes, Monomial};

/// `det_{i,j} F⁽ᵃ⁾ᵢ(vⱼ) / Δ(v)`.
pub fn tau_det<F: Field>(p: &ChainParams<F>, family: Family, u: &[F], points: &[F]) -> Result<F> {
    check_distinct(points)?;
    Ok(family_det(p, family, u, points)? / vandermonde(points))
}

/// The residue form of the same tau function:
/// `(−1)^{M(M−1)/2} det_{i,j} Σ_k v_k^{M−i} F⁽ᵃ⁾ⱼ(v_k) / Π_{m≠k}(v_k − v_m)`.
pub fn tau_residue<F: Field>(p: &ChainParams<F>, family: Family, u: &[F], points: &[F]) -> Result<F> {
    let m = points.len();
    if m != u.len() {
        return Err(Error::Dimension(format!("{m} points for M = {}", u.len())));
    }
    check_distinct(points)?;
    // Residue weights 1/Π_{m≠k}(v_k − v_m) and the values F_j(v_k).
    let mut weights = Vec::with_capacity(m);
    for k in 0..m {
        let mut d = F::one();
        for (l, vl) in points.iter().enumerate() {
            if l != k {
                d = d * (points[k].clone() - vl);
            }
        }
        weights.push(d.inv().ok_or(Error::RepeatedPoint(k, k))?);
    }
    let mut values = Vec::with_capacity(m);
    for vk in points {
        let row = (0..m)
            .map(|j| crate::chain::f_eval(p, family, j, vk, u))
            .collect::<Result<Vec<F>>>()?;
        values.push(row);
    }
    let mat = SquareMatrix::from_fn(m, |i, j| {
        let mut acc = F::zero();
        for k in 0..m {
            let term = points[k].pow((m - 1 - i) as u32) * &values[k][j] * &weights[k];
            acc = acc + term;
        }
        acc
    });
    let d = mat.det();
    Ok(if (m * (m.saturating_sub(1)) / 2) % 2 == 1 { -d } else { d })
}

/// `Σᵢ (−1)ⁱ det F(X∖{xᵢ}) det F(Y∪{xᵢ})` for `|X| = M+1`, `|Y| = M−1`,
/// with `xᵢ` appended after `Y`. Vanishes for every admissible choice.
pub fn pluecker_residual<F: Field>(
    p: &ChainParams<F>,
    family: Family,
    u: &[F],
    x: &[F],
    y: &[F],
) -> Result<F> {
    let m = u.len();
    if m == 0 || x.len() != m + 1 || y.len() != m - 1 {
        return Err(Error::Dimension(format!(
            "need |X| = M+1 and |Y| = M−1 for M = {m}, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    check_distinct(x)?;
    check_distinct(y)?;
    let mut acc = F::zero();
    for i in 0..x.len() {
        let without: Vec<F> = x.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| v.clone()).collect();
        let mut with: Vec<F> = y.to_vec();
        with.push(x[i].clone());
        let term = family_det(p, family, u, &without)? * family_det(p, family, u, &with)?;
        // (−1)^i with 1-based i.
        acc = if i % 2 == 0 { acc - term } else { acc + term };
    }
    Ok(acc)
}

/// A polynomial `P(D₁, D₂, …)` in Hirota derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearOperator<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> BilinearOperator<F> {
    pub fn new(terms: impl IntoIterator<Item = (Vec<u32>, F)>) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            if !c.is_zero() {
                out.insert(Monomial::new(e), c);
            }
        }
        BilinearOperator { terms: out }
    }

    /// The single derivative `D_k`.
    pub fn d(k: usize) -> Self {
        BilinearOperator::new([(Monomial::time(k).exponents().to_vec(), F::one())])
    }

    /// `D₁³ − 4D₃`.
    pub fn d1_cubed_minus_4d3() -> Self {
        BilinearOperator::new([(vec![3], F::one()), (vec![0, 0, 1], F::from_i64(-4))])
    }

    /// `D₁⁴ + 3D₂² − 4D₁D₃ + 3D₁²D₂ − 6D₄`, the weight-four member of the list.
    pub fn weight_four() -> Self {
        BilinearOperator::new([
            (vec![4], F::one()),
            (vec![0, 2], F::from_i64(3)),
            (vec![1, 0, 1], F::from_i64(-4)),
            (vec![2, 1], F::from_i64(3)),
            (vec![0, 0, 0, 1], F::from_i64(-6)),
        ])
    }

    /// `D₁⁴ + 3D₂² − 4D₁D₃`, the KP operator on equal arguments.
    pub fn kp() -> Self {
        BilinearOperator::new([
            (vec![4], F::one()),
            (vec![0, 2], F::from_i64(3)),
            (vec![1, 0, 1], F::from_i64(-4)),
        ])
    }

    /// The four operators whose bilinear forms must vanish, lowest weight first.
    pub fn listed() -> Vec<(&'static str, Self)> {
        vec![
            ("D1", Self::d(1)),
            ("D2", Self::d(2)),
            ("D1^3-4D3", Self::d1_cubed_minus_4d3()),
            ("D1^4+3D2^2-4D1D3+3D1^2D2-6D4", Self::weight_four()),
        ]
    }

    /// Largest weight `Σ k·α_k` among the terms.
    pub fn weight(&self) -> u32 {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }
}

impl<F: Field> fmt::Display for BilinearOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}·{}", m.to_string().replace('t', "D")))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// All exponent vectors `β ≤ α` componentwise.
fn sub_vectors(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for b in 0..=a {
                let mut v = prefix.clone();
                v.push(b);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// `P(D)⟦f, g⟧ = P(∂ₓ) f(t − x) g(t + x)|ₓ₌₀`, truncated to weight
/// `cutoff − weight(P)`, the part fixed by the inputs' truncation.
pub fn hirota_apply<F: Field>(
    op: &BilinearOperator<F>,
    f: &MiwaPolynomial<F>,
    g: &MiwaPolynomial<F>,
) -> MiwaPolynomial<F> {
    let cutoff = f.cutoff().min(g.cutoff());
    let maxtime = f.maxtime().max(g.maxtime());
    let keep = cutoff.saturating_sub(op.weight());
    let mut out = MiwaPolynomial::zero(maxtime, keep);
    let mut cache: BTreeMap<(bool, Vec<u32>), MiwaPolynomial<F>> = BTreeMap::new();
    for (alpha, coeff) in op.terms() {
        let alpha = alpha.exponents();
        for beta in sub_vectors(alpha) {
            let rest: Vec<u32> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
            let mut scalar = coeff.clone();
            let mut odd = false;
            for (a, b) in alpha.iter().zip(&beta) {
                scalar = scalar * F::from_i64(binomial(*a, *b));
                odd ^= b % 2 == 1;
            }
            if odd {
                scalar = -scalar;
            }
            let df = cache
                .entry((false, beta.clone()))
                .or_insert_with(|| f.derivative_multi(&beta).truncate(keep))
                .clone();
            let dg = cache
                .entry((true, rest.clone()))
                .or_insert_with(|| g.derivative_multi(&rest).truncate(keep))
                .clone();
            out = out + (df * dg).scale(&scalar);
        }
    }
    out
}

/// The weight-four bilinear form of `τ` with itself; a KP tau function
/// leaves it zero in every monomial of weight `≤ cutoff − 4`.
pub fn hirota_kp_check<F: Field>(tau: &MiwaPolynomial<F>) -> MiwaPolynomial<F> {
    hirota_apply(&BilinearOperator::weight_four(), tau, tau)
}

/// `ψ_{ab}(t, z) = τ̃⁽ᵃ⁾(t − [z⁻¹]) / τ̃⁽ᵇ⁾(t)`; `z_inv = None` means `z = ∞`.
pub fn baker_akhiezer<F: Field>(
    tau_a: &MiwaPolynomial<F>,
    tau_b: &MiwaPolynomial<F>,
    t: &MiwaTimes<F>,
    z_inv: Option<&F>,
) -> Result<F> {
    let num = match z_inv {
        None => tau_a.eval(t),
        Some(x) => tau_a.shift(x, -1).eval(t),
    };
    let den = tau_b.eval(t);
    num.checked_div(&den, "τ̃ at t")
}

/// A function of one point, as used by the Andreev identity.
pub type PointFn<'a, F> = &'a (dyn Fn(&F) -> F + Sync);

/// `det(Σ_z μ(z) fᵢ(z) gⱼ(z)) − (1/M!) Σ_{z₁…z_M} Π μ(z_k) det fⱼ(z_k) det gⱼ(z_k)`
/// over a finite measure; vanishes identically.
pub fn andreev_residual<F: Field>(measure: &[(F, F)], fs: &[PointFn<'_, F>], gs: &[PointFn<'_, F>]) -> Result<F> {
    let m = fs.len();
    if m == 0 || gs.len() != m {
        return Err(Error::Dimension(format!("{} f's and {} g's", fs.len(), gs.len())));
    }
    if measure.len() < m {
        return Err(Error::Dimension(format!("measure has {} points, need at least {m}", measure.len())));
    }
    let fv: Vec<Vec<F>> = measure.iter().map(|(z, _)| fs.iter().map(|f| f(z)).collect()).collect();
    let gv: Vec<Vec<F>> = measure.iter().map(|(z, _)| gs.iter().map(|g| g(z)).collect()).collect();
    let lhs = SquareMatrix::from_fn(m, |i, j| {
        measure
            .iter()
            .enumerate()
            .fold(F::zero(), |acc, (k, (_, mu))| acc + mu.clone() * &fv[k][i] * &gv[k][j])
    })
    .det();
    let mut rhs = F::zero();
    let mut tuple = vec![0usize; m];
    let n = measure.len();
    loop {
        let distinct = (0..m).all(|a| (a + 1..m).all(|b| tuple[a] != tuple[b]));
        if distinct {
            let weight = tuple.iter().fold(F::one(), |acc, &k| acc * &measure[k].1);
            let df = SquareMatrix::from_fn(m, |a, j| fv[tuple[a]][j].clone()).det();
            let dg = SquareMatrix::from_fn(m, |a, j| gv[tuple[a]][j].clone()).det();
            rhs = rhs + weight * df * dg;
        }
        // Next tuple in base-n counting.
        let mut pos = 0;
        while pos < m {
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    let factorial = (1..=m as i64).fold(1i64, |a, b| a * b);
    Ok(lhs - rhs * F::from_ratio(1, factorial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::miwa::{DEFAULT_CUTOFF, DEFAULT_MAXTIME};

    type P = MiwaPolynomial<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn t(k: usize) -> P {
        P::time(k, DEFAULT_MAXTIME, DEFAULT_CUTOFF)
    }

    #[test]
    fn hirota_hand_example() {
        let f = t(1);
        let g = t(1) * t(1);
        let out = hirota_apply(&BilinearOperator::d(1), &f, &g);
        assert_eq!(out, (t(1) * t(1)).truncate(DEFAULT_CUTOFF - 1));
    }

    #[test]
    fn odd_operators_kill_equal_arguments() {
        let f = t(1) * t(2) + t(3) - t(1) * t(1) * t(1) * t(1) + P::constant(r(2, 1), DEFAULT_MAXTIME, DEFAULT_CUTOFF);
        assert!(hirota_apply(&BilinearOperator::d(1), &f, &f).is_empty());
        assert!(hirota_apply(&BilinearOperator::d1_cubed_minus_4d3(), &f, &f).is_empty());
    }

    #[test]
    fn kp_check_on_simple_taus() {
        let one = P::constant(r(1, 1), DEFAULT_MAXTIME, DEFAULT_CUTOFF);
        assert!(hirota_kp_check(&one).is_empty());
        let lin = one + t(1);
        assert!(hirota_kp_check(&lin).is_empty());
        assert_eq!(
            hirota_apply(&BilinearOperator::weight_four(), &lin, &lin),
            hirota_apply(&BilinearOperator::kp(), &lin, &lin)
        );
    }

    #[test]
    fn kp_check_detects_non_tau() {
        // t₁² + t₂·5 is not a tau function: its KP form has a nonzero constant.
        let f = t(1) * t(1) + t(2).scale(&r(5, 1));
        assert!(!hirota_kp_check(&f).is_empty());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(3, 3), 1);
    }

    #[test]
    fn andreev_single_function() {
        let measure = vec![(r(1, 1), r(2, 1)), (r(3, 1), r(1, 5))];
        let f = |z: &Rational| z.clone() * z;
        let g = |z: &Rational| z.clone() + r(1, 1);
        let res = andreev_residual(&measure, &[&f], &[&g]).unwrap();
        assert_eq!(res, r(0, 1));
    }
}
