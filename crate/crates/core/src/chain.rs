//! The open Temperley-Lieb chain: parameters, the transfer-matrix eigenvalue
//! `Λ(v, u)`, its derivatives in the Bethe roots, the two generating families
//! `F⁽¹⁾`, `F⁽²⁾`, and the Slavnov product.
//!
//! With `w(x) = x − 1/x` the eigenvalue is
//!
//! ```text
//! Λ(v) = A(v) Πⱼ aⱼ(v) + B(v) Πⱼ bⱼ(v)
//! A(v) = −w(v²q²) w(vq)^{2N} / w(v²q)        B(v) = −w(v²) w(v)^{2N} / w(v²q)
//! aⱼ(v) = w(v/(q uⱼ)) w(v uⱼ) / (w(v/uⱼ) w(v q uⱼ))
//! bⱼ(v) = w(v q/uⱼ) w(v q² uⱼ) / (w(v/uⱼ) w(v q uⱼ))
//! ```
//!
//! Every quantity is written once against [`Spectral`], which is implemented
//! both for evaluation at a point and for Laurent expansion about `v = 0`.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::field::{w, Field};
use crate::matrix::{check_distinct, SquareMatrix};
use crate::series::LaurentSeries;

/// Chain data: sites `N`, magnons `M`, spin `s = spin_twice/2`, deformation
/// `q` and boundary parameter `Q`, tied by `Σ_{k=−s}^{s} Q^{2k} = −(q + 1/q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainParams<F> {
    n: usize,
    m: usize,
    spin_twice: u32,
    q: F,
    big_q: F,
}

/// Which root of `q² + c q + 1 = 0` to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QBranch {
    /// The root of larger magnitude (for spin 1/2 and `|Q| > 1` this is `q = −Q`).
    Large,
    Small,
}

/// `Σ_{i=0}^{2s} Q^{2i−2s}`.
pub fn boundary_sum<F: Field>(big_q: &F, spin_twice: u32) -> Result<F> {
    let mut acc = F::zero();
    for i in 0..=spin_twice as i64 {
        let p = big_q
            .powi(2 * i - spin_twice as i64)
            .ok_or_else(|| Error::Pole("Q".into()))?;
        acc = acc + p;
    }
    Ok(acc)
}

impl<F: Field> ChainParams<F> {
    pub fn new(n: usize, m: usize, spin_twice: u32, q: F, big_q: F) -> Result<Self> {
        if n == 0 {
            return Err(Error::Inadmissible("N must be at least 1".into()));
        }
        if m > n {
            return Err(Error::Inadmissible(format!("M = {m} exceeds N = {n}")));
        }
        if spin_twice == 0 {
            return Err(Error::Inadmissible("spin must be at least 1/2".into()));
        }
        if q.is_negligible() || (q.clone() - F::one()).is_negligible() || (q.clone() + F::one()).is_negligible() {
            return Err(Error::Inadmissible("q must avoid 0 and ±1".into()));
        }
        if big_q.is_negligible() {
            return Err(Error::Inadmissible("Q must be nonzero".into()));
        }
        let lhs = boundary_sum(&big_q, spin_twice)?;
        let rhs = -(q.clone() + q.inv().expect("q nonzero"));
        if !lhs.approx_eq(&rhs) {
            return Err(Error::BoundaryConstraint(format!(
                "Σ Q^(2k) = {lhs} but −(q + 1/q) = {rhs}"
            )));
        }
        Ok(ChainParams { n, m, spin_twice, q, big_q })
    }

    /// Derives `q` from `Q` by solving `q + 1/q = −c`, `c = Σ_{k=−s}^{s} Q^{2k}`.
    /// Needs the quadratic field (or floats) when `c² − 4` is not a rational square.
    pub fn from_boundary(n: usize, m: usize, spin_twice: u32, big_q: F, branch: QBranch) -> Result<Self> {
        if big_q.is_negligible() {
            return Err(Error::Inadmissible("Q must be nonzero".into()));
        }
        let c = boundary_sum(&big_q, spin_twice)?;
        let disc = c.clone() * &c - F::from_i64(4);
        let root = disc.sqrt().ok_or_else(|| {
            Error::Domain(format!("√({disc}) is not in the {} field", big_q.mode().name()))
        })?;
        let half = F::from_ratio(1, 2);
        let q1 = (-c.clone() + &root) * &half;
        let q2 = (-c - &root) * &half;
        let (big, small) = if q1.magnitude() >= q2.magnitude() { (q1, q2) } else { (q2, q1) };
        let q = match branch {
            QBranch::Large => big,
            QBranch::Small => small,
        };
        ChainParams::new(n, m, spin_twice, q, big_q)
    }

    /// Spin 1/2 with `q = −Q`, which satisfies the boundary constraint exactly.
    pub fn spin_half(n: usize, m: usize, q: F) -> Result<Self> {
        let big_q = -q.clone();
        ChainParams::new(n, m, 1, q, big_q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn spin_twice(&self) -> u32 {
        self.spin_twice
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn big_q(&self) -> &F {
        &self.big_q
    }

    /// Same chain with a different magnon number.
    pub fn with_m(&self, m: usize) -> Result<Self> {
        if m > self.n {
            return Err(Error::Inadmissible(format!("M = {m} exceeds N = {}", self.n)));
        }
        Ok(ChainParams { m, ..self.clone() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    BetheRoots,
    Free,
}

/// A validated list of spectral parameters. Dereferences to a slice.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterVector<F> {
    values: Vec<F>,
    role: Role,
}

impl<F> Deref for ParameterVector<F> {
    type Target = [F];
    fn deref(&self) -> &[F] {
        &self.values
    }
}

fn check_nonzero_distinct<F: Field>(values: &[F], name: &str) -> Result<()> {
    if let Some(i) = values.iter().position(|x| x.is_negligible()) {
        return Err(Error::Inadmissible(format!("{name}{} = 0", i + 1)));
    }
    check_distinct(values)
}

impl<F: Field> ParameterVector<F> {
    /// Bethe roots `u`: nonzero, distinct, `uᵢuⱼ ∉ {±1, ±1/q}` for `i ≠ j`.
    pub fn bethe_roots(values: Vec<F>, params: &ChainParams<F>) -> Result<Self> {
        if values.len() != params.m {
            return Err(Error::Dimension(format!("expected {} roots, got {}", params.m, values.len())));
        }
        check_nonzero_distinct(&values, "u")?;
        let q_inv = params.q.inv().expect("q nonzero");
        for i in 0..values.len() {
            for j in 0..values.len() {
                if i == j {
                    continue;
                }
                let prod = values[i].clone() * &values[j];
                for (bad, label) in [(F::one(), "1"), (q_inv.clone(), "1/q")] {
                    if (prod.clone() - &bad).is_negligible() || (prod.clone() + &bad).is_negligible() {
                        return Err(Error::Inadmissible(format!("u{}·u{} = ±{label}", i + 1, j + 1)));
                    }
                }
            }
        }
        Ok(ParameterVector { values, role: Role::BetheRoots })
    }

    /// Free parameters `v`: nonzero, distinct, `vᵢ ∉ {±uⱼ, ±1/(q uⱼ)}`.
    pub fn free(values: Vec<F>, params: &ChainParams<F>, u: &[F]) -> Result<Self> {
        if values.len() != params.m {
            return Err(Error::Dimension(format!("expected {} parameters, got {}", params.m, values.len())));
        }
        check_nonzero_distinct(&values, "v")?;
        for (i, v) in values.iter().enumerate() {
            for (j, uj) in u.iter().enumerate() {
                let quj_inv = (params.q.clone() * uj).inv().expect("u nonzero");
                for (bad, label) in [(uj.clone(), format!("u{}", j + 1)), (quj_inv, format!("1/(q·u{})", j + 1))] {
                    if (v.clone() - &bad).is_negligible() || (v.clone() + &bad).is_negligible() {
                        return Err(Error::Inadmissible(format!("v{} = ±{label}", i + 1)));
                    }
                }
            }
        }
        Ok(ParameterVector { values, role: Role::Free })
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn into_values(self) -> Vec<F> {
        self.values
    }
}

/// Arithmetic on functions of the spectral variable, either evaluated at a
/// point or expanded as Laurent series about zero.
pub trait Spectral<F: Field> {
    type Elem: Clone;
    /// `α·z^k + β·z^{−k}`.
    fn binom(&self, alpha: F, k: i32, beta: F) -> Self::Elem;
    fn constant(&self, c: F) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// `a / b`, reporting a pole named `factor` if `b` vanishes.
    fn div(&self, a: &Self::Elem, b: &Self::Elem, factor: &str) -> Result<Self::Elem>;

    fn pow(&self, a: &Self::Elem, e: u32) -> Result<Self::Elem> {
        let mut acc = self.constant(F::one());
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// `w(c·z^k)` for `k > 0`.
    fn w_of(&self, c: &F, k: i32) -> Result<Self::Elem> {
        let inv = c.inv().ok_or_else(|| Error::Pole("w(0)".into()))?;
        Ok(self.binom(c.clone(), k, -inv))
    }
}

/// Evaluation at a nonzero point.
pub struct At<F> {
    v: F,
    v_inv: F,
}

impl<F: Field> At<F> {
    pub fn new(v: &F) -> Result<Self> {
        let v_inv = v.inv().ok_or_else(|| Error::Pole("v = 0".into()))?;
        if v.is_negligible() {
            return Err(Error::Pole("v = 0".into()));
        }
        Ok(At { v: v.clone(), v_inv })
    }
}

impl<F: Field> Spectral<F> for At<F> {
    type Elem = F;

    fn binom(&self, alpha: F, k: i32, beta: F) -> F {
        let (pos, neg) = if k >= 0 { (&self.v, &self.v_inv) } else { (&self.v_inv, &self.v) };
        let k = k.unsigned_abs();
        alpha * pos.pow(k) + beta * neg.pow(k)
    }

    fn constant(&self, c: F) -> F {
        c
    }

    fn add(&self, a: &F, b: &F) -> Result<F> {
        Ok(a.clone() + b)
    }

    fn sub(&self, a: &F, b: &F) -> Result<F> {
        Ok(a.clone() - b)
    }

    fn mul(&self, a: &F, b: &F) -> Result<F> {
        Ok(a.clone() * b)
    }

    fn div(&self, a: &F, b: &F, factor: &str) -> Result<F> {
        a.checked_div(b, factor)
    }
}

/// Laurent expansion about zero, carried to exponent `trunc`.
pub struct Expansion {
    var: String,
    trunc: i32,
}

impl Expansion {
    pub fn new(var: &str, trunc: i32) -> Self {
        Expansion { var: var.to_string(), trunc }
    }
}

impl<F: Field> Spectral<F> for Expansion {
    type Elem = LaurentSeries<F>;

    fn binom(&self, alpha: F, k: i32, beta: F) -> LaurentSeries<F> {
        LaurentSeries::binomial(&self.var, alpha, k, beta)
    }

    fn constant(&self, c: F) -> LaurentSeries<F> {
        LaurentSeries::constant(&self.var, c)
    }

    fn add(&self, a: &LaurentSeries<F>, b: &LaurentSeries<F>) -> Result<LaurentSeries<F>> {
        a.add(b)
    }

    fn sub(&self, a: &LaurentSeries<F>, b: &LaurentSeries<F>) -> Result<LaurentSeries<F>> {
        a.sub(b)
    }

    fn mul(&self, a: &LaurentSeries<F>, b: &LaurentSeries<F>) -> Result<LaurentSeries<F>> {
        a.mul(b)
    }

    fn div(&self, a: &LaurentSeries<F>, b: &LaurentSeries<F>, factor: &str) -> Result<LaurentSeries<F>> {
        if b.leading().is_none() {
            return Err(Error::Pole(factor.to_string()));
        }
        a.div_to(b, self.trunc)
    }
}

/// A factor `w(c·u^e·z)` of a root-dependent ratio.
struct RootFactor<F> {
    c: F,
    e: i32,
    name: String,
}

impl<F: Field> RootFactor<F> {
    fn value<S: Spectral<F>>(&self, s: &S, u: &F) -> Result<S::Elem> {
        let alpha = self.c.clone() * u.powi(self.e as i64).expect("u nonzero");
        s.w_of(&alpha, 1)
    }

    /// `∂_u w(c u^e z) = e c u^{e−1} z + e/(c u^{e+1}) z^{−1}`.
    fn du<S: Spectral<F>>(&self, s: &S, u: &F) -> S::Elem {
        let e = F::from_i64(self.e as i64);
        let alpha = e.clone() * &self.c * u.powi(self.e as i64 - 1).expect("u nonzero");
        let beta = e / (self.c.clone() * u.powi(self.e as i64 + 1).expect("u nonzero"));
        s.binom(alpha, 1, beta)
    }
}

/// The ratio `aⱼ` (or `bⱼ`) as two numerator and two denominator factors.
struct RootRatio<F> {
    num: [RootFactor<F>; 2],
    den: [RootFactor<F>; 2],
}

fn shared_denominator<F: Field>(q: &F, j: usize) -> [RootFactor<F>; 2] {
    [
        RootFactor { c: F::one(), e: -1, name: format!("w(v/u{j})") },
        RootFactor { c: q.clone(), e: 1, name: format!("w(v·q·u{j})") },
    ]
}

fn ratio_a<F: Field>(q: &F, j: usize) -> RootRatio<F> {
    RootRatio {
        num: [
            RootFactor { c: q.inv().expect("q nonzero"), e: -1, name: String::new() },
            RootFactor { c: F::one(), e: 1, name: String::new() },
        ],
        den: shared_denominator(q, j),
    }
}

fn ratio_b<F: Field>(q: &F, j: usize) -> RootRatio<F> {
    RootRatio {
        num: [
            RootFactor { c: q.clone(), e: -1, name: String::new() },
            RootFactor { c: q.clone() * q, e: 1, name: String::new() },
        ],
        den: shared_denominator(q, j),
    }
}

impl<F: Field> RootRatio<F> {
    fn value<S: Spectral<F>>(&self, s: &S, u: &F) -> Result<S::Elem> {
        let n = s.mul(&self.num[0].value(s, u)?, &self.num[1].value(s, u)?)?;
        let d0 = self.den[0].value(s, u)?;
        let d1 = self.den[1].value(s, u)?;
        let t = s.div(&n, &d0, &self.den[0].name)?;
        s.div(&t, &d1, &self.den[1].name)
    }

    /// Quotient-rule derivative in `u`.
    fn du<S: Spectral<F>>(&self, s: &S, u: &F) -> Result<S::Elem> {
        let (n0, n1) = (self.num[0].value(s, u)?, self.num[1].value(s, u)?);
        let (d0, d1) = (self.den[0].value(s, u)?, self.den[1].value(s, u)?);
        let (n0p, n1p) = (self.num[0].du(s, u), self.num[1].du(s, u));
        let (d0p, d1p) = (self.den[0].du(s, u), self.den[1].du(s, u));
        let num = s.mul(&n0, &n1)?;
        let num_p = s.add(&s.mul(&n0p, &n1)?, &s.mul(&n0, &n1p)?)?;
        let den = s.mul(&d0, &d1)?;
        let den_p = s.add(&s.mul(&d0p, &d1)?, &s.mul(&d0, &d1p)?)?;
        // (num' den − num den') / den², dividing factor by factor for pole names.
        let top = s.sub(&s.mul(&num_p, &den)?, &s.mul(&num, &den_p)?)?;
        let mut out = top;
        for d in [&d0, &d0] {
            out = s.div(&out, d, &self.den[0].name)?;
        }
        for d in [&d1, &d1] {
            out = s.div(&out, d, &self.den[1].name)?;
        }
        Ok(out)
    }
}

/// `A(v)` and `B(v)`, the root-independent parts of the two summands.
fn amplitudes<F: Field, S: Spectral<F>>(p: &ChainParams<F>, s: &S) -> Result<(S::Elem, S::Elem)> {
    let q = &p.q;
    let two_n = 2 * p.n as u32;
    let den = s.w_of(q, 2)?;
    let a_num = s.mul(&s.w_of(&(q.clone() * q), 2)?, &s.pow(&s.w_of(q, 1)?, two_n)?)?;
    let b_num = s.mul(&s.w_of(&F::one(), 2)?, &s.pow(&s.w_of(&F::one(), 1)?, two_n)?)?;
    let zero = s.constant(F::zero());
    let a = s.sub(&zero, &s.div(&a_num, &den, "w(v²·q)")?)?;
    let b = s.sub(&zero, &s.div(&b_num, &den, "w(v²·q)")?)?;
    Ok((a, b))
}

fn product_except<F: Field, S: Spectral<F>>(
    s: &S,
    p: &ChainParams<F>,
    u: &[F],
    skip: Option<usize>,
    ratio: fn(&F, usize) -> RootRatio<F>,
) -> Result<S::Elem> {
    let mut acc = s.constant(F::one());
    for (j, uj) in u.iter().enumerate() {
        if Some(j) == skip {
            continue;
        }
        acc = s.mul(&acc, &ratio(&p.q, j + 1).value(s, uj)?)?;
    }
    Ok(acc)
}

/// `Λ` in a spectral representation.
pub fn lambda_in<F: Field, S: Spectral<F>>(p: &ChainParams<F>, s: &S, u: &[F]) -> Result<S::Elem> {
    let (a, b) = amplitudes(p, s)?;
    let pa = product_except(s, p, u, None, ratio_a)?;
    let pb = product_except(s, p, u, None, ratio_b)?;
    s.add(&s.mul(&a, &pa)?, &s.mul(&b, &pb)?)
}

/// `∂_{uᵢ}Λ` (0-based `i`) by the product rule.
pub fn lambda_du_in<F: Field, S: Spectral<F>>(
    p: &ChainParams<F>,
    s: &S,
    i: usize,
    u: &[F],
) -> Result<S::Elem> {
    if i >= u.len() {
        return Err(Error::Dimension(format!("root index {i} out of range for M = {}", u.len())));
    }
    let (a, b) = amplitudes(p, s)?;
    let ta = s.mul(&ratio_a(&p.q, i + 1).du(s, &u[i])?, &product_except(s, p, u, Some(i), ratio_a)?)?;
    let tb = s.mul(&ratio_b(&p.q, i + 1).du(s, &u[i])?, &product_except(s, p, u, Some(i), ratio_b)?)?;
    s.add(&s.mul(&a, &ta)?, &s.mul(&b, &tb)?)
}

/// `F⁽²⁾ᵢ = 1/(w(v/uᵢ) w(v q uᵢ))`.
pub fn f2_in<F: Field, S: Spectral<F>>(p: &ChainParams<F>, s: &S, i: usize, u: &[F]) -> Result<S::Elem> {
    let ui = u
        .get(i)
        .ok_or_else(|| Error::Dimension(format!("root index {i} out of range for M = {}", u.len())))?;
    let [d0, d1] = shared_denominator(&p.q, i + 1);
    let one = s.constant(F::one());
    let t = s.div(&one, &d0.value(s, ui)?, &d0.name)?;
    s.div(&t, &d1.value(s, ui)?, &d1.name)
}

/// `Λ(v, u)`.
pub fn lambda_eval<F: Field>(p: &ChainParams<F>, v: &F, u: &[F]) -> Result<F> {
    lambda_in(p, &At::new(v)?, u)
}

/// `∂_{uᵢ}Λ(v, u)`, 0-based `i`.
pub fn lambda_du<F: Field>(p: &ChainParams<F>, i: usize, v: &F, u: &[F]) -> Result<F> {
    lambda_du_in(p, &At::new(v)?, i, u)
}

/// `F⁽²⁾ᵢ(v)`, 0-based `i`.
pub fn f2_eval<F: Field>(p: &ChainParams<F>, i: usize, v: &F, u: &[F]) -> Result<F> {
    f2_in(p, &At::new(v)?, i, u)
}

/// The two generating families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Family {
    /// `F⁽¹⁾ᵢ = ∂_{uᵢ}Λ`.
    One,
    /// `F⁽²⁾ᵢ = 1/(w(v/uᵢ) w(v q uᵢ))`.
    Two,
}

impl Family {
    pub fn index(self) -> u8 {
        match self {
            Family::One => 1,
            Family::Two => 2,
        }
    }
}

/// `F⁽ᵃ⁾ᵢ(v)`, 0-based `i`.
pub fn f_eval<F: Field>(p: &ChainParams<F>, family: Family, i: usize, v: &F, u: &[F]) -> Result<F> {
    match family {
        Family::One => lambda_du(p, i, v, u),
        Family::Two => f2_eval(p, i, v, u),
    }
}

/// Default expansion order `2N + 10`.
pub fn default_order<F>(p: &ChainParams<F>) -> i32 {
    2 * p.n as i32 + 10
}

fn expansion_for<F>(p: &ChainParams<F>, order: i32) -> Expansion {
    // Intermediate quotients lose up to 4N + 2M + 4 orders against the
    // negative-valuation factors before the final product.
    Expansion::new("z", order + 4 * p.n as i32 + 2 * p.m as i32 + 10)
}

fn finish<F: Field>(s: LaurentSeries<F>, order: i32) -> Result<LaurentSeries<F>> {
    if s.trunc() < order {
        return Err(Error::InvalidSeries(format!(
            "expansion only known to order {}, requested {order}",
            s.trunc()
        )));
    }
    Ok(s.truncate(order))
}

/// Laurent expansion of `Λ(z, u)` about `z = 0`, up to `z^order`.
pub fn lambda_series<F: Field>(p: &ChainParams<F>, u: &[F], order: i32) -> Result<LaurentSeries<F>> {
    finish(lambda_in(p, &expansion_for(p, order), u)?, order)
}

/// Laurent expansion of `F⁽ᵃ⁾ᵢ(z)` about `z = 0`, up to `z^order`; 0-based `i`.
pub fn f_series<F: Field>(
    p: &ChainParams<F>,
    family: Family,
    i: usize,
    u: &[F],
    order: i32,
) -> Result<LaurentSeries<F>> {
    let s = expansion_for(p, order);
    let raw = match family {
        Family::One => lambda_du_in(p, &s, i, u)?,
        Family::Two => f2_in(p, &s, i, u)?,
    };
    finish(raw, order)
}

/// The prefactor
/// `2^{−M} Q^{−2Ms} Πⱼ w(uⱼ)^{2N} uⱼ w(uⱼ²) / (w(uⱼ²) w(vⱼ²q²)) · Π_{i>j} w(uᵢuⱼq²)/w(uᵢuⱼ)`.
/// The `w(uⱼ²)` ratio is kept as written; it fails (rather than cancels) when `uⱼ² = 1`.
pub fn g_prefactor<F: Field>(p: &ChainParams<F>, u: &[F], v: &[F]) -> Result<F> {
    let m = u.len();
    if v.len() != m {
        return Err(Error::Dimension(format!("{} roots but {} free parameters", m, v.len())));
    }
    let two_n = 2 * p.n as u32;
    let q2 = p.q.clone() * &p.q;
    let mut acc = F::from_ratio(1, 2).pow(m as u32);
    let qpow = p
        .big_q
        .powi(-((m as i64) * p.spin_twice as i64))
        .ok_or_else(|| Error::Pole("Q".into()))?;
    acc = acc * qpow;
    for j in 0..m {
        let uj2 = u[j].clone() * &u[j];
        let wu2 = w(&uj2)?;
        let num = w(&u[j])?.pow(two_n) * &u[j] * &wu2;
        let t = num.checked_div(&wu2, &format!("w(u{}²)", j + 1))?;
        let wv = w(&(v[j].clone() * &v[j] * &q2))?;
        acc = acc * t.checked_div(&wv, &format!("w(v{}²·q²)", j + 1))?;
    }
    for i in 0..m {
        for j in 0..i {
            let uu = u[i].clone() * &u[j];
            let num = w(&(uu.clone() * &q2))?;
            let den = w(&uu)?;
            acc = acc * num.checked_div(&den, &format!("w(u{}·u{})", i + 1, j + 1))?;
        }
    }
    Ok(acc)
}

/// `det_{i,j} F⁽ᵃ⁾ᵢ(vⱼ)` over arbitrary points (rows indexed by the family
/// member, columns by the point).
pub fn family_det<F: Field>(p: &ChainParams<F>, family: Family, u: &[F], points: &[F]) -> Result<F> {
    if points.len() != u.len() {
        return Err(Error::Dimension(format!("{} points for M = {}", points.len(), u.len())));
    }
    let m = SquareMatrix::try_from_fn(u.len(), |i, j| f_eval(p, family, i, &points[j], u))?;
    Ok(m.det())
}

/// The kernel `det ∂_{uᵢ}Λ(vⱼ) / det(1/(w(vᵢ/uⱼ) w(vᵢuⱼq)))`.
pub fn kernel<F: Field>(p: &ChainParams<F>, u: &[F], v: &[F]) -> Result<F> {
    let num = family_det(p, Family::One, u, v)?;
    let den = family_det(p, Family::Two, u, v)?;
    if den.is_negligible() {
        return Err(Error::Singular("denominator matrix 1/(w(vᵢ/uⱼ)w(vᵢuⱼq))".into()));
    }
    Ok(num / den)
}

/// The Slavnov product `G · kernel`.
pub fn slavnov<F: Field>(p: &ChainParams<F>, u: &[F], v: &[F]) -> Result<F> {
    Ok(g_prefactor(p, u, v)? * kernel(p, u, v)?)
}
