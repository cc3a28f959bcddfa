//! On-shell Bethe roots, found by requiring that `Λ(v, u)` has no pole at
//! `v = uⱼ`.
//!
//! The residue of `Λ` at `v = uⱼ` factors as
//! `(uⱼ/2) w(q) w(uⱼ²) w(q²uⱼ²) / w(q uⱼ²) · Gⱼ(u)` with
//!
//! ```text
//! Gⱼ(u) = [w(uⱼq)^{2N} Π_{k≠j} a_k(uⱼ) − w(uⱼ)^{2N} Π_{k≠j} b_k(uⱼ)] / w(q uⱼ²)
//! ```
//!
//! and the solver drives `G` to zero by damped Newton iteration in
//! high-precision complex arithmetic.

use num::{BigInt, BigRational};
use serde::Serialize;

use crate::chain::{ChainParams, ParameterVector};
use crate::error::{Error, Result};
use crate::field::{limit_denominator, w, CFloat, Field, Float, Quadratic, Rational};
use crate::matrix::{check_distinct, SquareMatrix};

/// Newton stops once `max |Gⱼ|` drops below this.
const TARGET: f64 = 1e-40;
/// A solution counts as converged when every residue is below this.
pub const RESIDUE_TOLERANCE: f64 = 1e-12;
/// Roots closer than this (or closer to a singular configuration) are degenerate.
const SEPARATION: f64 = 1e-8;
const MAX_ITERATIONS: usize = 100;

fn a_k<F: Field>(q: &F, v: &F, uk: &F) -> Result<F> {
    let num = w(&(v.clone() / (q.clone() * uk)))? * w(&(v.clone() * uk))?;
    let den = w(&(v.clone() / uk))? * w(&(v.clone() * q * uk))?;
    num.checked_div(&den, "a_k")
}

fn b_k<F: Field>(q: &F, v: &F, uk: &F) -> Result<F> {
    let q2 = q.clone() * q;
    let num = w(&(v.clone() * q / uk))? * w(&(v.clone() * &q2 * uk))?;
    let den = w(&(v.clone() / uk))? * w(&(v.clone() * q * uk))?;
    num.checked_div(&den, "b_k")
}

/// `Res_{v=uⱼ} Λ(v, u)` in closed form; 0-based `j`.
pub fn lambda_residue<F: Field>(p: &ChainParams<F>, u: &[F], j: usize) -> Result<F> {
    let q = p.q();
    let uj = &u[j];
    let uj2 = uj.clone() * uj;
    let q2 = q.clone() * q;
    let two_n = 2 * p.n() as u32;
    let den = w(&(q.clone() * &uj2))?;
    let (mut pa, mut pb) = (F::one(), F::one());
    for (k, uk) in u.iter().enumerate() {
        if k != j {
            pa = pa * a_k(q, uj, uk)?;
            pb = pb * b_k(q, uj, uk)?;
        }
    }
    let big_a = -(w(&(uj2.clone() * &q2))? * w(&(uj.clone() * q))?.pow(two_n)).checked_div(&den, "w(u²q)")?;
    let big_b = -(w(&uj2)? * w(uj)?.pow(two_n)).checked_div(&den, "w(u²q)")?;
    let q_inv = q.inv().ok_or_else(|| Error::Pole("q".into()))?;
    let a_tilde = (w(&q_inv)? * w(&uj2)?).checked_div(&den, "w(q u²)")?;
    let b_tilde = (w(q)? * w(&(q2 * &uj2))?).checked_div(&den, "w(q u²)")?;
    let half = F::from_ratio(1, 2);
    Ok(half * uj * (big_a * a_tilde * pa + big_b * b_tilde * pb))
}

/// The reduced Bethe function `Gⱼ(u)`; 0-based `j`.
pub fn bethe_function<F: Field>(p: &ChainParams<F>, u: &[F], j: usize) -> Result<F> {
    let q = p.q();
    let uj = &u[j];
    let two_n = 2 * p.n() as u32;
    let (mut pa, mut pb) = (F::one(), F::one());
    for (k, uk) in u.iter().enumerate() {
        if k != j {
            pa = pa * a_k(q, uj, uk)?;
            pb = pb * b_k(q, uj, uk)?;
        }
    }
    let e = w(&(uj.clone() * q))?.pow(two_n) * pa - w(uj)?.pow(two_n) * pb;
    e.checked_div(&w(&(q.clone() * uj * uj))?, "w(q u²)")
}

/// Closed-form `M = 1` roots: `u² = (1 − ζq)/(q(q − ζ))` with `ζ^{2N} = 1`, `ζ ≠ ±1`.
/// Returns one representative `u` per admissible `ζ` (the other is `−u`).
pub fn single_magnon_roots(p: &ChainParams<CFloat>) -> Vec<CFloat> {
    let n = p.n() as u32;
    let q = p.q();
    (1..2 * n)
        .filter(|&k| k != n)
        .map(|k| {
            let zeta = CFloat::unit_root(std::f64::consts::PI * k as f64 / n as f64, 2 * n);
            let u2 = (CFloat::one() - zeta.clone() * q) / (q.clone() * (q.clone() - &zeta));
            u2.sqrt().expect("complex square root")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BetheSolution {
    #[serde(serialize_with = "ser_values")]
    pub roots: Vec<CFloat>,
    /// `max_j |Res_{v=uⱼ} Λ|`.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    pub diagnostics: Vec<String>,
}

fn ser_values<S: serde::Serializer>(v: &[CFloat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn max_abs(values: &[CFloat]) -> Float {
    values.iter().map(CFloat::abs).fold(Float::zero(), |a, b| if b > a { b } else { a })
}

fn system(p: &ChainParams<CFloat>, u: &[CFloat]) -> Result<Vec<CFloat>> {
    (0..u.len()).map(|j| bethe_function(p, u, j)).collect()
}

fn degeneracy(p: &ChainParams<CFloat>, u: &[CFloat]) -> Option<String> {
    let sep = Float::from_f64(SEPARATION);
    let q = p.q();
    for (i, ui) in u.iter().enumerate() {
        if ui.abs() < sep {
            return Some(format!("u{} collapsed to 0", i + 1));
        }
        let qu2 = q.clone() * ui * ui;
        for s in [CFloat::one(), -CFloat::one()] {
            if (qu2.clone() - &s).abs() < sep {
                return Some(format!("q·u{}² = ±1", i + 1));
            }
        }
        for (j, uj) in u.iter().enumerate().skip(i + 1) {
            if (ui.clone() - uj).abs() < sep || (ui.clone() + uj).abs() < sep {
                return Some(format!("u{} = ±u{}", i + 1, j + 1));
            }
        }
    }
    None
}

/// Damped Newton iteration from `guess`. A guess with coinciding entries is
/// rejected; failure to converge is reported through the result's flags.
pub fn solve_bethe(p: &ChainParams<CFloat>, guess: &[CFloat]) -> Result<BetheSolution> {
    if guess.len() != p.m() {
        return Err(Error::Dimension(format!("expected {} guesses, got {}", p.m(), guess.len())));
    }
    ParameterVector::bethe_roots(guess.to_vec(), p)?;
    check_distinct(guess)?;
    if let Some(why) = degeneracy(p, guess) {
        return Err(Error::Inadmissible(format!("degenerate guess: {why}")));
    }
    let target = Float::from_f64(TARGET);
    let h = CFloat::from_f64(1e-25, 0.0);
    let mut u = guess.to_vec();
    let mut g = system(p, &u)?;
    let mut norm = max_abs(&g);
    let mut diagnostics = Vec::new();
    let mut iterations = 0;
    while norm > target && iterations < MAX_ITERATIONS {
        iterations += 1;
        let m = u.len();
        let mut cols = Vec::with_capacity(m);
        for k in 0..m {
            let mut shifted = u.clone();
            shifted[k] = shifted[k].clone() + &h;
            let gk = system(p, &shifted)?;
            cols.push(gk.into_iter().zip(&g).map(|(a, b)| (a - b) / &h).collect::<Vec<_>>());
        }
        let jac = SquareMatrix::from_fn(m, |i, k| cols[k][i].clone());
        let neg_g: Vec<CFloat> = g.iter().map(|x| -x.clone()).collect();
        let step = match jac.solve(&neg_g) {
            Ok(s) => s,
            Err(e) => {
                diagnostics.push(format!("iteration {iterations}: singular Jacobian ({e})"));
                break;
            }
        };
        // Halve the step until the residual decreases.
        let mut alpha = CFloat::one();
        let half = CFloat::from_f64(0.5, 0.0);
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<CFloat> = u.iter().zip(&step).map(|(x, d)| x.clone() + d.clone() * &alpha).collect();
            if degeneracy(p, &trial).is_none() {
                if let Ok(gt) = system(p, &trial) {
                    let nt = max_abs(&gt);
                    if nt < norm {
                        accepted = Some((trial, gt, nt));
                        break;
                    }
                }
            }
            alpha = alpha * &half;
        }
        match accepted {
            Some((trial, gt, nt)) => {
                u = trial;
                g = gt;
                norm = nt;
            }
            None => {
                diagnostics.push(format!("iteration {iterations}: line search failed at |G| = {:e}", norm.to_f64()));
                break;
            }
        }
    }
    if norm > target && iterations >= MAX_ITERATIONS {
        diagnostics.push(format!("no convergence after {MAX_ITERATIONS} iterations, |G| = {:e}", norm.to_f64()));
    }
    let residues: Vec<CFloat> = (0..u.len()).map(|j| lambda_residue(p, &u, j)).collect::<Result<_>>()?;
    let residual = max_abs(&residues).to_f64();
    let degenerate = degeneracy(p, &u);
    if let Some(why) = &degenerate {
        diagnostics.push(format!("degenerate solution: {why}"));
    }
    let converged = residual < RESIDUE_TOLERANCE && degenerate.is_none();
    Ok(BetheSolution { roots: u, residual, converged, iterations, diagnostics })
}

/// Starting points `r·e^{iθ}` on `radii × angles`, combined into every
/// `M`-subset in order.
pub fn coarse_grid(m: usize, radii: &[f64], angles: usize) -> Vec<Vec<CFloat>> {
    let mut points = Vec::new();
    for &r in radii {
        for k in 0..angles {
            // Offset the angles so that no grid point is real or imaginary.
            let theta = std::f64::consts::TAU * (k as f64 + 0.37) / angles as f64;
            points.push(CFloat::from_f64(r * theta.cos(), r * theta.sin()));
        }
    }
    let mut out = Vec::new();
    let mut idx = Vec::new();
    subsets(&points, m, 0, &mut idx, &mut out);
    out
}

fn subsets(points: &[CFloat], m: usize, start: usize, idx: &mut Vec<usize>, out: &mut Vec<Vec<CFloat>>) {
    if idx.len() == m {
        out.push(idx.iter().map(|&i| points[i].clone()).collect());
        return;
    }
    for i in start..points.len() {
        idx.push(i);
        subsets(points, m, i + 1, idx, out);
        idx.pop();
    }
}

/// Nearest Gaussian rational `a + b i` with denominators at most `max_den`,
/// for feeding a numerical root into exact identities.
pub fn gaussian_approximation(z: &CFloat, max_den: u64) -> Quadratic {
    let d = BigInt::from(max_den);
    let re: BigRational = limit_denominator(&z.re.to_rational(), &d);
    let im: BigRational = limit_denominator(&z.im.to_rational(), &d);
    Quadratic::new(re, im, -1)
}

/// Copies exact parameters into complex floating point.
pub fn to_complex(p: &ChainParams<Rational>) -> Result<ChainParams<CFloat>> {
    ChainParams::new(
        p.n(),
        p.m(),
        p.spin_twice(),
        CFloat::from_rational(p.q()),
        CFloat::from_rational(p.big_q()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::lambda_eval;
    use crate::field::RingElement;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn residue_matches_limit() {
        let p = ChainParams::spin_half(3, 2, r(2, 1)).unwrap();
        let u = [r(1, 3), r(-2, 7)];
        let res = lambda_residue(&p, &u, 0).unwrap();
        assert!(!res.is_zero());
        // (v − u₁)Λ(v) at v = u₁ + ε approaches the residue linearly in ε.
        let pf = to_complex(&p).unwrap();
        let uf: Vec<CFloat> = u.iter().map(CFloat::from_rational).collect();
        let eps = CFloat::from_f64(1e-20, 0.0);
        let v = uf[0].clone() + &eps;
        let approx = lambda_eval(&pf, &v, &uf).unwrap() * &eps;
        let exact = CFloat::from_rational(&res);
        assert!((approx - &exact).abs().to_f64() < 1e-15 * exact.abs().to_f64());
    }

    #[test]
    fn single_magnon_closed_form_solves() {
        let p = to_complex(&ChainParams::spin_half(3, 1, r(2, 1)).unwrap()).unwrap();
        let roots = single_magnon_roots(&p);
        assert_eq!(roots.len(), 4);
        for u in roots {
            assert!(lambda_residue(&p, &[u.clone()], 0).unwrap().abs().to_f64() < 1e-40);
            // |u|² = 1/q on the solution circle.
            assert!((u.norm_sqr().to_f64() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn newton_converges_and_is_a_fixed_point() {
        let p = to_complex(&ChainParams::spin_half(2, 1, r(3, 2)).unwrap()).unwrap();
        let guess = [CFloat::from_f64(0.3, 0.7)];
        let sol = solve_bethe(&p, &guess).unwrap();
        assert!(sol.converged, "{:?}", sol.diagnostics);
        assert!(sol.residual < 1e-30);
        let again = solve_bethe(&p, &sol.roots).unwrap();
        assert!(again.converged && again.iterations <= 2);
    }

    #[test]
    fn colliding_guess_rejected() {
        let p = to_complex(&ChainParams::spin_half(3, 2, r(2, 1)).unwrap()).unwrap();
        let g = CFloat::from_f64(0.3, 0.4);
        assert!(solve_bethe(&p, &[g.clone(), g]).is_err());
    }

    #[test]
    fn grid_shape() {
        assert_eq!(coarse_grid(1, &[0.5, 1.0], 8).len(), 16);
        assert_eq!(coarse_grid(2, &[1.0], 4).len(), 6);
    }
}
